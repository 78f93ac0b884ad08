#include <charconv>
#include <cmath>

#include "interpreter_detail.hpp"
#include "xplore/errors.hpp"

namespace xplore::detail {

using Kind = Expr::Kind;

void fail(const Expr& at, const std::string& message) {
  throw EvalError(std::to_string(at.span.line) + ":" + std::to_string(at.span.column) + ": " + message,
                  at.span.line, at.span.column);
}

Expr* Args::kw(std::string_view key) const {
  auto it = keyword.find(key);
  return it == keyword.end() ? nullptr : it->second;
}

Args split_args(Expr& call, std::size_t first) {
  Args out;
  for (std::size_t i = first; i < call.args.size(); ++i) {
    auto& a = call.args[i];
    if (a.kind == Kind::KwArg) {
      if (!out.keyword.emplace(a.text, &a.args[0]).second) fail(a, "duplicate argument '" + a.text + "'");
    } else {
      out.positional.push_back(&a);
    }
  }
  return out;
}

double as_number(const Expr& e) {
  if (e.kind == Kind::Number) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(e.text.data(), e.text.data() + e.text.size(), v);
    if (ec == std::errc{}) return v;
  }
  if (e.kind == Kind::Unary && e.args[0].kind == Kind::Number) return -as_number(e.args[0]);
  fail(e, "expected a number");
}

std::size_t as_size(const Expr& e) {
  double v = as_number(e);
  if (v < 0 || std::floor(v) != v) fail(e, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool as_bool(const Expr& e) {
  if (e.kind == Kind::Name && e.text == "true") return true;
  if (e.kind == Kind::Name && e.text == "false") return false;
  fail(e, "expected true or false");
}

RelationPath as_relpath(const Expr& e) {
  if (e.kind != Kind::RelPath) fail(e, "expected a relation path");
  return e.path;
}

NumExpr as_numexpr(const Expr& e) {
  switch (e.kind) {
    case Kind::Number:
      return NumExpr::constant(as_number(e));
    case Kind::Placeholder:
      return NumExpr::placeholder();
    case Kind::RelPath:
      return NumExpr::image(e.path);
    case Kind::RelImage:
      if (e.args[0].kind != Kind::Placeholder) fail(e.args[0], "relation images take %item");
      return NumExpr::image(e.path);
    case Kind::Name:
      if (e.text == "count_children") return NumExpr::child_count();
      break;
    case Kind::Call:
      if (e.text == "c" && e.args.size() == 1 && e.args[0].kind == Kind::Placeholder)
        return NumExpr::child_count();
      if (e.text == "round" && e.args.size() == 2)
        return NumExpr::round(as_numexpr(e.args[0]), static_cast<int>(as_size(e.args[1])));
      break;
    case Kind::Unary:
      return NumExpr::neg(as_numexpr(e.args[0]));
    case Kind::Binary: {
      auto a = as_numexpr(e.args[0]);
      auto b = as_numexpr(e.args[1]);
      if (e.text == "+") return NumExpr::add(std::move(a), std::move(b));
      if (e.text == "-") return NumExpr::sub(std::move(a), std::move(b));
      return NumExpr::mul(std::move(a), std::move(b));
    }
    default:
      break;
  }
  fail(e, "expected a numeric expression over %item");
}

Transform as_transform(const Expr& e) {
  if (e.kind == Kind::Name && e.text == "identity") return Transform::identity();
  if (e.kind == Kind::RelPath) return Transform::via(e.path);
  if (e.is_call("via") && e.args.size() == 1) return Transform::via(as_relpath(e.args[0]));
  return Transform::numeric(as_numexpr(e));
}

Aggregation as_aggregation(const Expr& e) {
  if (e.kind == Kind::Name)
    if (auto a = Aggregation::named(e.text)) return *a;
  fail(e, "expected count, sum or mean");
}

Combination as_combination(const Expr& e, std::size_t arity) {
  if (e.kind == Kind::Name)
    if (auto c = Combination::named(e.text, arity)) return *c;
  fail(e, "expected product or sum");
}

Selector as_selector(const Expr& e, std::size_t arity) {
  auto tuple = [](const Expr& t) {
    if (!t.is_call("tuple")) fail(t, "expected tuple(...)");
    std::vector<std::size_t> positions;
    for (const auto& a : t.args) positions.push_back(as_size(a));
    return positions;
  };
  if (e.kind == Kind::Name && e.text == "all") return Selector::all(arity);
  if (e.is_call("tuple")) return Selector::at({tuple(e)});
  if (e.is_call("tuples")) {
    std::vector<std::vector<std::size_t>> all;
    for (const auto& t : e.args) all.push_back(tuple(t));
    return Selector::at(std::move(all));
  }
  fail(e, "expected all, tuple(...) or tuples(...)");
}

EdgeTransform as_edge_transform(const Expr& e) {
  if (e.kind == Kind::Name && e.text == "identity") return EdgeTransform::identity();
  if (e.kind == Kind::RelPath) return EdgeTransform::via(e.path);
  if (e.is_call("via") && e.args.size() == 1) return EdgeTransform::via(as_relpath(e.args[0]));
  fail(e, "expected identity or via(:relation)");
}

EdgeFold as_edge_fold(const Expr& e) {
  if (e.kind == Kind::Name)
    if (auto f = EdgeFold::named(e.text)) return *f;
  fail(e, "expected length or span");
}

EdgeCombination as_edge_combination(const Expr& e) {
  if (e.kind == Kind::Name)
    if (auto f = EdgeCombination::named(e.text)) return *f;
  fail(e, "expected endpoints or length");
}

std::vector<Item> ValueSource::values(SetsView sets) const {
  if (input) return sets[*input]->leaves();
  return items;
}

namespace {

std::vector<std::string> keywords(const Expr& call) {
  std::vector<std::string> out;
  for (const auto& a : call.args) {
    if (a.kind == Kind::String || a.kind == Kind::Name || a.kind == Kind::Number)
      out.push_back(a.text);
    else
      fail(a, "expected a keyword");
  }
  if (out.empty()) fail(call, call.text + " needs at least one keyword");
  return out;
}

std::string text_arg(const Expr& e) {
  if (e.kind == Kind::String || e.kind == Kind::Name) return e.text;
  fail(e, "expected a string");
}

}  // namespace

PredicateFn as_predicate(Expr& e, const ValueResolver& resolve) {
  if ((e.kind == Kind::Name && e.text == "true") || e.is_call("true"))
    return [](SetsView) { return FilterPredicate::always(); };
  if (e.kind != Kind::Call || !dsl::is_predicate_name(e.text)) fail(e, "expected a filter predicate");
  for (const auto& a : e.args)
    if (a.kind == Kind::KwArg) fail(a, "filter predicates take no keyword arguments");

  const std::string& name = e.text;
  auto& args = e.args;
  if (name == "equals" || name == "equalsOne") {
    if (args.size() == 1 && name == "equals") {
      auto v = resolve(args[0]);
      return [v](SetsView s) { return FilterPredicate::equals_any(v.values(s)); };
    }
    if (args.size() != 2) fail(e, name + " takes a relation path and a value");
    if (args[0].kind == Kind::Placeholder && name == "equals") {
      auto v = resolve(args[1]);
      return [v](SetsView s) { return FilterPredicate::equals_any(v.values(s)); };
    }
    auto rp = as_relpath(args[0]);
    auto v = resolve(args[1]);
    if (name == "equals")
      return [rp, v](SetsView s) { return FilterPredicate::equals_via(rp, v.values(s)); };
    return [rp, v](SetsView s) { return FilterPredicate::equals_one(rp, v.values(s)); };
  }
  if (name == "matchAll") {
    auto k = keywords(e);
    return [k](SetsView) { return FilterPredicate::match_all(k); };
  }
  if (name == "matchOne") {
    auto k = keywords(e);
    return [k](SetsView) { return FilterPredicate::match_one(k); };
  }
  if (name == "contains") {
    if (args.size() == 1) {
      auto t = text_arg(args[0]);
      return [t](SetsView) { return FilterPredicate::contains(t); };
    }
    if (args.size() != 2) fail(e, "contains takes a text, optionally after a relation path");
    auto rp = as_relpath(args[0]);
    auto t = text_arg(args[1]);
    return [rp, t](SetsView) { return FilterPredicate::contains_via(rp, t); };
  }
  if (name == "greaterThan") {
    if (args.size() == 1 || (args.size() == 2 && args[0].kind == Kind::Placeholder)) {
      double v = as_number(args.back());
      return [v](SetsView) { return FilterPredicate::greater_than(v); };
    }
    if (args.size() != 2) fail(e, "greaterThan takes a relation path or %item and a number");
    auto rp = as_relpath(args[0]);
    double v = as_number(args[1]);
    return [rp, v](SetsView) { return FilterPredicate::greater_than_via(rp, v); };
  }
  std::vector<PredicateFn> parts;
  for (auto& a : args) parts.push_back(as_predicate(a, resolve));
  if (name == "not") {
    if (parts.size() != 1) fail(e, "not takes one predicate");
    return [p = parts[0]](SetsView s) { return FilterPredicate::negate(p(s)); };
  }
  if (parts.empty()) fail(e, name + " needs at least one predicate");
  bool conj = name == "and";
  return [parts, conj](SetsView s) {
    std::vector<FilterPredicate> built;
    for (const auto& p : parts) built.push_back(p(s));
    return conj ? FilterPredicate::all_of(std::move(built)) : FilterPredicate::any_of(std::move(built));
  };
}

}  // namespace xplore::detail
