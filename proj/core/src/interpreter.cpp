#include "xplore/interpreter.hpp"

#include <sstream>

#include "interpreter_detail.hpp"
#include "xplore/errors.hpp"
#include "xplore/operators.hpp"

namespace xplore {

using dsl::Expr;
using Kind = Expr::Kind;
using detail::Args;
using detail::fail;
using detail::SetsView;

namespace {

using ApplyFn = std::function<ExplorationSet(SetsView, const RelationCatalog&)>;

bool is_reserved(std::string_view name) { return name == "d" || name == "irs"; }

}  // namespace

/// Turns one operator call into a session invocation. Works on a private copy
/// of the call; nodes that evaluate to sets become invocation inputs and are
/// replaced by the input names when the intention text is rendered.
class CallCompiler {
 public:
  CallCompiler(Interpreter& interp, const Expr& call, std::optional<Input> irs)
      : interp_(interp), irs_(std::move(irs)), call_(std::make_shared<Expr>(call)) {
    call_->bang = false;
  }

  Invocation compile() {
    Expr& c = *call_;
    std::string op = c.text == "union" ? "unite" : c.text;
    Args a = detail::split_args(c, 0);
    Invocation inv;
    inv.op = op;
    ApplyFn apply = compile_op(op, c, a, inv);
    if (c.slice) {
      auto [first, last] = *c.slice;
      apply = [apply, first, last](SetsView s, const RelationCatalog& cat) {
        return slice(apply(s, cat), first, last);
      };
    }
    inv.inputs = inputs_;
    inv.apply = std::move(apply);
    inv.render = [tmpl = call_, nodes = nodes_](std::span<const std::string> names) {
      for (std::size_t k = 0; k < nodes.size(); ++k) *nodes[k] = Expr::name(names[k]);
      return dsl::print(*tmpl);
    };
    return inv;
  }

 private:
  std::size_t input(Expr& node) {
    inputs_.push_back(interp_.evaluate_in_scope(node, irs_));
    nodes_.push_back(&node);
    return inputs_.size() - 1;
  }

  Expr& positional(const Expr& call, const Args& a, std::size_t i, const char* what) {
    if (i >= a.positional.size()) fail(call, call.text + " is missing " + what);
    return *a.positional[i];
  }

  void expect_at_most(const Expr& call, const Args& a, std::size_t n) {
    if (a.positional.size() > n) fail(*a.positional[n], "unexpected argument to " + call.text);
  }

  // True when a name denotes a set (scope, dataset, binding or state).
  bool names_set(const Expr& e) const {
    if (e.kind != Kind::Name) return false;
    if (e.text == "irs") return irs_.has_value();
    return e.text == "d" || interp_.session_.binding(e.text) || interp_.session_.has_state(e.text);
  }

  Item literal(const std::string& text) const {
    if (auto item = interp_.session_.dataset().find_entity(text)) return *item;
    return Item::from_token(text);
  }

  detail::ValueSource value(Expr& e) {
    detail::ValueSource v;
    switch (e.kind) {
      case Kind::Name:
        if (names_set(e)) v.input = input(e);
        else v.items.push_back(literal(e.text));
        break;
      case Kind::SetLit:
        for (const auto& t : e.items) v.items.push_back(literal(t));
        break;
      case Kind::Number:
        v.items.push_back(Item::from_token(e.text));
        break;
      case Kind::String:
        v.items.push_back(Item::string(e.text));
        break;
      case Kind::Call:
        if (dsl::is_operator_name(e.text)) {
          v.input = input(e);
          break;
        }
        [[fallthrough]];
      default:
        fail(e, "expected an item, a set of items or a set expression");
    }
    return v;
  }

  detail::PredicateFn predicate(Expr& e) {
    return detail::as_predicate(e, [this](Expr& x) { return value(x); });
  }

  std::optional<std::size_t> level_arg(const Args& a, std::size_t pos) {
    if (auto* kw = a.kw("level")) return detail::as_size(*kw);
    if (pos < a.positional.size()) return detail::as_size(*a.positional[pos]);
    return std::nullopt;
  }

  ApplyFn compile_op(const std::string& op, Expr& c, const Args& a, Invocation& inv) {
    if (op == "pivot") {
      expect_at_most(c, a, 2);
      std::size_t in = input(positional(c, a, 0, "its input"));
      auto rp = detail::as_relpath(positional(c, a, 1, "a relation path"));
      inv.pivot_path = rp;
      return [in, rp](SetsView s, const RelationCatalog& cat) { return pivot(*s[in], rp, cat); };
    }
    if (op == "refine") {
      std::size_t in = input(positional(c, a, 0, "its input"));
      std::vector<detail::PredicateFn> filters;
      if (auto* p = a.kw("pattern")) {
        if (a.positional.size() > 1) fail(*a.positional[1], "use either filters or pattern=");
        filters = pattern_filters(*p);
      }
      for (std::size_t i = 1; i < a.positional.size(); ++i) filters.push_back(predicate(*a.positional[i]));
      inv.back_propagate = interp_bang_;
      return [in, filters](SetsView s, const RelationCatalog& cat) {
        return refine(*s[in], build_pattern(filters, s), cat);
      };
    }
    if (op == "group") {
      expect_at_most(c, a, 3);
      std::size_t in = input(positional(c, a, 0, "its input"));
      auto rp = detail::as_relpath(positional(c, a, 1, "a grouping relation"));
      GroupOptions options;
      options.level = level_arg(a, 2);
      if (auto* u = a.kw("ungrouped")) options.keep_ungrouped = detail::as_bool(*u);
      return [in, rp, options](SetsView s, const RelationCatalog& cat) {
        return group(*s[in], rp, cat, options);
      };
    }
    if (op == "rank") {
      expect_at_most(c, a, 3);
      std::size_t in = input(positional(c, a, 0, "its input"));
      std::size_t next = 1;
      std::size_t lv = 2;
      if (auto* kw = a.kw("level")) {
        lv = detail::as_size(*kw);
      } else if (a.positional.size() > 2) {
        lv = detail::as_size(*a.positional[1]);
        next = 2;
      }
      Expr* score_expr = a.kw("score");
      if (!score_expr) score_expr = &positional(c, a, next, "a score function");
      auto score = detail::as_numexpr(*score_expr);
      RankOptions options;
      if (auto* m = a.kw("missing")) options.missing_score = detail::as_number(*m);
      return [in, lv, score, options](SetsView s, const RelationCatalog& cat) {
        return rank(*s[in], lv, score, cat, options);
      };
    }
    if (op == "slice") {
      expect_at_most(c, a, 3);
      std::size_t in = input(positional(c, a, 0, "its input"));
      auto first = detail::as_size(positional(c, a, 1, "a first index"));
      auto last = detail::as_size(positional(c, a, 2, "a last index"));
      return [in, first, last](SetsView s, const RelationCatalog&) { return slice(*s[in], first, last); };
    }
    if (op == "correlate") {
      expect_at_most(c, a, 3);
      std::size_t from = input(positional(c, a, 0, "a source set"));
      std::size_t to = input(positional(c, a, 1, "a target set"));
      CorrelateOptions options;
      if (auto* m = a.kw("maxLength")) options.max_length = detail::as_size(*m);
      else if (a.positional.size() > 2) options.max_length = detail::as_size(*a.positional[2]);
      if (options.max_length == 0) fail(c, "maxLength must be positive");
      if (auto* u = a.kw("undirected")) options.undirected = detail::as_bool(*u);
      std::vector<detail::PredicateFn> filters;
      if (auto* p = a.kw("pattern")) filters = pattern_filters(*p);
      return [from, to, options, filters](SetsView s, const RelationCatalog& cat) {
        auto o = options;
        if (!filters.empty()) o.pattern = build_pattern(filters, s);
        return correlate(*s[from], *s[to], cat, o);
      };
    }
    if (op == "thmap" || op == "ahmap" || op == "chmap") {
      expect_at_most(c, a, 3);
      std::size_t in = input(positional(c, a, 0, "its input"));
      Expr* f = a.kw("f");
      std::optional<std::size_t> lv;
      if (f) {
        lv = level_arg(a, 1);
      } else if (a.positional.size() == 3) {
        lv = detail::as_size(*a.positional[1]);
        f = a.positional[2];
      } else {
        if (auto* kw = a.kw("level")) lv = detail::as_size(*kw);
        f = &positional(c, a, 1, "a mapping function");
      }
      if (op == "thmap") {
        auto t = detail::as_transform(*f);
        return [in, lv, t](SetsView s, const RelationCatalog& cat) { return thmap(*s[in], lv, t, cat); };
      }
      if (op == "ahmap") {
        auto g = detail::as_aggregation(*f);
        return [in, lv, g](SetsView s, const RelationCatalog&) { return ahmap(*s[in], lv, g); };
      }
      std::size_t arity = 2;
      if (auto* n = a.kw("arity")) arity = detail::as_size(*n);
      Selector sel = Selector::all(arity);
      if (auto* x = a.kw("select")) sel = detail::as_selector(*x, arity);
      auto comb = detail::as_combination(*f, sel.arity ? sel.arity : arity);
      return [in, lv, comb, sel](SetsView s, const RelationCatalog& cat) {
        return chmap(*s[in], lv, comb, sel, cat);
      };
    }
    if (op == "tvmap" || op == "avmap" || op == "cvmap") {
      expect_at_most(c, a, 2);
      std::size_t in = input(positional(c, a, 0, "its input"));
      Expr* f = a.kw("f");
      if (!f) f = &positional(c, a, 1, "a mapping function");
      if (op == "tvmap") {
        auto t = detail::as_edge_transform(*f);
        return [in, t](SetsView s, const RelationCatalog& cat) { return tvmap(*s[in], t, cat); };
      }
      if (op == "avmap") {
        auto g = detail::as_edge_fold(*f);
        return [in, g](SetsView s, const RelationCatalog&) { return avmap(*s[in], g); };
      }
      auto g = detail::as_edge_combination(*f);
      return [in, g](SetsView s, const RelationCatalog&) { return cvmap(*s[in], g); };
    }
    if (op == "unite" || op == "intersect" || op == "diff") {
      expect_at_most(c, a, 2);
      if (!a.keyword.empty()) fail(c, op + " takes no keyword arguments");
      std::size_t x = input(positional(c, a, 0, "a first input"));
      std::size_t y = input(positional(c, a, 1, "a second input"));
      if (op == "unite") return [x, y](SetsView s, const RelationCatalog&) { return unite(*s[x], *s[y]); };
      if (op == "intersect")
        return [x, y](SetsView s, const RelationCatalog&) { return intersect(*s[x], *s[y]); };
      return [x, y](SetsView s, const RelationCatalog&) { return diff(*s[x], *s[y]); };
    }
    fail(c, "'" + op + "' is not an exploration operator");
  }

  std::vector<detail::PredicateFn> pattern_filters(Expr& p) {
    if (!p.is_call("pattern")) fail(p, "expected pattern(...)");
    std::vector<detail::PredicateFn> out;
    for (auto& f : p.args) out.push_back(predicate(f));
    return out;
  }

  static PathPattern build_pattern(const std::vector<detail::PredicateFn>& filters, SetsView s) {
    std::vector<FilterPredicate> built;
    for (const auto& f : filters) built.push_back(f(s));
    return PathPattern(std::move(built));
  }

 public:
  bool interp_bang_ = false;

 private:
  Interpreter& interp_;
  std::optional<Input> irs_;
  std::shared_ptr<Expr> call_;
  std::vector<Input> inputs_;
  std::vector<Expr*> nodes_;
};

// ---------------------------------------------------------------------------

Input Interpreter::resolve_name(const Expr& name, const std::optional<Input>& irs) const {
  const std::string& n = name.text;
  if (n == "irs") {
    if (!irs) fail(name, "irs is only bound inside branch bodies");
    return *irs;
  }
  if (n == "d") return SourceRef{"d", ExplorationSet::flat(session_.dataset().entities())};
  if (auto b = session_.binding(n)) return *b;
  if (session_.has_state(n)) return StateId(n);
  if (auto item = session_.dataset().find_entity(n)) return SourceRef{n, ExplorationSet::flat({*item})};
  fail(name, "unbound name '" + n + "'");
}

Input Interpreter::evaluate(const Expr& expr) { return evaluate_in_scope(expr, std::nullopt); }

Input Interpreter::evaluate_in_scope(const Expr& expr, const std::optional<Input>& irs) {
  switch (expr.kind) {
    case Kind::Name:
      if (expr.bang) fail(expr, "'!' applies to refine");
      return resolve_name(expr, irs);
    case Kind::SetLit: {
      std::vector<Item> items;
      for (const auto& t : expr.items) {
        auto item = session_.dataset().find_entity(t);
        items.push_back(item ? *item : Item::from_token(t));
      }
      return SourceRef{dsl::print(expr), ExplorationSet::flat(items)};
    }
    case Kind::Call:
      break;
    default:
      fail(expr, "expected a set expression");
  }

  if (expr.text == "branch") {
    if (expr.args.size() != 3) fail(expr, "branch takes an input and two expressions");
    if (expr.bang || expr.slice) fail(expr, "branch takes no '!' or slice");
    Input in = evaluate_in_scope(expr.args[0], irs);
    Input first = evaluate_in_scope(expr.args[1], in);
    Input second = evaluate_in_scope(expr.args[2], in);
    last_branch_ = {input_name(first), input_name(second)};
    return first;
  }
  if (expr.text == "register") {
    if (expr.args.size() != 2 || expr.args[1].kind != Kind::RelPath || expr.args[1].path.steps.size() != 1)
      fail(expr, "register takes a state and a relation name");
    Input in = evaluate_in_scope(expr.args[0], irs);
    const auto* id = std::get_if<StateId>(&in);
    if (!id) fail(expr.args[0], "only states can be registered as relations");
    session_.register_computed_relation(*id, expr.args[1].path.steps[0].id);
    return in;
  }
  if (!dsl::is_operator_name(expr.text)) fail(expr, "'" + expr.text + "' does not produce a set");
  if (expr.bang && expr.text != "refine") fail(expr, "'!' applies to refine");

  CallCompiler compiler(*this, expr, irs);
  compiler.interp_bang_ = expr.bang;
  Invocation inv = compiler.compile();

  ExplorationSet extension;
  try {
    std::vector<const ExplorationSet*> sets;
    for (const auto& in : inv.inputs) sets.push_back(&session_.resolve(in));
    extension = inv.apply(sets, session_.catalog());
  } catch (const ResolutionError& e) {
    if (e.line() != 0) throw;
    throw ResolutionError(std::to_string(expr.span.line) + ":" + std::to_string(expr.span.column) +
                              ": " + e.what(),
                          expr.span.line, expr.span.column);
  } catch (const EvalError& e) {
    if (e.line() != 0) throw;
    fail(expr, e.what());
  }
  return session_.invoke(std::move(inv), std::move(extension));
}

Input Interpreter::run(const dsl::Statement& statement) {
  last_branch_.clear();
  Input value = evaluate(statement.expr);
  if (!statement.target) return value;
  const std::string& name = *statement.target;
  if (is_reserved(name)) fail(statement.expr, "'" + name + "' is reserved");
  if (!last_branch_.empty() && statement.expr.is_call("branch")) {
    session_.bind(name, StateId(last_branch_[0]));
    session_.bind(name + "_1", StateId(last_branch_[0]));
    session_.bind(name + "_2", StateId(last_branch_[1]));
    return value;
  }
  if (const auto* id = std::get_if<StateId>(&value); !id || *id != name) session_.bind(name, value);
  return value;
}

EvalResult Interpreter::run(const dsl::Script& script) {
  EvalResult result;
  std::size_t before = session_.size();
  for (const auto& st : script.statements) result.last = run(st);
  auto ids = session_.state_ids();
  result.created.assign(ids.begin() + static_cast<std::ptrdiff_t>(before), ids.end());
  return result;
}

EvalResult Interpreter::run(std::string_view script) { return run(dsl::parse_script(script)); }

std::unique_ptr<Session> load_session(std::string_view text, std::shared_ptr<const Dataset> dataset,
                                      bool check_fingerprint) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::string fingerprint;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("#dataset ", 0) == 0) fingerprint = line.substr(9);
    break;
  }
  if (fingerprint.empty()) throw LoadError("missing '#dataset <fingerprint>' header", 1);
  while (!fingerprint.empty() && std::isspace(static_cast<unsigned char>(fingerprint.back())))
    fingerprint.pop_back();
  if (check_fingerprint && fingerprint != dataset_fingerprint(*dataset))
    throw SessionError("session was saved against dataset " + fingerprint + ", not " +
                       dataset_fingerprint(*dataset));
  auto session = std::make_unique<Session>(std::move(dataset));
  Interpreter(*session).run(text);
  return session;
}

}  // namespace xplore
