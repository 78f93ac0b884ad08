#include "xplore/predicate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "xplore/errors.hpp"

namespace xplore {

std::vector<std::string> keyword_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string text_of(const Item& item, const RelationCatalog& catalog) {
  if (auto label = catalog.label_of(item)) return *label;
  return item.id();
}

std::set<std::string> token_set(const Item& item, const RelationCatalog& catalog) {
  auto tokens = keyword_tokens(text_of(item, catalog));
  return {tokens.begin(), tokens.end()};
}

std::string join_items(const std::vector<Item>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += values[i].id();
  }
  return values.size() == 1 ? out : "{" + out + "}";
}

}  // namespace

FilterPredicate FilterPredicate::always() { return {}; }

FilterPredicate FilterPredicate::equals(Item value) {
  FilterPredicate p;
  p.kind_ = Kind::Equals;
  p.values_.push_back(std::move(value));
  return p;
}

FilterPredicate FilterPredicate::equals_any(std::vector<Item> values) {
  FilterPredicate p;
  p.kind_ = Kind::Equals;
  p.values_ = std::move(values);
  return p;
}

FilterPredicate FilterPredicate::equals_via(RelationPath path, std::vector<Item> values) {
  FilterPredicate p;
  p.kind_ = Kind::EqualsVia;
  p.path_ = std::move(path);
  p.values_ = std::move(values);
  return p;
}

FilterPredicate FilterPredicate::equals_one(RelationPath path, std::vector<Item> values) {
  FilterPredicate p;
  p.kind_ = Kind::EqualsOne;
  p.path_ = std::move(path);
  p.values_ = std::move(values);
  return p;
}

FilterPredicate FilterPredicate::match_all(std::vector<std::string> keywords) {
  FilterPredicate p;
  p.kind_ = Kind::MatchAll;
  for (const auto& k : keywords)
    for (auto& t : keyword_tokens(k)) p.keywords_.push_back(std::move(t));
  return p;
}

FilterPredicate FilterPredicate::match_one(std::vector<std::string> keywords) {
  FilterPredicate p = match_all(std::move(keywords));
  p.kind_ = Kind::MatchOne;
  return p;
}

FilterPredicate FilterPredicate::contains(std::string text) {
  FilterPredicate p;
  p.kind_ = Kind::Contains;
  p.keywords_.push_back(lower(text));
  return p;
}

FilterPredicate FilterPredicate::contains_via(RelationPath path, std::string text) {
  FilterPredicate p = contains(std::move(text));
  p.kind_ = Kind::ContainsVia;
  p.path_ = std::move(path);
  return p;
}

FilterPredicate FilterPredicate::greater_than(double threshold) {
  FilterPredicate p;
  p.kind_ = Kind::GreaterThan;
  p.threshold_ = threshold;
  return p;
}

FilterPredicate FilterPredicate::greater_than_via(RelationPath path, double threshold) {
  FilterPredicate p = greater_than(threshold);
  p.kind_ = Kind::GreaterThanVia;
  p.path_ = std::move(path);
  return p;
}

FilterPredicate FilterPredicate::negate(FilterPredicate inner) {
  FilterPredicate p;
  p.kind_ = Kind::Not;
  p.parts_.push_back(std::move(inner));
  return p;
}

FilterPredicate FilterPredicate::all_of(std::vector<FilterPredicate> parts) {
  FilterPredicate p;
  p.kind_ = Kind::And;
  p.parts_ = std::move(parts);
  return p;
}

FilterPredicate FilterPredicate::any_of(std::vector<FilterPredicate> parts) {
  FilterPredicate p;
  p.kind_ = Kind::Or;
  p.parts_ = std::move(parts);
  return p;
}

bool FilterPredicate::operator()(const Item& item, const RelationCatalog& catalog) const {
  switch (kind_) {
    case Kind::True:
      return true;
    case Kind::Equals:
      return std::find(values_.begin(), values_.end(), item) != values_.end();
    case Kind::EqualsVia: {
      auto image = path_image(catalog, *path_, item);
      if (values_.empty()) return false;
      return std::all_of(values_.begin(), values_.end(), [&](const Item& v) {
        return std::find(image.begin(), image.end(), v) != image.end();
      });
    }
    case Kind::EqualsOne: {
      auto image = path_image(catalog, *path_, item);
      return std::any_of(values_.begin(), values_.end(), [&](const Item& v) {
        return std::find(image.begin(), image.end(), v) != image.end();
      });
    }
    case Kind::MatchAll: {
      auto tokens = token_set(item, catalog);
      return !keywords_.empty() && std::all_of(keywords_.begin(), keywords_.end(),
                                               [&](const auto& k) { return tokens.contains(k); });
    }
    case Kind::MatchOne: {
      auto tokens = token_set(item, catalog);
      return std::any_of(keywords_.begin(), keywords_.end(),
                         [&](const auto& k) { return tokens.contains(k); });
    }
    case Kind::Contains:
      return lower(text_of(item, catalog)).find(keywords_.front()) != std::string::npos;
    case Kind::ContainsVia: {
      for (const auto& j : path_image(catalog, *path_, item))
        if (lower(text_of(j, catalog)).find(keywords_.front()) != std::string::npos) return true;
      return false;
    }
    case Kind::GreaterThan:
      return item.is_numeric() && item.number() > threshold_;
    case Kind::GreaterThanVia: {
      for (const auto& j : path_image(catalog, *path_, item))
        if (j.is_numeric() && j.number() > threshold_) return true;
      return false;
    }
    case Kind::Not:
      return !parts_.front()(item, catalog);
    case Kind::And:
      return std::all_of(parts_.begin(), parts_.end(),
                         [&](const auto& p) { return p(item, catalog); });
    case Kind::Or:
      return std::any_of(parts_.begin(), parts_.end(),
                         [&](const auto& p) { return p(item, catalog); });
  }
  return false;
}

std::vector<RelationPath> FilterPredicate::relation_paths() const {
  std::vector<RelationPath> out;
  if (path_) out.push_back(*path_);
  for (const auto& p : parts_) {
    auto inner = p.relation_paths();
    out.insert(out.end(), inner.begin(), inner.end());
  }
  return out;
}

std::string FilterPredicate::to_string() const {
  auto quoted = [this] {
    std::string out;
    for (std::size_t i = 0; i < keywords_.size(); ++i) out += (i ? " " : "") + keywords_[i];
    return "\"" + out + "\"";
  };
  auto list = [this] {
    std::string out;
    for (std::size_t i = 0; i < parts_.size(); ++i) out += (i ? ", " : "") + parts_[i].to_string();
    return out;
  };
  std::ostringstream num;
  num << threshold_;
  switch (kind_) {
    case Kind::True: return "true";
    case Kind::Equals: return "equals(" + join_items(values_) + ")";
    case Kind::EqualsVia: return "equals(" + path_->to_string() + ", " + join_items(values_) + ")";
    case Kind::EqualsOne: return "equalsOne(" + path_->to_string() + ", " + join_items(values_) + ")";
    case Kind::MatchAll: return "matchAll(" + quoted() + ")";
    case Kind::MatchOne: return "matchOne(" + quoted() + ")";
    case Kind::Contains: return "contains(" + quoted() + ")";
    case Kind::ContainsVia: return "contains(" + path_->to_string() + ", " + quoted() + ")";
    case Kind::GreaterThan: return "greaterThan(%item, " + num.str() + ")";
    case Kind::GreaterThanVia: return "greaterThan(" + path_->to_string() + ", " + num.str() + ")";
    case Kind::Not: return "not(" + list() + ")";
    case Kind::And: return "and(" + list() + ")";
    case Kind::Or: return "or(" + list() + ")";
  }
  return "true";
}

// ---------------------------------------------------------------------------

PathPattern::PathPattern(std::vector<FilterPredicate> below_root) {
  filters_.reserve(below_root.size() + 1);
  filters_.push_back(FilterPredicate::always());
  for (auto& f : below_root) filters_.push_back(std::move(f));
}

bool PathPattern::matches(const Path& path, const RelationCatalog& catalog) const {
  if (path.size() < filters_.size()) return false;
  for (std::size_t i = 1; i < filters_.size(); ++i)
    if (!filters_[i](path[i], catalog)) return false;
  return true;
}

// ---------------------------------------------------------------------------

NumExpr NumExpr::constant(double v) {
  NumExpr e;
  e.op_ = Op::Constant;
  e.value_ = v;
  return e;
}

NumExpr NumExpr::placeholder() {
  NumExpr e;
  e.op_ = Op::Placeholder;
  return e;
}

NumExpr NumExpr::image(RelationPath path) {
  NumExpr e;
  e.op_ = Op::Image;
  e.path_ = std::move(path);
  return e;
}

NumExpr NumExpr::child_count() {
  NumExpr e;
  e.op_ = Op::ChildCount;
  return e;
}

NumExpr NumExpr::neg(NumExpr a) {
  NumExpr e;
  e.op_ = Op::Neg;
  e.operands_.push_back(std::move(a));
  return e;
}

NumExpr NumExpr::add(NumExpr a, NumExpr b) {
  NumExpr e;
  e.op_ = Op::Add;
  e.operands_ = {std::move(a), std::move(b)};
  return e;
}

NumExpr NumExpr::sub(NumExpr a, NumExpr b) {
  NumExpr e = add(std::move(a), std::move(b));
  e.op_ = Op::Sub;
  return e;
}

NumExpr NumExpr::mul(NumExpr a, NumExpr b) {
  NumExpr e = add(std::move(a), std::move(b));
  e.op_ = Op::Mul;
  return e;
}

NumExpr NumExpr::round(NumExpr a, int digits) {
  NumExpr e;
  e.op_ = Op::Round;
  e.digits_ = digits;
  e.operands_.push_back(std::move(a));
  return e;
}

std::optional<double> NumExpr::evaluate(const NumContext& ctx) const {
  switch (op_) {
    case Op::Constant:
      return value_;
    case Op::Placeholder:
      if (!ctx.item.is_numeric()) throw EvalError("item '" + ctx.item.id() + "' is not numeric");
      return ctx.item.number();
    case Op::Image: {
      auto image = path_image(ctx.catalog, *path_, ctx.item);
      if (image.empty()) return std::nullopt;
      std::optional<double> best;
      for (const auto& j : image) {
        if (!j.is_numeric())
          throw EvalError("score of '" + ctx.item.id() + "': " + path_->to_string() +
                          " yields non-numeric '" + j.id() + "'");
        best = best ? std::max(*best, j.number()) : j.number();
      }
      return best;
    }
    case Op::ChildCount:
      return static_cast<double>(ctx.child_count.value_or(0));
    case Op::Neg: {
      auto a = operands_[0].evaluate(ctx);
      if (!a) return std::nullopt;
      return -*a;
    }
    case Op::Add:
    case Op::Sub:
    case Op::Mul: {
      auto a = operands_[0].evaluate(ctx);
      auto b = operands_[1].evaluate(ctx);
      if (!a || !b) return std::nullopt;
      return op_ == Op::Add ? *a + *b : op_ == Op::Sub ? *a - *b : *a * *b;
    }
    case Op::Round: {
      auto a = operands_[0].evaluate(ctx);
      if (!a) return std::nullopt;
      double scale = std::pow(10.0, digits_);
      return std::round(*a * scale) / scale;
    }
  }
  return std::nullopt;
}

std::string NumExpr::to_string() const {
  std::ostringstream os;
  switch (op_) {
    case Op::Constant: os << value_; break;
    case Op::Placeholder: os << "%item"; break;
    case Op::Image: os << path_->to_string() << "[%item]"; break;
    case Op::ChildCount: os << "c(%item)"; break;
    case Op::Neg: os << "-(" << operands_[0].to_string() << ")"; break;
    case Op::Add: os << "(" << operands_[0].to_string() << " + " << operands_[1].to_string() << ")"; break;
    case Op::Sub: os << "(" << operands_[0].to_string() << " - " << operands_[1].to_string() << ")"; break;
    case Op::Mul: os << "(" << operands_[0].to_string() << " * " << operands_[1].to_string() << ")"; break;
    case Op::Round: os << "round(" << operands_[0].to_string() << ", " << digits_ << ")"; break;
  }
  return os.str();
}

}  // namespace xplore
