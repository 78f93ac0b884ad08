#pragma once

// Filter predicates, path patterns and the small numeric expression language
// used by score functions and transformation mappings.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xplore/model.hpp"

namespace xplore {

/// fp: I -> {true, false}. Relation-based predicates look up the image of the
/// item under evaluation through a relation path.
class FilterPredicate {
 public:
  enum class Kind {
    True,
    Equals,            // item == value, or item in value set
    EqualsVia,         // every value in :R[item] (single value: membership)
    EqualsOne,         // some value in :R[item]
    MatchAll,          // every keyword is a token of the item's label
    MatchOne,          // some keyword is a token of the item's label
    Contains,          // label contains the text (case-insensitive)
    ContainsVia,       // some image item's label contains the text
    GreaterThan,       // numeric item > threshold
    GreaterThanVia,    // some numeric image item > threshold
    Not,
    And,
    Or,
  };

  FilterPredicate() = default;  // True

  static FilterPredicate always();
  static FilterPredicate equals(Item value);
  static FilterPredicate equals_any(std::vector<Item> values);
  static FilterPredicate equals_via(RelationPath path, std::vector<Item> values);
  static FilterPredicate equals_one(RelationPath path, std::vector<Item> values);
  static FilterPredicate match_all(std::vector<std::string> keywords);
  static FilterPredicate match_one(std::vector<std::string> keywords);
  static FilterPredicate contains(std::string text);
  static FilterPredicate contains_via(RelationPath path, std::string text);
  static FilterPredicate greater_than(double threshold);
  static FilterPredicate greater_than_via(RelationPath path, double threshold);
  static FilterPredicate negate(FilterPredicate inner);
  static FilterPredicate all_of(std::vector<FilterPredicate> parts);
  static FilterPredicate any_of(std::vector<FilterPredicate> parts);

  Kind kind() const noexcept { return kind_; }
  bool is_true() const noexcept { return kind_ == Kind::True; }

  /// Total on every item. Throws ResolutionError for unknown relations.
  bool operator()(const Item& item, const RelationCatalog& catalog) const;

  /// Relation paths referenced anywhere in the predicate.
  std::vector<RelationPath> relation_paths() const;

  std::string to_string() const;

 private:
  Kind kind_ = Kind::True;
  std::optional<RelationPath> path_;
  std::vector<Item> values_;
  std::vector<std::string> keywords_;
  double threshold_ = 0;
  std::vector<FilterPredicate> parts_;
};

/// Lower-cased alphanumeric tokens of a text.
std::vector<std::string> keyword_tokens(std::string_view text);

/// Level-indexed chain of filters. Filter 0 applies to level 1 (the root)
/// and is always True.
class PathPattern {
 public:
  PathPattern() : filters_{FilterPredicate::always()} {}
  /// Filters for levels 2, 3, ... (the root filter is prepended).
  explicit PathPattern(std::vector<FilterPredicate> below_root);

  std::size_t length() const noexcept { return filters_.size(); }
  const FilterPredicate& at_level(std::size_t lv) const { return filters_.at(lv - 1); }
  const std::vector<FilterPredicate>& filters() const noexcept { return filters_; }

  /// True when the path is at least as long as the pattern and every node at a
  /// constrained level satisfies its filter. Levels past the pattern are free.
  bool matches(const Path& path, const RelationCatalog& catalog) const;

 private:
  std::vector<FilterPredicate> filters_;
};

/// Context for evaluating numeric expressions on one tree node.
struct NumContext {
  const Item& item;
  const RelationCatalog& catalog;
  /// Number of children of the node being scored, when known.
  std::optional<std::size_t> child_count;
};

/// Numeric expression over %item: constants, relation images :R[%item],
/// child counts c(%item), unary minus, + - *, and round(x, digits).
class NumExpr {
 public:
  enum class Op { Constant, Placeholder, Image, ChildCount, Neg, Add, Sub, Mul, Round };

  static NumExpr constant(double v);
  static NumExpr placeholder();
  static NumExpr image(RelationPath path);
  static NumExpr child_count();
  static NumExpr neg(NumExpr a);
  static NumExpr add(NumExpr a, NumExpr b);
  static NumExpr sub(NumExpr a, NumExpr b);
  static NumExpr mul(NumExpr a, NumExpr b);
  static NumExpr round(NumExpr a, int digits);

  Op op() const noexcept { return op_; }
  bool is_placeholder() const noexcept { return op_ == Op::Placeholder; }

  /// nullopt when a relation image is empty. Non-numeric operands throw
  /// EvalError naming the item.
  std::optional<double> evaluate(const NumContext& ctx) const;

  std::string to_string() const;

 private:
  Op op_ = Op::Constant;
  double value_ = 0;
  int digits_ = 0;
  std::optional<RelationPath> path_;
  std::vector<NumExpr> operands_;
};

/// scr: the score used by rank. An empty relation image yields no score.
using ScoreFunction = NumExpr;

}  // namespace xplore
