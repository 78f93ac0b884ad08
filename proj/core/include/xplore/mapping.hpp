#pragma once

// Mapping functions for the horizontal (per children-set) and vertical
// (per path) map operators.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xplore/model.hpp"
#include "xplore/predicate.hpp"

namespace xplore {

enum class MappingKind { Transformation, Aggregation, Combination };

/// Unary item -> item function used by thmap.
struct Transform {
  std::string name;
  std::function<Item(const Item&, const RelationCatalog&)> fn;

  static Transform identity();
  /// Numeric expression over %item; the result is a float literal.
  static Transform numeric(NumExpr expr);
  /// First item of :R[item]; items with an empty image are kept as they are.
  static Transform via(RelationPath path);

  Item operator()(const Item& item, const RelationCatalog& catalog) const {
    return fn(item, catalog);
  }
};

/// Binary aggregation folded right to left from an identity seed.
struct Aggregation {
  enum class Kind { Count, Sum, Mean };

  Kind kind = Kind::Count;

  static Aggregation count() { return {Kind::Count}; }
  static Aggregation sum() { return {Kind::Sum}; }
  static Aggregation mean() { return {Kind::Mean}; }
  /// Looks up "count", "sum" or "mean".
  static std::optional<Aggregation> named(std::string_view name);

  std::string_view name() const;
  /// f(c1, f(c2, ... f(cn, seed))). Throws EvalError on non-numeric input to
  /// sum/mean and on the mean of nothing.
  Item fold(std::span<const Item> children) const;
};

/// n-ary item function used by chmap. arity 0 accepts any tuple size.
struct Combination {
  std::string name;
  std::size_t arity = 0;
  std::function<Item(std::span<const Item>, const RelationCatalog&)> fn;

  static Combination product(std::size_t arity = 2);
  static Combination sum(std::size_t arity = 2);
  static std::optional<Combination> named(std::string_view name, std::size_t arity);
};

/// Which ordered n-tuples of a children set a combination is applied to.
struct Selector {
  /// Empty: every tuple of the n-fold Cartesian power. Otherwise 0-based child
  /// positions; tuples referencing a missing position are skipped.
  std::vector<std::vector<std::size_t>> positions;
  std::size_t arity = 2;

  static Selector all(std::size_t arity) { return {{}, arity}; }
  static Selector at(std::vector<std::vector<std::size_t>> tuples);

  std::vector<std::vector<Item>> tuples(std::span<const Item> children) const;
};

/// Edge -> edge function used by tvmap.
struct EdgeTransform {
  std::string name;
  std::function<Edge(const Edge&, const RelationCatalog&)> fn;

  static EdgeTransform identity();
  /// <i, j> -> <:R[i], :R[j]>, first image item, or the item itself when empty.
  static EdgeTransform via(RelationPath path);
};

/// Binary edge function folded right to left over a path's edges (avmap).
/// The accumulator is empty for the innermost application.
struct EdgeFold {
  std::string name;
  std::function<Edge(const Edge&, const std::optional<Edge>&)> fn;

  /// <first item, number of edges>.
  static EdgeFold length();
  /// <first item, last item>.
  static EdgeFold span();
  static std::optional<EdgeFold> named(std::string_view name);
};

/// n-ary edge function applied once per path (cvmap).
struct EdgeCombination {
  std::string name;
  std::function<Edge(std::span<const Edge>)> fn;

  /// <first item, last item>.
  static EdgeCombination endpoints();
  /// <first item, number of edges>.
  static EdgeCombination length();
  static std::optional<EdgeCombination> named(std::string_view name);
};

}  // namespace xplore
