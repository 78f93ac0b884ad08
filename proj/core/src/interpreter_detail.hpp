#pragma once

// Conversions from DSL argument expressions to operator parameters.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xplore/dsl.hpp"
#include "xplore/mapping.hpp"
#include "xplore/operators.hpp"
#include "xplore/predicate.hpp"

namespace xplore::detail {

using dsl::Expr;

[[noreturn]] void fail(const Expr& at, const std::string& message);

/// Positional and keyword arguments of a call, starting at args[first].
struct Args {
  std::vector<Expr*> positional;
  std::map<std::string, Expr*, std::less<>> keyword;

  Expr* kw(std::string_view key) const;
};

Args split_args(Expr& call, std::size_t first);

std::size_t as_size(const Expr& e);
double as_number(const Expr& e);
bool as_bool(const Expr& e);
RelationPath as_relpath(const Expr& e);

NumExpr as_numexpr(const Expr& e);
Transform as_transform(const Expr& e);
Aggregation as_aggregation(const Expr& e);
Combination as_combination(const Expr& e, std::size_t arity);
Selector as_selector(const Expr& e, std::size_t arity);
EdgeTransform as_edge_transform(const Expr& e);
EdgeFold as_edge_fold(const Expr& e);
EdgeCombination as_edge_combination(const Expr& e);

using SetsView = std::span<const ExplorationSet* const>;

/// A predicate argument that may read the extension of an invocation input.
struct ValueSource {
  std::optional<std::size_t> input;  // index into the invocation inputs
  std::vector<Item> items;           // literal values otherwise

  std::vector<Item> values(SetsView sets) const;
};

using PredicateFn = std::function<FilterPredicate(SetsView)>;

/// Callback resolving a value argument of a predicate: registers invocation
/// inputs for set-valued names and calls, returns literals otherwise.
using ValueResolver = std::function<ValueSource(Expr&)>;

PredicateFn as_predicate(Expr& e, const ValueResolver& values);

}  // namespace xplore::detail
