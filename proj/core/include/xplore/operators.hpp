#pragma once

// Exploration operators. All of them are pure: inputs are never modified and
// every result gets a fresh root unless stated otherwise.

#include <cstddef>
#include <limits>
#include <optional>

#include "xplore/mapping.hpp"
#include "xplore/model.hpp"
#include "xplore/predicate.hpp"

namespace xplore {

/// Flat set of everything the leaves of a reach through rp.
ExplorationSet pivot(const ExplorationSet& a, const RelationPath& rp, const RelationCatalog& catalog);

/// Paths of a that match the pattern. The back-propagation marker is handled
/// by the session; the operator itself is a plain filter.
ExplorationSet refine(const ExplorationSet& a, const PathPattern& pattern,
                      const RelationCatalog& catalog);

/// Parent inserted for nodes whose grouping image is empty when
/// keep_ungrouped is set.
Item ungrouped_item();

struct GroupOptions {
  /// Level whose nodes get new parents; defaults to the leaf level.
  std::optional<std::size_t> level;
  bool keep_ungrouped = false;
};

/// Every grouping item i in gR[node at lv] becomes the new parent of that
/// node. Paths shorter than lv and nodes with an empty image are dropped.
ExplorationSet group(const ExplorationSet& a, const RelationPath& gr, const RelationCatalog& catalog,
                     const GroupOptions& options = {});

struct RankOptions {
  /// Score used when the score expression has no value for an item.
  double missing_score = -std::numeric_limits<double>::infinity();
};

/// Orders the children of every level-(lv-1) node by descending score,
/// stable on ties. The root is kept.
ExplorationSet rank(const ExplorationSet& a, std::size_t lv, const ScoreFunction& score,
                    const RelationCatalog& catalog, const RankOptions& options = {});

/// Keeps level-2 children with 0-based index in [first, last], clamped.
ExplorationSet slice(const ExplorationSet& a, std::size_t first, std::size_t last);

struct CorrelateOptions {
  std::optional<PathPattern> pattern;
  std::size_t max_length = 4;
  /// Also traverse relation pairs backwards.
  bool undirected = false;
};

/// Simple paths of 1..max_length edges from a leaf of a to a leaf of b.
ExplorationSet correlate(const ExplorationSet& a, const ExplorationSet& b,
                         const RelationCatalog& catalog, const CorrelateOptions& options = {});

/// Default level of the horizontal maps: parents of the deepest leaves.
std::size_t default_map_level(const ExplorationSet& a);

ExplorationSet thmap(const ExplorationSet& a, std::optional<std::size_t> lv, const Transform& f,
                     const RelationCatalog& catalog);
ExplorationSet ahmap(const ExplorationSet& a, std::optional<std::size_t> lv, const Aggregation& f);
ExplorationSet chmap(const ExplorationSet& a, std::optional<std::size_t> lv, const Combination& f,
                     const Selector& selector, const RelationCatalog& catalog);

/// Vertical maps work on the edges below the root. Paths without such edges
/// are passed through.
ExplorationSet tvmap(const ExplorationSet& a, const EdgeTransform& f, const RelationCatalog& catalog);
ExplorationSet avmap(const ExplorationSet& a, const EdgeFold& f);
ExplorationSet cvmap(const ExplorationSet& a, const EdgeCombination& f);

ExplorationSet unite(const ExplorationSet& a, const ExplorationSet& b);
ExplorationSet intersect(const ExplorationSet& a, const ExplorationSet& b);
ExplorationSet diff(const ExplorationSet& a, const ExplorationSet& b);

}  // namespace xplore
