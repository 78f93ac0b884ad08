#pragma once

// Test-side helpers: a reader for the {a, <b, {c}>} notation, brute-force
// path-set oracles and random generators. Nothing here calls the operators.

#include <ostream>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "xplore/model.hpp"

namespace xplore {
void PrintTo(const Item& item, std::ostream* os);
}

namespace xt {

using xplore::ExplorationSet;
using xplore::Item;
using xplore::Path;
using PathSet = std::set<Path>;

/// "{p1, <a1, {p2, p3}>}" -> tree; tokens follow the triple literal rules.
ExplorationSet tree(std::string_view text);

/// Paths of a set written in the same notation, root blanked.
PathSet paths(std::string_view text);

Item e(const char* id);
std::vector<Item> items(std::initializer_list<const char*> ids);

/// Children of a node, in order, as ids.
std::vector<std::string> child_ids(const ExplorationSet& s, ExplorationSet::NodeId n);
std::vector<std::string> top_ids(const ExplorationSet& s);

// Oracles over plain path sets.
PathSet unite(const PathSet& a, const PathSet& b);
PathSet intersect(const PathSet& a, const PathSet& b);
PathSet minus(const PathSet& a, const PathSet& b);
/// Paths that are not a proper prefix of another path in the set.
PathSet maximal(const PathSet& s);

using Edges = std::vector<std::pair<std::string, std::string>>;

/// Every simple directed walk of 1..max_len edges from a source to a target,
/// as [blank root, source, ..., target].
PathSet all_simple_paths(const Edges& edges, const std::set<std::string>& sources,
                         const std::set<std::string>& targets, std::size_t max_len);

/// Random tree of depth <= max_depth (root included) and <= max_nodes nodes
/// over the ids x0..x{alphabet-1}.
ExplorationSet random_tree(std::mt19937_64& rng, std::size_t max_depth, std::size_t max_nodes,
                           std::size_t alphabet);

/// Random directed graph over n0..n{nodes-1} without self loops.
Edges random_graph(std::mt19937_64& rng, std::size_t nodes, std::size_t edges);

std::size_t below(std::mt19937_64& rng, std::size_t n);

}  // namespace xt
