#include "xplore/operators.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "xplore/errors.hpp"

namespace xplore {

namespace {

using NodeId = ExplorationSet::NodeId;

void copy_subtree(const ExplorationSet& src, NodeId from, ExplorationSet& dst, NodeId to) {
  for (auto child : src.children(from)) {
    auto id = dst.add_child(to, src.node(child).item);
    copy_subtree(src, child, dst, id);
  }
}

void check_predicates(const PathPattern& pattern, const RelationCatalog& catalog) {
  for (const auto& f : pattern.filters())
    for (const auto& rp : f.relation_paths()) check_resolvable(catalog, rp);
}

// Copies the tree down to level lv and lets emit() rebuild the children of
// every level-lv node.
template <typename Emit>
ExplorationSet rebuild_at_level(const ExplorationSet& a, std::size_t lv, Emit emit) {
  ExplorationSet out;
  std::function<void(NodeId, NodeId)> walk = [&](NodeId from, NodeId to) {
    const auto& node = a.node(from);
    if (node.level == lv) {
      std::vector<Item> children;
      for (auto c : node.children) children.push_back(a.node(c).item);
      for (const auto& item : emit(children)) out.add_child(to, item);
      return;
    }
    for (auto c : node.children) walk(c, out.add_child(to, a.node(c).item));
  };
  walk(ExplorationSet::kRoot, ExplorationSet::kRoot);
  return out;
}

std::size_t resolve_level(const ExplorationSet& a, std::optional<std::size_t> lv) {
  std::size_t level = lv.value_or(default_map_level(a));
  if (level == 0) throw EvalError("map level must be at least 1");
  return level;
}

std::vector<Edge> edges_below_root(const Path& p) {
  std::vector<Edge> edges;
  for (std::size_t i = 2; i < p.size(); ++i) edges.emplace_back(p[i - 1], p[i]);
  return edges;
}

}  // namespace

ExplorationSet pivot(const ExplorationSet& a, const RelationPath& rp, const RelationCatalog& catalog) {
  check_resolvable(catalog, rp);
  std::vector<Item> out;
  std::unordered_set<Item> seen;
  for (const auto& leaf : a.leaves())
    for (auto& j : path_image(catalog, rp, leaf))
      if (seen.insert(j).second) out.push_back(std::move(j));
  return ExplorationSet::flat(out);
}

ExplorationSet refine(const ExplorationSet& a, const PathPattern& pattern,
                      const RelationCatalog& catalog) {
  check_predicates(pattern, catalog);
  std::vector<Path> kept;
  for (auto& p : a.paths())
    if (pattern.matches(p, catalog)) kept.push_back(std::move(p));
  return ExplorationSet::from_paths(kept);
}

Item ungrouped_item() { return Item::entity("⊥"); }

ExplorationSet group(const ExplorationSet& a, const RelationPath& gr, const RelationCatalog& catalog,
                     const GroupOptions& options) {
  check_resolvable(catalog, gr);
  std::size_t lv = options.level.value_or(a.depth());
  if (lv < 2) throw EvalError("group level must be at least 2");
  std::vector<Path> out;
  for (const auto& p : a.paths()) {
    if (p.size() < lv) continue;
    auto image = path_image(catalog, gr, p[lv - 1]);
    if (image.empty() && options.keep_ungrouped) image.push_back(ungrouped_item());
    for (const auto& g : image) {
      Path q(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(lv - 1));
      q.push_back(g);
      q.insert(q.end(), p.begin() + static_cast<std::ptrdiff_t>(lv - 1), p.end());
      out.push_back(std::move(q));
    }
  }
  return ExplorationSet::from_paths(out);
}

ExplorationSet rank(const ExplorationSet& a, std::size_t lv, const ScoreFunction& score,
                    const RelationCatalog& catalog, const RankOptions& options) {
  if (lv < 2) throw EvalError("rank level must be at least 2");
  ExplorationSet out = a;
  if (lv > a.depth()) return out;
  for (auto parent : a.level(lv - 1)) {
    auto kids = a.children(parent);
    std::vector<std::pair<double, NodeId>> scored;
    scored.reserve(kids.size());
    for (auto c : kids) {
      const auto& node = a.node(c);
      auto s = score.evaluate(NumContext{node.item, catalog, node.children.size()});
      scored.emplace_back(s.value_or(options.missing_score), c);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    std::vector<NodeId> order;
    for (const auto& [s, c] : scored) order.push_back(c);
    out.reorder_children(parent, std::move(order));
  }
  return out;
}

ExplorationSet slice(const ExplorationSet& a, std::size_t first, std::size_t last) {
  ExplorationSet out;
  auto kids = a.children(ExplorationSet::kRoot);
  for (std::size_t i = first; i <= last && i < kids.size(); ++i) {
    auto id = out.add_child(ExplorationSet::kRoot, a.node(kids[i]).item);
    copy_subtree(a, kids[i], out, id);
  }
  return out;
}

ExplorationSet correlate(const ExplorationSet& a, const ExplorationSet& b,
                         const RelationCatalog& catalog, const CorrelateOptions& options) {
  if (options.max_length == 0) throw EvalError("correlate maxLength must be positive");
  if (options.pattern) check_predicates(*options.pattern, catalog);

  std::unordered_map<Item, std::vector<Item>> next;
  std::unordered_set<Edge, decltype([](const Edge& e) {
                       return std::hash<Item>{}(e.first) ^ (std::hash<Item>{}(e.second) << 1);
                     })>
      seen;
  auto link = [&](const Item& i, const Item& j) {
    if (seen.insert({i, j}).second) next[i].push_back(j);
  };
  catalog.for_each([&](const Relation& r) {
    for (const auto& [i, j] : r.pairs()) {
      link(i, j);
      if (options.undirected) link(j, i);
    }
  });

  auto target_list = b.leaves();
  std::unordered_set<Item> targets(target_list.begin(), target_list.end());
  Item root = fresh_root();
  std::vector<Path> out;
  Path current{root};
  std::unordered_set<Item> on_path;

  std::function<void(const Item&)> dfs = [&](const Item& at) {
    if (current.size() > 2 && targets.contains(at)) {
      if (!options.pattern || options.pattern->matches(current, catalog)) out.push_back(current);
    }
    if (current.size() - 2 == options.max_length) return;
    auto it = next.find(at);
    if (it == next.end()) return;
    for (const auto& j : it->second) {
      if (on_path.contains(j)) continue;
      on_path.insert(j);
      current.push_back(j);
      dfs(j);
      current.pop_back();
      on_path.erase(j);
    }
  };

  for (const auto& s : a.leaves()) {
    current.assign({root, s});
    on_path = {s};
    dfs(s);
  }
  return ExplorationSet::from_paths(out, root);
}

std::size_t default_map_level(const ExplorationSet& a) {
  return a.depth() > 1 ? a.depth() - 1 : 1;
}

ExplorationSet thmap(const ExplorationSet& a, std::optional<std::size_t> lv, const Transform& f,
                     const RelationCatalog& catalog) {
  return rebuild_at_level(a, resolve_level(a, lv), [&](const std::vector<Item>& children) {
    std::vector<Item> mapped;
    for (const auto& c : children) mapped.push_back(f(c, catalog));
    return mapped;
  });
}

ExplorationSet ahmap(const ExplorationSet& a, std::optional<std::size_t> lv, const Aggregation& f) {
  return rebuild_at_level(a, resolve_level(a, lv), [&](const std::vector<Item>& children) {
    return std::vector<Item>{f.fold(children)};
  });
}

ExplorationSet chmap(const ExplorationSet& a, std::optional<std::size_t> lv, const Combination& f,
                     const Selector& selector, const RelationCatalog& catalog) {
  if (f.arity != 0 && selector.arity != 0 && f.arity != selector.arity)
    throw EvalError("combination '" + f.name + "' takes " + std::to_string(f.arity) +
                    " items but the selector yields " + std::to_string(selector.arity));
  return rebuild_at_level(a, resolve_level(a, lv), [&](const std::vector<Item>& children) {
    std::vector<Item> mapped;
    for (const auto& t : selector.tuples(children)) mapped.push_back(f.fn(t, catalog));
    return mapped;
  });
}

namespace {

template <typename PerPath>
ExplorationSet map_paths(const ExplorationSet& a, PerPath per_path) {
  Item root = fresh_root();
  std::vector<Path> out;
  for (const auto& p : a.paths()) {
    auto edges = edges_below_root(p);
    if (edges.empty()) {
      out.push_back(p);
      continue;
    }
    Path q{root};
    per_path(edges, q);
    out.push_back(std::move(q));
  }
  return ExplorationSet::from_paths(out, root);
}

}  // namespace

ExplorationSet tvmap(const ExplorationSet& a, const EdgeTransform& f, const RelationCatalog& catalog) {
  return map_paths(a, [&](const std::vector<Edge>& edges, Path& q) {
    for (std::size_t k = 0; k < edges.size(); ++k) {
      auto m = f.fn(edges[k], catalog);
      if (k == 0) q.push_back(m.first);
      q.push_back(m.second);
    }
  });
}

ExplorationSet avmap(const ExplorationSet& a, const EdgeFold& f) {
  return map_paths(a, [&](const std::vector<Edge>& edges, Path& q) {
    std::optional<Edge> acc;
    for (auto it = edges.rbegin(); it != edges.rend(); ++it) acc = f.fn(*it, acc);
    q.push_back(acc->first);
    q.push_back(acc->second);
  });
}

ExplorationSet cvmap(const ExplorationSet& a, const EdgeCombination& f) {
  return map_paths(a, [&](const std::vector<Edge>& edges, Path& q) {
    auto e = f.fn(edges);
    q.push_back(e.first);
    q.push_back(e.second);
  });
}

ExplorationSet unite(const ExplorationSet& a, const ExplorationSet& b) {
  auto paths = a.paths();
  auto more = b.paths();
  paths.insert(paths.end(), more.begin(), more.end());
  return ExplorationSet::from_paths(paths);
}

namespace {

ExplorationSet filter_against(const ExplorationSet& a, const ExplorationSet& b, bool keep_common) {
  auto other = b.path_set();
  std::vector<Path> out;
  for (auto& p : a.paths()) {
    Path key = p;
    key.front() = Item();
    if (other.contains(key) == keep_common) out.push_back(std::move(p));
  }
  return ExplorationSet::from_paths(out);
}

}  // namespace

ExplorationSet intersect(const ExplorationSet& a, const ExplorationSet& b) {
  return filter_against(a, b, true);
}

ExplorationSet diff(const ExplorationSet& a, const ExplorationSet& b) {
  return filter_against(a, b, false);
}

}  // namespace xplore
