#include <gtest/gtest.h>

#include <map>

#include "support/test_support.hpp"
#include "xplore/operators.hpp"

using namespace xplore;

namespace {

constexpr std::size_t kTreePairs = 200;
constexpr std::size_t kGraphs = 100;

std::mt19937_64 seeded(std::uint64_t salt) { return std::mt19937_64(0x5eed0000 + salt); }

ExplorationSet small_tree(std::mt19937_64& rng) {
  return xt::random_tree(rng, 2 + xt::below(rng, 3), 50, 6);
}

// Random relation from x0..x5 into g0..g3, as plain pairs and as a dataset.
struct RandomRelation {
  std::multimap<std::string, std::string> pairs;
  Dataset d;
};

RandomRelation random_relation(std::mt19937_64& rng, const char* id) {
  RandomRelation r;
  for (int x = 0; x < 6; ++x)
    for (int g = 0; g < 4; ++g)
      if (xt::below(rng, 3) == 0) {
        auto from = "x" + std::to_string(x);
        auto to = "g" + std::to_string(g);
        r.pairs.emplace(from, to);
        r.d.add_pair(id, Item::entity(from), Item::entity(to));
      }
  r.d.add_pair(":anchor", Item::entity("x0"), Item::entity("x0"));
  return r;
}

TEST(SetOperationOracle, UniteIntersectDiffAgreeWithPathSets) {
  auto rng = seeded(1);
  for (std::size_t i = 0; i < kTreePairs; ++i) {
    auto a = small_tree(rng);
    auto b = small_tree(rng);
    auto pa = a.path_set();
    auto pb = b.path_set();
    // A tree cannot end a path at an inner node, so a union absorbs prefixes.
    ASSERT_EQ(unite(a, b).path_set(), xt::maximal(xt::unite(pa, pb))) << to_string(a) << " | " << to_string(b);
    ASSERT_EQ(intersect(a, b).path_set(), xt::intersect(pa, pb)) << to_string(a) << " | " << to_string(b);
    ASSERT_EQ(diff(a, b).path_set(), xt::minus(pa, pb)) << to_string(a) << " | " << to_string(b);
  }
}

TEST(SetOperationOracle, AlgebraicLaws) {
  auto rng = seeded(2);
  for (std::size_t i = 0; i < kTreePairs; ++i) {
    auto a = small_tree(rng);
    auto b = small_tree(rng);
    ASSERT_TRUE(unite(a, b).same_paths(unite(b, a)));
    ASSERT_TRUE(intersect(a, b).same_paths(intersect(b, a)));
    ASSERT_TRUE(intersect(a, a).same_paths(a));
    ASSERT_TRUE(diff(a, a).empty());
    ASSERT_TRUE(unite(diff(a, b), intersect(a, b)).same_paths(a));
  }
}

TEST(RefineOracle, LevelFiltersAgreeWithBruteForce) {
  auto rng = seeded(3);
  Dataset none;
  for (std::size_t i = 0; i < kTreePairs; ++i) {
    auto a = small_tree(rng);
    std::size_t levels = 1 + xt::below(rng, 3);
    std::vector<std::set<Item>> allowed(levels);
    std::vector<FilterPredicate> filters;
    for (auto& set : allowed) {
      for (int x = 0; x < 6; ++x)
        if (xt::below(rng, 2)) set.insert(Item::entity("x" + std::to_string(x)));
      filters.push_back(FilterPredicate::equals_any({set.begin(), set.end()}));
    }
    xt::PathSet expected;
    for (const auto& p : a.path_set()) {
      bool keep = p.size() >= levels + 1;
      for (std::size_t l = 0; keep && l < levels; ++l) keep = allowed[l].count(p[l + 1]) > 0;
      if (keep) expected.insert(p);
    }
    ASSERT_EQ(refine(a, PathPattern(filters), none).path_set(), expected) << to_string(a);
  }
}

TEST(RefineOracle, RelationFilterAgreesWithBruteForce) {
  auto rng = seeded(4);
  for (std::size_t i = 0; i < kTreePairs; ++i) {
    auto a = xt::random_tree(rng, 2, 12, 6);
    auto rel = random_relation(rng, ":g");
    auto wanted = Item::entity("g" + std::to_string(xt::below(rng, 4)));
    xt::PathSet expected;
    for (const auto& p : a.path_set()) {
      auto [lo, hi] = rel.pairs.equal_range(p[1].id());
      for (auto it = lo; it != hi; ++it)
        if (it->second == wanted.id()) expected.insert(p);
    }
    PathPattern pat({FilterPredicate::equals_via(RelationPath::parse(":g"), {wanted})});
    ASSERT_EQ(refine(a, pat, rel.d).path_set(), expected);
  }
}

TEST(GroupOracle, InsertsEveryGroupAboveTheLevel) {
  auto rng = seeded(5);
  for (std::size_t i = 0; i < kTreePairs; ++i) {
    auto a = small_tree(rng);
    if (a.empty()) continue;
    auto rel = random_relation(rng, ":g");
    std::size_t lv = 2 + xt::below(rng, a.depth() - 1);
    xt::PathSet expected;
    for (const auto& p : a.path_set()) {
      if (p.size() < lv) continue;
      auto [lo, hi] = rel.pairs.equal_range(p[lv - 1].id());
      for (auto it = lo; it != hi; ++it) {
        Path q(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(lv - 1));
        q.push_back(Item::entity(it->second));
        q.insert(q.end(), p.begin() + static_cast<std::ptrdiff_t>(lv - 1), p.end());
        expected.insert(q);
      }
    }
    auto got = group(a, RelationPath::parse(":g"), rel.d, {.level = lv});
    ASSERT_EQ(got.path_set(), expected) << to_string(a) << " lv=" << lv;
  }
}

TEST(RankProperty, StableDescendingPermutation) {
  auto rng = seeded(6);
  for (std::size_t i = 0; i < kTreePairs; ++i) {
    auto a = small_tree(rng);
    if (a.depth() < 2) continue;
    Dataset scores;
    scores.add_pair(":s", Item::entity("unscored"), Item::integer(0));
    std::map<std::string, double> score;
    for (int x = 0; x < 6; ++x)
      if (xt::below(rng, 4)) {
        auto v = static_cast<std::int64_t>(xt::below(rng, 4));
        score["x" + std::to_string(x)] = static_cast<double>(v);
        scores.add_pair(":s", Item::entity("x" + std::to_string(x)), Item::integer(v));
      }
    auto value = [&](const Item& it) {
      auto f = score.find(it.id());
      return f == score.end() ? -1e300 : f->second;
    };
    std::size_t lv = 2 + xt::below(rng, a.depth() - 1);
    auto r = rank(a, lv, NumExpr::image(RelationPath::parse(":s")), scores);
    ASSERT_TRUE(r.same_paths(a));
    ASSERT_EQ(r.node_count(), a.node_count());
    for (auto parent : a.level(lv - 1)) {
      auto before = xt::child_ids(a, parent);
      auto after = xt::child_ids(r, parent);
      ASSERT_TRUE(std::is_permutation(before.begin(), before.end(), after.begin(), after.end()));
      for (std::size_t k = 1; k < after.size(); ++k) {
        auto hi = value(Item::entity(after[k - 1]));
        auto lo = value(Item::entity(after[k]));
        ASSERT_GE(hi, lo);
        if (hi == lo) {
          auto pos = [&](const std::string& id) { return std::find(before.begin(), before.end(), id); };
          ASSERT_LT(pos(after[k - 1]), pos(after[k])) << "tie order changed";
        }
      }
    }
  }
}

TEST(CorrelateOracle, AgreesWithExhaustiveSearch) {
  auto rng = seeded(7);
  for (std::size_t g = 0; g < kGraphs; ++g) {
    std::size_t n = 2 + xt::below(rng, 11);
    auto edges = xt::random_graph(rng, n, xt::below(rng, 3 * n));
    Dataset d;
    for (const auto& [a, b] : edges)
      d.add_pair(xt::below(rng, 2) ? ":r" : ":q", Item::entity(a), Item::entity(b));
    std::set<std::string> sources, targets;
    for (std::size_t i = 0; i < n; ++i) {
      if (xt::below(rng, 3) == 0) sources.insert("n" + std::to_string(i));
      if (xt::below(rng, 3) == 0) targets.insert("n" + std::to_string(i));
    }
    std::vector<Item> src, dst;
    for (const auto& s : sources) src.push_back(Item::entity(s));
    for (const auto& t : targets) dst.push_back(Item::entity(t));
    std::size_t max_len = 1 + xt::below(rng, 4);
    auto got = correlate(ExplorationSet::flat(src), ExplorationSet::flat(dst), d, {.max_length = max_len});
    auto expected = xt::maximal(xt::all_simple_paths(edges, sources, targets, max_len));
    ASSERT_EQ(got.path_set(), expected) << "graph " << g;
  }
}

}  // namespace
