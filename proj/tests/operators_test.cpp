#include <gtest/gtest.h>

#include "support/test_support.hpp"
#include "xplore/errors.hpp"
#include "xplore/ingest.hpp"
#include "xplore/operators.hpp"

using namespace xplore;
using xt::e;
using xt::tree;

namespace {

class PublicationsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    d = publications_dataset();
    for (auto [p, y] : {std::pair{"p2", 2001}, {"p1", 2002}, {"p3", 2003}, {"p4", 2004}})
      years.add_pair(":Year", e(p), Item::integer(y));
  }

  PathPattern by(const char* path, std::initializer_list<const char*> values) {
    return PathPattern({FilterPredicate::equals_via(RelationPath::parse(path), xt::items(values))});
  }

  Dataset d;
  Dataset years;
  ExplorationSet t = tree("{p1, p2, p3, p4}");
};

TEST_F(PublicationsTest, PivotToAuthors) {
  auto r = pivot(t, RelationPath::parse(":Author"), d);
  EXPECT_EQ(r.path_set(), xt::paths("{a1, a2, a3}"));
}

// Printed result lists f3, which no author is affiliated with.
TEST_F(PublicationsTest, PivotToAffiliationsTypoF3) {
  auto r = pivot(t, RelationPath::parse(":Author:Affiliation"), d);
  EXPECT_EQ(r.path_set(), xt::paths("{f1, f2}"));
  EXPECT_NE(r.path_set(), xt::paths("{f1, f2, f3}"));
}

TEST_F(PublicationsTest, PivotUnknownRelationThrows) {
  EXPECT_THROW(pivot(t, RelationPath::parse(":Nope"), d), ResolutionError);
}

TEST_F(PublicationsTest, RefineByAuthor) {
  EXPECT_EQ(refine(t, by(":Author", {"a1"}), d).path_set(), xt::paths("{p1, p2}"));
}

TEST_F(PublicationsTest, RefineByAffiliationPath) {
  EXPECT_EQ(refine(t, by(":Author:Affiliation", {"f2"}), d).path_set(), xt::paths("{p3, p4}"));
}

TEST_F(PublicationsTest, RefineIntersectBothAuthors) {
  auto r = intersect(refine(t, by(":Author", {"a2"}), d), refine(t, by(":Author", {"a3"}), d));
  EXPECT_EQ(r.path_set(), xt::paths("{p3}"));
}

TEST_F(PublicationsTest, RefineUniteEitherAuthor) {
  auto r = unite(refine(t, by(":Author", {"a2"}), d), refine(t, by(":Author", {"a3"}), d));
  EXPECT_EQ(r.path_set(), xt::paths("{p2, p3, p4}"));
}

TEST_F(PublicationsTest, RefineLevelPatternOnGroupedSet) {
  auto g = tree("{<a1, {p1, p2}>, <a2, {p2, p3}>, <a3, {p3, p4}>}");
  PathPattern pat({FilterPredicate::equals_via(RelationPath::parse(":Affiliation"), xt::items({"f1"})),
                   FilterPredicate::negate(FilterPredicate::equals(e("p2")))});
  EXPECT_EQ(refine(g, pat, d).path_set(), xt::paths("{<a1, {p1}>, <a2, {p3}>}"));
}

TEST_F(PublicationsTest, GroupByAuthor) {
  auto r = group(t, RelationPath::parse(":Author"), d);
  EXPECT_EQ(r.path_set(), xt::paths("{<a1, {p1, p2}>, <a2, {p2, p3}>, <a3, {p3, p4}>}"));
}

// Printed result puts only p3 under a2, but a2 authored p2 as well.
TEST_F(PublicationsTest, NestedGroupTypoA2P3) {
  auto by_author = group(t, RelationPath::parse(":Author"), d);
  auto r = group(by_author, RelationPath::parse(":Affiliation"), d, {.level = 2});
  EXPECT_EQ(r.path_set(), xt::paths("{<f1, {<a1, {p1, p2}>, <a2, {p2, p3}>}>, <f2, <a3, {p3, p4}>>}"));
  EXPECT_NE(r.path_set(), xt::paths("{<f1, {<a1, {p1, p2}>, <a2, p3>}>, <f2, <a3, {p3, p4}>>}"));
}

TEST_F(PublicationsTest, GroupKeepsUngroupedWhenAsked) {
  auto s = tree("{p1, f3}");
  auto r = group(s, RelationPath::parse(":Author"), d, {.keep_ungrouped = true});
  EXPECT_EQ(r.path_set().size(), 2u);
  EXPECT_EQ(xt::top_ids(r), (std::vector<std::string>{"a1", ungrouped_item().id()}));
}

TEST_F(PublicationsTest, RankByYearDescending) {
  auto r = rank(t, 2, NumExpr::image(RelationPath::parse(":Year")), years);
  EXPECT_EQ(xt::top_ids(r), (std::vector<std::string>{"p4", "p3", "p1", "p2"}));
}

TEST_F(PublicationsTest, RankByNegatedYearAscending) {
  auto score = NumExpr::mul(NumExpr::image(RelationPath::parse(":Year")), NumExpr::constant(-1));
  auto r = rank(t, 2, score, years);
  EXPECT_EQ(xt::top_ids(r), (std::vector<std::string>{"p2", "p1", "p3", "p4"}));
}

TEST_F(PublicationsTest, RankLeavesOfGroupedSet) {
  auto g = tree("{<a1, {p2, p1}>, <a2, {p3, p4}>}");
  auto r = rank(g, 3, NumExpr::image(RelationPath::parse(":Year")), years);
  auto top = r.children(ExplorationSet::kRoot);
  ASSERT_EQ(top.size(), 2u);
  EXPECT_EQ(xt::child_ids(r, top[0]), (std::vector<std::string>{"p1", "p2"}));
  EXPECT_EQ(xt::child_ids(r, top[1]), (std::vector<std::string>{"p4", "p3"}));
  EXPECT_EQ(r.root_item(), g.root_item());
}

TEST_F(PublicationsTest, RankLevelOneRejected) {
  EXPECT_THROW(rank(t, 1, NumExpr::placeholder(), years), EvalError);
}

TEST_F(PublicationsTest, RankMissingScoresGoLast) {
  auto s = tree("{f3, p1, p4}");
  auto r = rank(s, 2, NumExpr::image(RelationPath::parse(":Year")), years);
  EXPECT_EQ(xt::top_ids(r), (std::vector<std::string>{"p4", "p1", "f3"}));
}

TEST_F(PublicationsTest, CorrelateSinglePath) {
  auto r = correlate(tree("{p1}"), tree("{f1}"), d);
  EXPECT_EQ(r.path_set(), xt::paths("{<p1, <a1, f1>>}"));
}

TEST_F(PublicationsTest, CorrelateTwoPaths) {
  auto r = correlate(tree("{p2}"), tree("{f1}"), d);
  EXPECT_EQ(r.path_set(), xt::paths("{<p2, {<a1, f1>, <a2, f1>}>}"));
}

TEST_F(PublicationsTest, CorrelateRespectsMaxLength) {
  EXPECT_TRUE(correlate(tree("{p2}"), tree("{f1}"), d, {.max_length = 1}).empty());
}

TEST_F(PublicationsTest, CorrelateUndirectedFindsCoauthorPath) {
  auto r = correlate(tree("{p1}"), tree("{p3}"), d, {.max_length = 4, .undirected = true});
  EXPECT_TRUE(r.path_set().count({Item(), e("p1"), e("a1"), e("p2"), e("a2"), e("p3")}));
}

TEST(HMapTest, CurrencyConversion) {
  Dataset none;
  auto m = tree("{150.00, 160.50, 135.73}");
  auto rate = NumExpr::round(NumExpr::mul(NumExpr::placeholder(), NumExpr::constant(3.5)), 2);
  auto r = thmap(m, 1, Transform::numeric(rate), none);
  EXPECT_EQ(r.level_items(2), (std::vector<Item>{Item::real(525.00), Item::real(561.75), Item::real(475.05)}));
  EXPECT_EQ(xt::top_ids(r), (std::vector<std::string>{"525.0", "561.75", "475.05"}));
}

TEST(HMapTest, CountsPerYear) {
  auto y = tree("{<2005, {p1, p2, p3, p4}>, <2006, {p5, p6, p7}>}");
  auto r = ahmap(y, 2, Aggregation::count());
  EXPECT_EQ(r.path_set(), xt::paths("{<2005, 4>, <2006, 3>}"));
}

TEST(HMapTest, DefaultLevelIsParentsOfLeaves) {
  auto y = tree("{<2005, {p1, p2}>, <2006, {p5}>}");
  EXPECT_EQ(default_map_level(y), 2u);
  EXPECT_EQ(ahmap(y, std::nullopt, Aggregation::count()).path_set(), xt::paths("{<2005, 2>, <2006, 1>}"));
  EXPECT_EQ(default_map_level(tree("{1, 2}")), 1u);
}

TEST(HMapTest, SumAndMean) {
  auto s = tree("{1, 2, 4}");
  EXPECT_EQ(ahmap(s, 1, Aggregation::sum()).path_set(), xt::paths("{7}"));
  EXPECT_EQ(ahmap(s, 1, Aggregation::mean()).level_items(2), (std::vector<Item>{Item::real(7.0 / 3.0)}));
  EXPECT_THROW(Aggregation::mean().fold({}), EvalError);
}

TEST(HMapTest, CombinationOnSelectedColumns) {
  Dataset none;
  auto orders = tree("{<o1, {\"pA\", 3, 2.5}>, <o2, {\"pB\", 4, 10}>}");
  auto r = chmap(orders, 2, Combination::product(), Selector::at({{1, 2}}), none);
  EXPECT_EQ(r.path_set(), xt::paths("{<o1, 7.5>, <o2, 40>}"));
}

TEST(HMapTest, CombinationArityMismatchThrows) {
  Dataset none;
  EXPECT_THROW(chmap(tree("{<o1, {1, 2}>}"), 2, Combination::product(2), Selector::at({{0, 1, 1}}), none),
               EvalError);
}

TEST(VMapTest, EdgeFoldsAndCombinations) {
  auto s = tree("{<p1, <a1, f1>>, <p2, a2>}");
  EXPECT_EQ(avmap(s, EdgeFold::length()).path_set(), xt::paths("{<p1, 2>, <p2, 1>}"));
  EXPECT_EQ(cvmap(s, EdgeCombination::endpoints()).path_set(), xt::paths("{<p1, f1>, <p2, a2>}"));
}

TEST(VMapTest, TransformEdgesThroughRelation) {
  Dataset types;
  for (auto [i, ty] : {std::pair{"p1", "Pub"}, {"a1", "Person"}, {"f1", "Org"}})
    types.add_pair(":Type", e(i), e(ty));
  auto r = tvmap(tree("{<p1, <a1, f1>>}"), EdgeTransform::via(RelationPath::parse(":Type")), types);
  EXPECT_EQ(r.path_set(), xt::paths("{<Pub, <Person, Org>>}"));
}

TEST(SetOpsTest, FlatSets) {
  auto a = tree("{p1, p2, p3}");
  auto b = tree("{p2, p3, p5}");
  EXPECT_EQ(intersect(a, b).path_set(), xt::paths("{p2, p3}"));
  EXPECT_EQ(diff(a, b).path_set(), xt::paths("{p1}"));
}

// Printed union adds p4, which is in neither input.
TEST(SetOpsTest, UniteFlatTypoP4) {
  auto r = unite(tree("{p1, p2, p3}"), tree("{p2, p3, p5}"));
  EXPECT_EQ(r.path_set(), xt::paths("{p1, p2, p3, p5}"));
  EXPECT_NE(r.path_set(), xt::paths("{p1, p2, p3, p4, p5}"));
}

TEST(SetOpsTest, GroupedIntersectAndDiff) {
  auto c = tree("{<a1, {p1, p2, p3}>, <a2, {p3, p4}>}");
  auto d = tree("{<a1, {p2, p3, p5}>, <a2, {p3, p5, p6}>, <a3, p8>}");
  EXPECT_EQ(intersect(c, d).path_set(), xt::paths("{<a1, {p2, p3}>, <a2, p3>}"));
  EXPECT_EQ(diff(c, d).path_set(), xt::paths("{<a1, p1>, <a2, p4>}"));
}

// Printed union drops p5 under a1 and adds p9 under a3.
TEST(SetOpsTest, UniteGroupedTypoP9) {
  auto c = tree("{<a1, {p1, p2, p3}>, <a2, {p3, p4}>}");
  auto d = tree("{<a1, {p2, p3, p5}>, <a2, {p3, p5, p6}>, <a3, p8>}");
  auto r = unite(c, d);
  EXPECT_EQ(r.path_set(), xt::paths("{<a1, {p1, p2, p3, p5}>, <a2, {p3, p4, p5, p6}>, <a3, p8>}"));
  EXPECT_NE(r.path_set(), xt::paths("{<a1, {p1, p2, p3}>, <a2, {p3, p4, p5, p6}>, <a3, {p8, p9}>}"));
}

TEST(SetOpsTest, ResultsGetFreshRoots) {
  auto a = tree("{p1}");
  auto r = unite(a, a);
  EXPECT_NE(r.root_item(), a.root_item());
  EXPECT_TRUE(r.same_paths(a));
}

TEST(SliceTest, KeepsClampedRange) {
  auto s = tree("{a, b, c, d}");
  EXPECT_EQ(xt::top_ids(slice(s, 1, 2)), (std::vector<std::string>{"b", "c"}));
  EXPECT_EQ(xt::top_ids(slice(s, 2, 99)), (std::vector<std::string>{"c", "d"}));
  EXPECT_TRUE(slice(s, 5, 9).empty());
}

}  // namespace
