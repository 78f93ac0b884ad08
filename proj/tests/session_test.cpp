#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <thread>

#include "support/test_support.hpp"
#include "xplore/errors.hpp"
#include "xplore/ingest.hpp"
#include "xplore/interpreter.hpp"
#include "xplore/operators.hpp"
#include "xplore/session.hpp"

using namespace xplore;

namespace {

class SessionTest : public ::testing::Test {
 protected:
  std::shared_ptr<const Dataset> d = std::make_shared<Dataset>(publications_dataset());
  Session session{d};
  Interpreter in{session};

  std::set<Path> ext(const std::string& id) { return session.extension(id).path_set(); }
};

TEST_F(SessionTest, EveryApplicationIsAState) {
  auto r = in.run("s = {p1, p2, p3}.pivot(:Author).pivot(:Affiliation)");
  EXPECT_EQ(r.created, (std::vector<StateId>{"s1", "s2"}));
  EXPECT_EQ(session.size(), 2u);
  EXPECT_EQ(ext("s2"), xt::paths("{f1, f2}"));
  ASSERT_TRUE(session.binding("s"));
  EXPECT_EQ(input_name(*session.binding("s")), "s2");
}

TEST_F(SessionTest, ExtensionsAreLazy) {
  int calls = 0;
  auto inv = Invocation::unary("pivot", SourceRef{"{p1, p2}", xt::tree("{p1, p2}")}, ":Author",
                               [&](const ExplorationSet& in, const RelationCatalog& c) {
                                 ++calls;
                                 return pivot(in, RelationPath::parse(":Author"), c);
                               });
  session.invoke(std::move(inv));
  EXPECT_FALSE(session.is_materialized("s1"));
  EXPECT_EQ(session.state("s1").intention_text, "{p1, p2}.pivot(:Author)");
  ext("s1");
  EXPECT_EQ(calls, 1);
  ext("s1");
  EXPECT_TRUE(session.is_materialized("s1"));
}

TEST_F(SessionTest, UnknownStateThrows) {
  EXPECT_THROW(session.state("s9"), SessionError);
  EXPECT_THROW(in.run("s1 = s9.pivot(:Author)"), Error);
}

TEST_F(SessionTest, TrailRecordsDependencies) {
  in.run("s1 = {p1, p2, p3, p4}.pivot(:Author)\n"
         "s2 = s1.pivot(:Affiliation)\n"
         "s3 = {p1}.pivot(:Author)\n"
         "s4 = s1.diff(s3)");
  auto t = session.trail();
  ASSERT_EQ(t.nodes.size(), 4u);
  EXPECT_EQ(t.nodes[0].op, "pivot");
  EXPECT_EQ(t.nodes[0].sources, (std::vector<std::string>{"{p1, p2, p3, p4}"}));
  std::vector<std::pair<StateId, StateId>> want{{"s1", "s2"}, {"s1", "s4"}, {"s3", "s4"}};
  auto got = t.edges;
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, want);
}

TEST_F(SessionTest, EmptyTrail) {
  auto t = session.trail();
  EXPECT_TRUE(t.nodes.empty());
  EXPECT_TRUE(t.edges.empty());
}

TEST_F(SessionTest, BackPropagationRestrictsPivotChain) {
  auto r = in.run("s1 = {p1, p2, p3, p4}.pivot(:Author)\n"
                  "s2 = s1.refine(equals(:Affiliation, {f1}))!");
  EXPECT_EQ(ext("s2"), xt::paths("{a1, a2}"));
  ASSERT_EQ(r.created.size(), 3u);
  const auto& derived = session.state(r.created[2]);
  EXPECT_TRUE(derived.derived);
  // Publications with an author affiliated to f1.
  EXPECT_EQ(ext(derived.id), xt::paths("{p1, p2, p3}"));
}

TEST_F(SessionTest, BackPropagationWalksWholeChain) {
  auto r = in.run("s1 = {p1, p2, p3, p4}.pivot(:Author)\n"
                  "s2 = s1.pivot(:Affiliation)\n"
                  "s3 = s2.refine(equals(inverse(:Affiliation), {a3}))!");
  std::vector<StateId> derived;
  for (const auto& id : r.created)
    if (session.state(id).derived) derived.push_back(id);
  ASSERT_EQ(derived.size(), 2u);
  EXPECT_EQ(ext(derived[0]), xt::paths("{a3}"));
  EXPECT_EQ(ext(derived[1]), xt::paths("{p3, p4}"));
}

TEST_F(SessionTest, BackPropagationNeedsPivotInput) {
  in.run("s1 = {p1, p2}.refine(equals(:Author, {a1}))");
  EXPECT_THROW(session.back_propagate("s1"), SessionError);
}

TEST_F(SessionTest, ReplaySubstitutesSource) {
  in.run("s1 = {p1}.pivot(:Author)\n"
         "s2 = s1.pivot(:Affiliation)");
  Input s = SourceRef{"{p3, p4}", xt::tree("{p3, p4}")};
  auto fresh = session.replay(std::vector<StateId>{"s1", "s2"}, {{"{p1}", s}});
  ASSERT_EQ(fresh.size(), 2u);
  EXPECT_EQ(ext(fresh[0]), xt::paths("{a2, a3}"));
  EXPECT_EQ(ext(fresh[1]), xt::paths("{f1, f2}"));
  // Originals are untouched and the copy chain is wired to the copy.
  EXPECT_EQ(ext("s2"), xt::paths("{f1}"));
  auto t = session.trail();
  EXPECT_NE(std::find(t.edges.begin(), t.edges.end(), std::pair{fresh[0], fresh[1]}), t.edges.end());
}

TEST_F(SessionTest, ReplaySubstitutesState) {
  in.run("s1 = {p1}.pivot(:Author)\n"
         "s2 = s1.pivot(:Affiliation)\n"
         "s3 = {p4}.pivot(:Author)");
  auto fresh = session.replay(std::vector<StateId>{"s2"}, {{"s1", StateId("s3")}});
  ASSERT_EQ(fresh.size(), 1u);
  EXPECT_EQ(ext(fresh[0]), xt::paths("{f2}"));
}

TEST_F(SessionTest, RegisterComputedRelation) {
  in.run("s1 = {a1, a2, a3}.group(inverse(:Author))\n"
         "s2 = s1.ahmap(2, count)\n"
         "register(s2, :nAuthors)\n"
         "s3 = {p1, p2, p3, p4}.rank(2, :nAuthors[%item])");
  const auto* rel = session.catalog().find(":nAuthors");
  ASSERT_NE(rel, nullptr);
  auto image = rel->image_of(xt::e("p3"));
  EXPECT_EQ(std::vector<Item>(image.begin(), image.end()), std::vector<Item>{Item::integer(2)});
  EXPECT_EQ(xt::top_ids(session.extension("s3")).front(), "p2");
  EXPECT_THROW(session.register_computed_relation("s2", ":nAuthors"), SessionError);
}

TEST_F(SessionTest, SaveLoadRoundTrip) {
  in.run("s1 = {a1, a2, a3}.group(inverse(:Author))\n"
         "s2 = s1.ahmap(2, count)\n"
         "register(s2, :nAuthors)\n"
         "s3 = {p1, p2, p3, p4}.rank(2, :nAuthors[%item])\n"
         "s4 = {p1, p2, p3, p4}.pivot(:Author)\n"
         "s5 = s4.refine(equals(:Affiliation, {f1}))!\n"
         "top = s3");
  auto text = session.save();
  auto copy = load_session(text, d);
  EXPECT_EQ(copy->save(), text);
  for (const auto& id : session.state_ids()) {
    ASSERT_TRUE(copy->has_state(id)) << id;
    EXPECT_EQ(copy->extension(id).path_set(), ext(id)) << id;
  }
  ASSERT_TRUE(copy->binding("top"));
}

TEST_F(SessionTest, LoadRejectsOtherDataset) {
  in.run("s1 = {p1}.pivot(:Author)");
  auto other = std::make_shared<Dataset>(build_citation_fixture(1, 50).dataset);
  EXPECT_THROW(load_session(session.save(), other), SessionError);
}

TEST_F(SessionTest, ConcurrentReadersSeeConsistentStates) {
  in.run("s1 = {p1, p2, p3, p4}.pivot(:Author)\n"
         "s2 = s1.pivot(:Affiliation)");
  std::vector<std::thread> pool;
  std::atomic<int> bad{0};
  for (int t = 0; t < 8; ++t)
    pool.emplace_back([&] {
      for (int i = 0; i < 50; ++i) {
        if (ext("s2") != xt::paths("{f1, f2}")) ++bad;
        session.trail();
      }
    });
  {
    std::lock_guard lock(session.writer_mutex());
    Interpreter writer(session);
    for (int i = 0; i < 20; ++i) writer.run("{p1}.pivot(:Author)");
  }
  for (auto& th : pool) th.join();
  EXPECT_EQ(bad.load(), 0);
  EXPECT_EQ(session.size(), 22u);
}

}  // namespace
