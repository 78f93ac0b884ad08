#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "xplore/errors.hpp"
#include "xplore/grammar.hpp"
#include "xplore/presets.hpp"

using namespace xplore;

namespace {

Skeleton sk(const char* text) { return skeleton_of(std::string_view(text)); }

Grammar preset(const char* name) { return grammar_preset(name).grammar(); }

TEST(Skeleton, ErasesArguments) {
  EXPECT_EQ(sk("s1.pivot(:cite).refine(matchAll(\"Semantic Web\"))").to_string(), "refine(pivot(s0))");
  EXPECT_EQ(sk("union(d, p.pivot(:cite))").to_string(), "unite(s0, pivot(s0))");
  EXPECT_EQ(sk("d.refine(equals(:type, Venue))!").to_string(), "refine(s0)!");
  EXPECT_EQ(sk("branch(d, irs.refine(true()), irs.pivot(:x))").to_string(),
            "branch(s0, refine(irs), pivot(irs))");
  EXPECT_EQ(sk("d.rank(2, :swCites[%item])[0..19]").to_string(), "rank(s0)");
  EXPECT_EQ(sk("d.refine(true())").depth(), 1u);
  EXPECT_EQ(sk("p").depth(), 0u);
}

TEST(Skeleton, RejectsValues) {
  EXPECT_THROW(sk("matchAll(\"x\")"), GrammarError);
  EXPECT_THROW(sk("1 + 2"), GrammarError);
}

TEST(GrammarParse, ArrowsCommentsAndSeparators) {
  auto g = Grammar::parse("# two rules\nS → refine(S | P | s0); P -> pivot(S | s0)\n");
  EXPECT_EQ(g.start(), "S");
  EXPECT_EQ(g.productions().size(), 2u);
  EXPECT_EQ(Grammar::parse(g.to_string()).to_string(), g.to_string());
  EXPECT_THROW(Grammar::parse("S -> refine(T)"), GrammarError);
  EXPECT_THROW(Grammar::parse("S refine(s0)"), Error);
}

TEST(Membership, PresetExamples) {
  struct Case {
    const char* expr;
    std::set<std::string> accepted_by;
  };
  const Case cases[] = {
      {"refine(refine(s0))", {"v1", "v2", "v4"}},
      {"refine(pivot(s0))", {"humboldt-parallax", "v4"}},
      {"pivot(s0)", {"humboldt-parallax", "v3", "v4"}},
      {"branch(s0, refine(irs), refine(irs))", {"v2"}},
      {"refine(pivot(pivot(s0)))!", {"v3", "v4"}},
      {"intersect(refine(s0), unite(pivot(s0), refine(s0)))", {"v4"}},
      {"intersect(refine(s0), refine(s0))", {"humboldt-parallax", "v4"}},
      {"refine(irs)", {}},
  };
  for (const auto& c : cases)
    for (const auto& p : grammar_presets()) {
      auto key = p.version.empty() ? p.name : p.version;
      EXPECT_EQ(derivable(p.grammar(), sk(c.expr)), c.accepted_by.count(key) > 0) << c.expr << " in " << key;
    }
}

TEST(Membership, DerivationSteps) {
  auto d = derive(preset("v3"), sk("refine(pivot(s0))!"));
  ASSERT_TRUE(d.accepted);
  EXPECT_EQ(d.steps, (std::vector<std::string>{"S -> R", "R -> refine(R | P | s0)!", "P -> pivot(R | P | s0)"}));
  EXPECT_TRUE(derive(preset("v1"), sk("pivot(s0)")).steps.empty());
}

TEST(Lint, StrayIrs) {
  EXPECT_EQ(Grammar::lint(sk("refine(irs)")).size(), 1u);
  EXPECT_TRUE(Grammar::lint(sk("branch(s0, refine(irs), irs)")).empty());
  EXPECT_EQ(Grammar::lint(sk("branch(irs, s0, s0)")).size(), 1u);
}

TEST(Enumerate, FlamencoSmallDepths) {
  auto g = preset("v1");
  EXPECT_TRUE(enumerate(g, 0).empty());
  EXPECT_EQ(enumerate(g, 2), (std::set<Skeleton>{sk("refine(s0)"), sk("refine(refine(s0))")}));
  EXPECT_EQ(enumerate(g, 5).size(), 5u);
}

TEST(Enumerate, CapsAreEnforced) {
  EXPECT_THROW(enumerate(preset("v1"), 7), CapExceeded);
  EXPECT_THROW(enumerate(preset("v4"), 3, {6, 100}), CapExceeded);
}

// Every skeleton over the preset alphabet up to a depth. Leaves inside a
// branch body may also be irs; bang only decorates refine.
struct Alphabet {
  bool binary = true;
  bool branch = true;
};

std::vector<Skeleton> all_skeletons(std::size_t depth, bool body, const Alphabet& a) {
  std::vector<Skeleton> out{Skeleton::leaf("s0")};
  if (body) out.push_back(Skeleton::leaf("irs"));
  if (depth == 0) return out;
  auto sub = all_skeletons(depth - 1, body, a);
  for (const auto& x : sub) {
    out.push_back(Skeleton::call("refine", {x}));
    out.push_back(Skeleton::call("refine", {x}, true));
    out.push_back(Skeleton::call("pivot", {x}));
  }
  if (a.binary)
    for (const auto& x : sub)
      for (const auto& y : sub) {
        out.push_back(Skeleton::call("intersect", {x, y}));
        out.push_back(Skeleton::call("unite", {x, y}));
      }
  if (a.branch) {
    auto bodies = all_skeletons(depth - 1, true, a);
    for (const auto& x : sub)
      for (const auto& y : bodies)
        for (const auto& z : bodies) out.push_back(Skeleton::call("branch", {x, y, z}));
  }
  return out;
}

// Returns false when the language is too large to enumerate at this depth.
bool expect_enumeration_matches_oracle(const Grammar& g, std::size_t depth, const Alphabet& a,
                                       const std::string& name) {
  std::set<Skeleton> got;
  try {
    got = enumerate(g, depth, {6, 20'000});
  } catch (const CapExceeded&) {
    return false;
  }
  std::set<Skeleton> oracle;
  for (const auto& s : all_skeletons(depth, false, a))
    if (derivable(g, s)) oracle.insert(s);
  if (!a.binary || !a.branch)
    std::erase_if(got, [&](const Skeleton& s) {
      std::function<bool(const Skeleton&)> outside = [&](const Skeleton& n) {
        if ((!a.binary && (n.op == "intersect" || n.op == "unite")) || (!a.branch && n.op == "branch")) return true;
        for (const auto& c : n.children)
          if (outside(c)) return true;
        return false;
      };
      return outside(s);
    });
  EXPECT_EQ(got, oracle) << name << " depth " << depth;
  return true;
}

TEST(Enumerate, AgreesWithBruteForceMembership) {
  std::size_t deep = 0;
  for (const auto& p : grammar_presets()) {
    auto g = p.grammar();
    EXPECT_TRUE(expect_enumeration_matches_oracle(g, 2, {}, p.name)) << p.name;
    deep += expect_enumeration_matches_oracle(g, 4, {false, false}, p.name);
  }
  EXPECT_GE(deep, 2u);
}

TEST(Compare, FlamencoWithinParallelBrowser) {
  auto r = compare_grammars(preset("v1"), preset("v2"), 3);
  EXPECT_TRUE(r.a_within_b());
  EXPECT_FALSE(r.b_within_a());
  EXPECT_EQ(r.depth_a, 3u);
  ASSERT_FALSE(r.only_b.empty());
  for (const auto& s : r.only_b) EXPECT_EQ(s.op, "branch") << s.to_string();
}

TEST(Compare, SelfIsEquivalent) {
  for (const auto& p : grammar_presets()) {
    auto r = compare_grammars(p.grammar(), p.grammar(), 2);
    EXPECT_TRUE(r.a_within_b() && r.b_within_a()) << p.name;
  }
}

TEST(Compare, BranchOnSetsIsOutsideLaterVersions) {
  auto r = compare_grammars(preset("v2"), preset("v3"), 2);
  ASSERT_FALSE(r.a_within_b());
  EXPECT_EQ(r.only_a.front().op, "branch");
}

}  // namespace
