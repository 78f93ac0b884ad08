#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "xplore/errors.hpp"
#include "xplore/presets.hpp"
#include "xplore/profile.hpp"

using namespace xplore;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(Profile, GfacetAttributes) {
  auto p = profile_preset("gfacet").profile();
  EXPECT_EQ(p.tool, "gfacet");
  ASSERT_EQ(p.operations.size(), 2u);
  const auto& pivot = p.operations.at("pivot");
  EXPECT_EQ(pivot.cardinality, "many-to-many");
  EXPECT_EQ(pivot.relation_structure, "single");
  const auto& refine = p.operations.at("refine");
  EXPECT_EQ(refine.relation_structure, "path-any");
  EXPECT_EQ(refine.match_type, std::set<std::string>{"exact"});
  EXPECT_TRUE(refine.mapping_kinds.empty());
}

TEST(Profile, TextRoundTrip) {
  for (const auto& preset : profile_presets()) {
    auto p = preset.profile();
    EXPECT_EQ(TacticalProfile::parse(p.to_string()), p) << preset.name;
  }
}

TEST(Profile, ParseErrorsNameTheLine) {
  const char* bad[] = {
      "tool = x\npivot.cardinality = some\n",
      "tool = x\nfly.cardinality = one-to-one\n",
      "tool = x\npivot.colour = red\n",
      "tool = x\npivot.cardinality = one-to-one, many-to-many\n",
      "tool = x\njust words\n",
  };
  for (const char* text : bad) {
    try {
      TacticalProfile::parse(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
  }
  EXPECT_THROW(TacticalProfile::parse("operations = pivot\n"), Error);
}

TEST(Profile, AttributeMentionDeclaresOperation) {
  auto p = TacticalProfile::parse("tool = t\n# comment\nrank.relationType = computed\n");
  ASSERT_TRUE(p.operations.count("rank"));
  EXPECT_EQ(p.operations.at("rank").relation_type, std::set<std::string>{"computed"});
}

TEST(ProfileCompare, SelfIsEmpty) {
  for (const auto& preset : profile_presets()) {
    auto p = preset.profile();
    auto c = compare_profiles(p, p);
    EXPECT_TRUE(c.empty()) << preset.name;
    EXPECT_EQ(c.to_string(), "");
  }
}

TEST(ProfileCompare, GfacetVersusSecoGolden) {
  auto c = compare_profiles(profile_preset("gfacet").profile(), profile_preset("seco").profile());
  EXPECT_TRUE(c.only_a.empty());
  EXPECT_EQ(c.only_b, (std::vector<std::string>{"group", "rank", "map"}));
  ASSERT_EQ(c.differences.size(), 2u);
  EXPECT_EQ(c.to_string(), read_file(XPLORE_GOLDEN_DIR "/gfacet_vs_seco.txt"));
}

TEST(ProfileCompare, SymmetricFindings) {
  auto a = profile_preset("gfacet").profile();
  auto b = profile_preset("seco").profile();
  auto ab = compare_profiles(a, b);
  auto ba = compare_profiles(b, a);
  EXPECT_EQ(ab.only_a, ba.only_b);
  EXPECT_EQ(ab.only_b, ba.only_a);
  ASSERT_EQ(ab.differences.size(), ba.differences.size());
  for (std::size_t i = 0; i < ab.differences.size(); ++i) {
    EXPECT_EQ(ab.differences[i].a, ba.differences[i].b);
    EXPECT_EQ(ab.differences[i].b, ba.differences[i].a);
  }
}

TEST(Profile, UnknownPreset) { EXPECT_THROW(profile_preset("nope"), Error); }

}  // namespace
