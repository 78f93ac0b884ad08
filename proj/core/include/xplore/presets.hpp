#pragma once

// Built-in strategy grammars of well-known faceted search tools and the
// gfacet / SeCo tactical profiles.

#include <string>
#include <string_view>
#include <vector>

#include "xplore/grammar.hpp"
#include "xplore/profile.hpp"

namespace xplore {

struct GrammarPreset {
  std::string name;     // e.g. "parallel-faceted-browser"
  std::string version;  // "v1".."v4", empty when outside the version chain
  std::string tools;
  std::string text;     // productions as written in the comparison table

  Grammar grammar() const { return Grammar::parse(text); }
};

struct ProfilePreset {
  std::string name;
  std::string text;

  TacticalProfile profile() const { return TacticalProfile::parse(text); }
};

const std::vector<GrammarPreset>& grammar_presets();
const std::vector<ProfilePreset>& profile_presets();

/// Looks up by name or version alias ("v1".."v4"). Throws Error when unknown.
const GrammarPreset& grammar_preset(std::string_view name);
const ProfilePreset& profile_preset(std::string_view name);

}  // namespace xplore
