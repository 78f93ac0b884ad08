#include "xplore/presets.hpp"

#include "xplore/errors.hpp"

namespace xplore {

const std::vector<GrammarPreset>& grammar_presets() {
  static const std::vector<GrammarPreset> presets{
      {"flamenco", "v1", "Flamenco, Mspace, Faceted Wikipedia Search", "S -> refine(S | s0)\n"},
      {"parallel-faceted-browser", "v2", "Parallel Faceted Browser",
       "S -> branch(s0, S, S) | R\nR -> refine(R | s0)\n"},
      {"humboldt-parallax", "", "Humboldt, Parallax",
       "S -> P | R\nR -> refine(P | s0) | intersect(R, R)\nP -> pivot(R | s0 | P)\n"},
      {"gfacet", "v3", "/facet, gfacet, tfacet, Rhizomer, BrowseRDF",
       "S -> P | R | branch(S, P, P)\nR -> refine(R | P | s0)!\nP -> pivot(R | P | s0)\n"},
      {"sewelis-semfacet", "v4", "Sewelis, SemFacet",
       "S -> branch(S, S, S) | O | R | R! | P\n"
       "O -> intersect(S, S) | unite(S, S)\n"
       "R -> refine(O | R | P | s0)\n"
       "P -> pivot(O | R | P | s0)\n"},
  };
  return presets;
}

const std::vector<ProfilePreset>& profile_presets() {
  static const std::vector<ProfilePreset> presets{
      {"gfacet",
       "tool = gfacet\n"
       "operations = pivot, refine\n"
       "pivot.cardinality = many-to-many\n"
       "pivot.dataType = data\n"
       "pivot.relationType = schema\n"
       "pivot.relationStructure = single\n"
       "refine.cardinality = many-to-many\n"
       "refine.dataType = data\n"
       "refine.relationType = schema\n"
       "refine.relationStructure = path-any\n"
       "refine.matchType = exact\n"},
      {"seco",
       "tool = SeCo\n"
       "operations = pivot, refine, group, rank, map\n"
       "pivot.cardinality = many-to-many\n"
       "pivot.dataType = data\n"
       "pivot.relationType = schema\n"
       "pivot.relationStructure = single\n"
       "refine.cardinality = many-to-many\n"
       "refine.dataType = data, metadata\n"
       "refine.relationType = schema, computed\n"
       "refine.relationStructure = path-any\n"
       "refine.matchType = exact\n"
       "group.relationType = schema, computed\n"
       "group.relationStructure = single\n"
       "rank.relationType = schema, computed\n"
       "map.mappingKinds = combination, transformation\n"},
  };
  return presets;
}

const GrammarPreset& grammar_preset(std::string_view name) {
  for (const auto& p : grammar_presets())
    if (p.name == name || (!p.version.empty() && p.version == name)) return p;
  throw Error("unknown grammar preset '" + std::string(name) + "'");
}

const ProfilePreset& profile_preset(std::string_view name) {
  for (const auto& p : profile_presets())
    if (p.name == name) return p;
  throw Error("unknown profile preset '" + std::string(name) + "'");
}

}  // namespace xplore
