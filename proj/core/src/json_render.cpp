#include "json_render.hpp"

#include "xplore/report_json.hpp"

namespace xplore::render {

json item(const Item& it, const RelationCatalog& catalog) {
  json j{{"id", it.id()}, {"kind", std::string(to_string(it.kind()))}};
  if (auto label = catalog.label_of(it)) j["label"] = *label;
  return j;
}

namespace {

json subtree(const ExplorationSet& set, ExplorationSet::NodeId id, const RelationCatalog& catalog) {
  json j = item(set.node(id).item, catalog);
  auto kids = set.children(id);
  if (!kids.empty()) {
    j["children"] = json::array();
    for (auto k : kids) j["children"].push_back(subtree(set, k, catalog));
  }
  return j;
}

}  // namespace

json page(const ExplorationSet& set, const RelationCatalog& catalog, std::size_t offset, std::size_t limit) {
  auto top = set.children(ExplorationSet::kRoot);
  json items = json::array();
  for (std::size_t i = offset; i < top.size() && i - offset < limit; ++i)
    items.push_back(subtree(set, top[i], catalog));
  return {{"total", top.size()}, {"offset", offset}, {"limit", limit}, {"depth", set.depth()},
          {"items", std::move(items)}};
}

json trail(const Trail& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes)
    nodes.push_back({{"id", n.id}, {"op", n.op}, {"intentionText", n.intention}, {"derived", n.derived},
                     {"sources", n.sources}});
  json edges = json::array();
  for (const auto& [from, to] : t.edges) edges.push_back({from, to});
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

json schema(const SchemaSummary& s) {
  json rels = json::array();
  for (const auto& r : s.relations)
    rels.push_back({{"id", r.id}, {"pairs", r.pairs}, {"domainSize", r.domain_size}, {"imageSize", r.image_size}});
  return {{"entities", s.entities}, {"literals", s.literals}, {"relations", std::move(rels)}};
}

json derivation(const Skeleton& skeleton, const Derivation& d) {
  return {{"skeleton", skeleton.to_string()}, {"accepted", d.accepted}, {"derivation", d.steps}};
}

json comparison(const GrammarComparison& c) {
  auto texts = [](const std::vector<Skeleton>& v) {
    std::vector<std::string> out;
    for (const auto& s : v) out.push_back(s.to_string());
    return out;
  };
  return {{"requestedDepth", c.requested_depth}, {"depthA", c.depth_a}, {"depthB", c.depth_b},
          {"onlyA", texts(c.only_a)}, {"onlyB", texts(c.only_b)}, {"aWithinB", c.a_within_b()},
          {"bWithinA", c.b_within_a()}};
}

json comparison(const ProfileComparison& c) {
  json diffs = json::array();
  for (const auto& d : c.differences)
    diffs.push_back({{"operation", d.operation}, {"attribute", d.attribute}, {"a", d.a}, {"b", d.b}});
  return {{"toolA", c.tool_a}, {"toolB", c.tool_b}, {"onlyA", c.only_a}, {"onlyB", c.only_b},
          {"differences", std::move(diffs)}};
}

}  // namespace xplore::render

namespace xplore {

std::string report_json(const GrammarComparison& c) { return render::comparison(c).dump(2); }
std::string report_json(const ProfileComparison& c) { return render::comparison(c).dump(2); }
std::string report_json(const SchemaSummary& s) { return render::schema(s).dump(2); }
std::string report_json(const Skeleton& skeleton, const Derivation& d) {
  return render::derivation(skeleton, d).dump(2);
}

}  // namespace xplore
