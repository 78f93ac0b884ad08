#include "xplore/profile.hpp"

#include <algorithm>
#include <sstream>

#include "xplore/errors.hpp"

namespace xplore {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto comma = s.find(',', pos);
    if (comma == std::string_view::npos) comma = s.size();
    auto item = trim(s.substr(pos, comma - pos));
    if (!item.empty()) out.push_back(item);
    pos = comma + 1;
  }
  return out;
}

bool known(const std::vector<std::string>& v, std::string_view x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out;
}

std::vector<std::string> values(const OperationProfile& p, std::string_view attribute) {
  auto one = [](const std::optional<std::string>& v) {
    return v ? std::vector<std::string>{*v} : std::vector<std::string>{};
  };
  auto many = [](const std::set<std::string>& v) { return std::vector<std::string>(v.begin(), v.end()); };
  if (attribute == "cardinality") return one(p.cardinality);
  if (attribute == "dataType") return many(p.data_type);
  if (attribute == "relationType") return many(p.relation_type);
  if (attribute == "relationStructure") return one(p.relation_structure);
  if (attribute == "matchType") return many(p.match_type);
  return many(p.mapping_kinds);
}

}  // namespace

const std::vector<std::string>& profile_operations() {
  static const std::vector<std::string> ops{"pivot", "refine", "group", "rank", "correlate", "map",
                                            "unite", "intersect", "diff"};
  return ops;
}

const std::vector<std::string>& profile_attributes() {
  static const std::vector<std::string> attrs{"cardinality", "dataType", "relationType",
                                              "relationStructure", "matchType", "mappingKinds"};
  return attrs;
}

const std::vector<std::string>& profile_vocabulary(std::string_view attribute) {
  static const std::map<std::string, std::vector<std::string>, std::less<>> vocab{
      {"cardinality", {"one-to-one", "one-to-many", "many-to-many"}},
      {"dataType", {"data", "metadata"}},
      {"relationType", {"schema", "computed"}},
      {"relationStructure", {"single", "path-any", "path-fixed"}},
      {"matchType", {"exact", "approximate"}},
      {"mappingKinds", {"aggregation", "combination", "transformation"}},
  };
  static const std::vector<std::string> none;
  auto it = vocab.find(attribute);
  return it == vocab.end() ? none : it->second;
}

TacticalProfile TacticalProfile::parse(std::string_view text) {
  TacticalProfile p;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw Error("profile line " + std::to_string(line_no) + ": " + msg);
  };
  auto declare = [&](const std::string& op) -> OperationProfile& {
    if (!known(profile_operations(), op)) fail("unknown operation '" + op + "'");
    return p.operations[op];
  };
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    auto line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    auto key = trim(std::string_view(line).substr(0, eq));
    auto value = trim(std::string_view(line).substr(eq + 1));
    if (key == "tool") {
      p.tool = value;
      continue;
    }
    if (key == "operations") {
      for (const auto& op : split_list(value)) declare(op);
      continue;
    }
    auto dot = key.find('.');
    if (dot == std::string::npos) fail("unknown key '" + key + "'");
    auto& op = declare(key.substr(0, dot));
    auto attribute = key.substr(dot + 1);
    const auto& vocab = profile_vocabulary(attribute);
    if (vocab.empty()) fail("unknown attribute '" + attribute + "'");
    auto items = split_list(value);
    for (const auto& v : items)
      if (!known(vocab, v)) fail("'" + v + "' is not a value of " + attribute);
    bool single = attribute == "cardinality" || attribute == "relationStructure";
    if (single && items.size() != 1) fail(attribute + " takes exactly one value");
    if (attribute == "cardinality") op.cardinality = items[0];
    else if (attribute == "relationStructure") op.relation_structure = items[0];
    else if (attribute == "dataType") op.data_type.insert(items.begin(), items.end());
    else if (attribute == "relationType") op.relation_type.insert(items.begin(), items.end());
    else if (attribute == "matchType") op.match_type.insert(items.begin(), items.end());
    else op.mapping_kinds.insert(items.begin(), items.end());
  }
  if (p.tool.empty()) throw Error("profile has no tool name");
  return p;
}

std::string TacticalProfile::to_string() const {
  std::string out = "tool = " + tool + "\n";
  std::vector<std::string> ops;
  for (const auto& op : profile_operations())
    if (operations.count(op)) ops.push_back(op);
  out += "operations = " + join(ops) + "\n";
  for (const auto& op : ops)
    for (const auto& attr : profile_attributes()) {
      auto v = values(operations.at(op), attr);
      if (!v.empty()) out += op + "." + attr + " = " + join(v) + "\n";
    }
  return out;
}

ProfileComparison compare_profiles(const TacticalProfile& a, const TacticalProfile& b) {
  ProfileComparison r{a.tool, b.tool, {}, {}, {}};
  for (const auto& op : profile_operations()) {
    auto ia = a.operations.find(op);
    auto ib = b.operations.find(op);
    bool in_a = ia != a.operations.end();
    bool in_b = ib != b.operations.end();
    if (in_a && !in_b) r.only_a.push_back(op);
    if (in_b && !in_a) r.only_b.push_back(op);
    if (!in_a || !in_b) continue;
    for (const auto& attr : profile_attributes()) {
      auto va = values(ia->second, attr);
      auto vb = values(ib->second, attr);
      if (va != vb) r.differences.push_back({op, attr, std::move(va), std::move(vb)});
    }
  }
  return r;
}

std::string ProfileComparison::to_string() const {
  std::string out;
  if (!only_a.empty()) out += "operations only in " + tool_a + ": " + join(only_a) + "\n";
  if (!only_b.empty()) out += "operations only in " + tool_b + ": " + join(only_b) + "\n";
  for (const auto& d : differences)
    out += d.operation + "." + d.attribute + ": " + tool_a + " {" + join(d.a) + "} vs " + tool_b + " {" +
           join(d.b) + "}\n";
  return out;
}

}  // namespace xplore
