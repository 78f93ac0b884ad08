#include "xplore/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "xplore/errors.hpp"

namespace xplore {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return out;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\', out += c;
    else if (c == '\n') out += "\\n";
    else if (c == '\t') out += "\\t";
    else out += c;
  }
  return out + "\"";
}

std::string token_of(const Item& item) {
  return item.kind() == ItemKind::String ? quote(item.id()) : item.id();
}

}  // namespace

Dataset load_triples(std::string_view text) {
  Dataset d;
  std::map<std::string, ItemKind, std::less<>> kinds;
  auto note_kind = [&](const Item& item, std::size_t line) {
    if (item.is_numeric()) return;
    auto [it, fresh] = kinds.emplace(item.id(), item.kind());
    if (!fresh && it->second != item.kind())
      throw LoadError("'" + item.id() + "' used both as " + std::string(to_string(it->second)) + " and as " +
                          std::string(to_string(item.kind())),
                      line);
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos || line.front() == '#') continue;

    auto fields = split_tabs(line);
    if (fields.size() != 3)
      throw LoadError("expected 3 tab-separated fields, found " + std::to_string(fields.size()), line_no);
    auto subject = Item::from_token(fields[0]);
    if (fields[0].empty() || subject.is_literal()) throw LoadError("subject must be an entity id", line_no);
    if (fields[1].size() < 2 || fields[1].front() != ':')
      throw LoadError("relation must start with ':'", line_no);
    if (fields[2].empty()) throw LoadError("empty object", line_no);
    auto object = Item::from_token(fields[2]);
    note_kind(subject, line_no);

    if (fields[1] == Dataset::kLabelRelation) {
      d.add_item(subject);
      if (object.id() != subject.id()) d.set_label(subject.id(), object.id());
      continue;
    }
    note_kind(object, line_no);
    d.add_pair(std::string(fields[1]), subject, object);
  }
  return d;
}

Dataset load_triples_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_triples(buf.str());
}

std::string serialize_triples(const Dataset& d) {
  std::vector<std::string> lines;
  std::set<Item> covered;
  for (const auto& [id, r] : d.relations()) {
    for (const auto& [a, b] : r.pairs()) {
      lines.push_back(token_of(a) + "\t" + id + "\t" + token_of(b));
      covered.insert(a);
      covered.insert(b);
    }
  }
  for (const auto& [id, label] : d.labels()) {
    lines.push_back(id + "\t" + std::string(Dataset::kLabelRelation) + "\t" + quote(label));
    covered.insert(Item::entity(id));
  }
  for (const auto& item : d.entities())
    if (!covered.count(item))
      lines.push_back(item.id() + "\t" + std::string(Dataset::kLabelRelation) + "\t" + quote(item.id()));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

SchemaSummary schema_summary(const Dataset& d) {
  SchemaSummary s;
  for (const auto& [id, r] : d.relations())
    s.relations.push_back({id, r.size(), r.domain().size(), r.image().size()});
  for (const auto& item : d.items()) (item.is_literal() ? s.literals : s.entities)++;
  return s;
}

std::string SchemaSummary::to_string() const {
  std::ostringstream os;
  os << entities << " entities, " << literals << " literals, " << relations.size() << " relations\n";
  for (const auto& r : relations)
    os << r.id << "\t" << r.pairs << " pairs\tdomain " << r.domain_size << "\timage " << r.image_size << "\n";
  return os.str();
}

Dataset schema_dataset(const Dataset& d) {
  Dataset meta;
  for (const auto& r : schema_summary(d).relations) {
    auto rel = Item::entity(r.id);
    meta.add_pair(":pairs", rel, Item::integer(static_cast<std::int64_t>(r.pairs)));
    meta.add_pair(":domainSize", rel, Item::integer(static_cast<std::int64_t>(r.domain_size)));
    meta.add_pair(":imageSize", rel, Item::integer(static_cast<std::int64_t>(r.image_size)));
  }
  return meta;
}

ExplorationSet schema_set(const Dataset& d) {
  std::vector<Item> ids;
  for (const auto& [id, r] : d.relations()) ids.push_back(Item::entity(id));
  return ExplorationSet::flat(ids);
}

Dataset publications_dataset() {
  Dataset d;
  auto e = [](const char* id) { return Item::entity(id); };
  for (auto [p, a] : {std::pair{"p1", "a1"}, {"p2", "a1"}, {"p3", "a2"}, {"p2", "a2"}, {"p3", "a3"}, {"p4", "a3"}})
    d.add_pair(":Author", e(p), e(a));
  for (auto [a, f] : {std::pair{"a1", "f1"}, {"a2", "f1"}, {"a3", "f2"}}) d.add_pair(":Affiliation", e(a), e(f));
  d.add_item(e("f3"));
  return d;
}

}  // namespace xplore
