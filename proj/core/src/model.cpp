#include "xplore/model.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "xplore/errors.hpp"

namespace xplore {

std::string_view to_string(ItemKind kind) {
  switch (kind) {
    case ItemKind::Entity: return "entity";
    case ItemKind::Int: return "int";
    case ItemKind::Float: return "float";
    case ItemKind::String: return "string";
  }
  return "entity";
}

// ---------------------------------------------------------------------------
// Item

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[512];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  std::string text = ec == std::errc{} ? std::string(buf, end) : std::to_string(value);
  if (text.find('.') == std::string::npos) text += ".0";
  if (text == "-0.0") text = "0.0";
  return text;
}

Item Item::entity(std::string id, std::optional<std::string> label) {
  return Item(ItemKind::Entity, std::move(id), std::move(label));
}

Item Item::integer(std::int64_t value) { return Item(ItemKind::Int, std::to_string(value), {}); }

Item Item::real(double value) { return Item(ItemKind::Float, format_real(value), {}); }

Item Item::string(std::string value) { return Item(ItemKind::String, std::move(value), {}); }

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

Item Item::from_token(std::string_view token) {
  if (token.size() >= 2 && token.front() == '"' && token.back() == '"') {
    std::string value;
    for (std::size_t i = 1; i + 1 < token.size(); ++i) {
      if (token[i] == '\\' && i + 2 < token.size()) {
        char next = token[++i];
        value += next == 'n' ? '\n' : next == 't' ? '\t' : next;
      } else {
        value += token[i];
      }
    }
    return string(std::move(value));
  }
  std::string_view body = token;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  if (all_digits(body)) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec == std::errc{} && ptr == token.data() + token.size()) return integer(v);
  }
  if (auto dot = body.find('.'); dot != std::string_view::npos && all_digits(body.substr(0, dot)) &&
                                 all_digits(body.substr(dot + 1))) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec == std::errc{} && ptr == token.data() + token.size()) return real(v);
  }
  return entity(std::string(token));
}

Item Item::with_label(std::optional<std::string> label) const {
  Item copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

double Item::number() const {
  if (!is_numeric()) throw EvalError("item '" + id_ + "' is not numeric");
  double v = 0;
  std::from_chars(id_.data(), id_.data() + id_.size(), v);
  return v;
}

// ---------------------------------------------------------------------------
// Relation

Relation::Relation(std::string id, Provenance provenance, std::string inverse_of)
    : id_(std::move(id)), provenance_(provenance), inverse_of_(std::move(inverse_of)) {}

bool Relation::add(const Item& domain_item, const Item& image_item) {
  Edge edge{domain_item, image_item};
  if (!index_.insert(edge).second) return false;
  pairs_.push_back(edge);
  forward_[domain_item].push_back(image_item);
  backward_[image_item].push_back(domain_item);
  return true;
}

bool Relation::contains(const Item& domain_item, const Item& image_item) const {
  return index_.contains(Edge{domain_item, image_item});
}

std::span<const Item> Relation::image_of(const Item& domain_item) const {
  auto it = forward_.find(domain_item);
  if (it == forward_.end()) return {};
  return it->second;
}

std::span<const Item> Relation::domain_of(const Item& image_item) const {
  auto it = backward_.find(image_item);
  if (it == backward_.end()) return {};
  return it->second;
}

std::vector<Item> Relation::domain() const {
  std::vector<Item> out;
  std::set<Item> seen;
  for (const auto& [d, _] : pairs_)
    if (seen.insert(d).second) out.push_back(d);
  return out;
}

std::vector<Item> Relation::image() const {
  std::vector<Item> out;
  std::set<Item> seen;
  for (const auto& [_, i] : pairs_)
    if (seen.insert(i).second) out.push_back(i);
  return out;
}

bool Relation::same_pairs(const Relation& other) const { return index_ == other.index_; }

std::vector<Item> restricted_image(const Relation& r, const Item& item) {
  auto span = r.image_of(item);
  return {span.begin(), span.end()};
}

std::vector<Item> restricted_domain(const Relation& r, const Item& item) {
  auto span = r.domain_of(item);
  return {span.begin(), span.end()};
}

Relation rjoin(const Relation& r1, const Relation& r2) {
  Relation out("(" + r1.id() + r2.id() + ")", Provenance::Computed);
  for (const auto& [i, k] : r1.pairs())
    for (const auto& j : r2.image_of(k)) out.add(i, j);
  return out;
}

Relation inverse_of(const Relation& r) {
  Relation out = r.provenance() == Provenance::Inverse
                     ? Relation(r.inverse_of(), Provenance::Schema)
                     : Relation("inverse(" + r.id() + ")", Provenance::Inverse, r.id());
  for (const auto& [i, j] : r.pairs()) out.add(j, i);
  return out;
}

// ---------------------------------------------------------------------------
// Relation paths

namespace {

class PathTextParser {
 public:
  explicit PathTextParser(std::string_view text) : text_(text) {}

  RelationPath parse_all() {
    RelationPath path = parse_path();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing text");
    return path;
  }

 private:
  RelationPath parse_path() {
    RelationPath path;
    for (;;) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ':') {
        std::size_t start = pos_++;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_'))
          ++pos_;
        if (pos_ == start + 1) fail("empty relation id");
        path.steps.push_back({std::string(text_.substr(start, pos_ - start)), false});
      } else if (text_.substr(pos_).starts_with("inverse")) {
        pos_ += 7;
        skip_ws();
        expect('(');
        RelationPath inner = parse_path().inverted();
        skip_ws();
        expect(')');
        path.steps.insert(path.steps.end(), inner.steps.begin(), inner.steps.end());
      } else {
        break;
      }
    }
    if (path.steps.empty()) fail("expected relation path");
    return path;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what + " in relation path '" + std::string(text_) + "'", 1, pos_ + 1);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// The relation actually stored for a step id, and whether the step walks it
// backwards after applying the "Of" convention.
std::pair<const Relation*, bool> locate(const RelationCatalog& catalog, const RelationStep& step) {
  if (const Relation* r = catalog.find(step.id)) return {r, step.inverse};
  if (step.id.size() > 3 && step.id.ends_with("Of")) {
    if (const Relation* base = catalog.find(std::string_view(step.id).substr(0, step.id.size() - 2)))
      return {base, !step.inverse};
  }
  throw ResolutionError("unknown relation '" + step.id + "'");
}

}  // namespace

RelationPath RelationPath::parse(std::string_view text) { return PathTextParser(text).parse_all(); }

RelationPath RelationPath::inverted() const {
  RelationPath out;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) out.steps.push_back({it->id, !it->inverse});
  return out;
}

std::string RelationPath::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!steps[i].inverse) out += steps[i].id;
    else out += (i && !steps[i - 1].inverse ? " inverse(" : "inverse(") + steps[i].id + ")";
  }
  return out;
}

Relation resolve_step(const RelationCatalog& catalog, const RelationStep& step) {
  auto [relation, backwards] = locate(catalog, step);
  return backwards ? inverse_of(*relation) : *relation;
}

Relation resolve_path(const RelationCatalog& catalog, const RelationPath& path) {
  if (path.steps.empty()) throw ResolutionError("empty relation path");
  Relation acc = resolve_step(catalog, path.steps.front());
  if (path.steps.size() == 1) return acc;
  for (std::size_t i = 1; i < path.steps.size(); ++i) acc = rjoin(acc, resolve_step(catalog, path.steps[i]));
  Relation out(path.to_string(), Provenance::Computed);
  for (const auto& [i, j] : acc.pairs()) out.add(i, j);
  return out;
}

void check_resolvable(const RelationCatalog& catalog, const RelationPath& path) {
  if (path.steps.empty()) throw ResolutionError("empty relation path");
  for (const auto& step : path.steps) locate(catalog, step);
}

std::vector<Item> path_image(const RelationCatalog& catalog, const RelationPath& path,
                             const Item& item) {
  std::vector<Item> frontier{item};
  for (const auto& step : path.steps) {
    auto [relation, backwards] = locate(catalog, step);
    std::vector<Item> next;
    std::unordered_set<Item> seen;
    for (const auto& x : frontier) {
      for (const auto& y : backwards ? relation->domain_of(x) : relation->image_of(x))
        if (seen.insert(y).second) next.push_back(y);
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return frontier;
}

// ---------------------------------------------------------------------------
// Dataset

void Dataset::add_item(const Item& item) { items_.insert(item.with_label(std::nullopt)); }

void Dataset::add_pair(const std::string& relation_id, const Item& subject, const Item& object) {
  add_item(subject);
  add_item(object);
  auto it = relations_.find(relation_id);
  if (it == relations_.end()) it = relations_.emplace(relation_id, Relation(relation_id)).first;
  it->second.add(subject.with_label(std::nullopt), object.with_label(std::nullopt));
}

void Dataset::set_label(const std::string& entity_id, std::string label) {
  add_item(Item::entity(entity_id));
  labels_[entity_id] = std::move(label);
}

const Relation* Dataset::find(std::string_view id) const {
  auto it = relations_.find(id);
  return it == relations_.end() ? nullptr : &it->second;
}

void Dataset::for_each(const std::function<void(const Relation&)>& visit) const {
  for (const auto& [_, r] : relations_) visit(r);
}

std::optional<std::string> Dataset::label_of(const Item& item) const {
  if (item.label()) return item.label();
  if (item.kind() != ItemKind::Entity) return std::nullopt;
  auto it = labels_.find(item.id());
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

std::vector<Item> Dataset::items() const { return {items_.begin(), items_.end()}; }

std::vector<Item> Dataset::entities() const {
  std::vector<Item> out;
  for (const auto& item : items_)
    if (item.kind() == ItemKind::Entity) out.push_back(item);
  return out;
}

std::optional<Item> Dataset::find_entity(std::string_view id) const {
  Item probe = Item::entity(std::string(id));
  if (!items_.contains(probe)) return std::nullopt;
  return probe.with_label(label_of(probe));
}

bool Dataset::operator==(const Dataset& other) const {
  if (items_ != other.items_ || labels_ != other.labels_) return false;
  if (relations_.size() != other.relations_.size()) return false;
  for (const auto& [id, r] : relations_) {
    const Relation* o = other.find(id);
    if (!o || !r.same_pairs(*o)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// ExplorationSet

Item fresh_root() {
  static std::atomic<std::uint64_t> counter{0};
  return Item::entity("rs#" + std::to_string(++counter));
}

ExplorationSet::ExplorationSet(Item root) { nodes_.push_back(Node{std::move(root), kRoot, 1, {}}); }

ExplorationSet ExplorationSet::flat(std::span<const Item> items) {
  ExplorationSet set;
  for (const auto& item : items) set.add_child(kRoot, item);
  return set;
}

ExplorationSet ExplorationSet::flat(std::initializer_list<Item> items) {
  return flat(std::span<const Item>(items.begin(), items.size()));
}

ExplorationSet ExplorationSet::from_paths(std::span<const Path> paths, Item root) {
  ExplorationSet set(std::move(root));
  for (const auto& path : paths) {
    NodeId at = kRoot;
    for (std::size_t i = 1; i < path.size(); ++i) at = set.add_child(at, path[i]);
  }
  return set;
}

ExplorationSet::NodeId ExplorationSet::add_child(NodeId parent, const Item& item) {
  auto key = std::make_pair(parent, item);
  if (auto it = child_index_.find(key); it != child_index_.end()) return it->second;
  NodeId id = nodes_.size();
  nodes_.push_back(Node{item, parent, nodes_.at(parent).level + 1, {}});
  nodes_[parent].children.push_back(id);
  child_index_.emplace(std::move(key), id);
  return id;
}

std::size_t ExplorationSet::depth() const {
  std::size_t d = 1;
  for (const auto& n : nodes_) d = std::max(d, n.level);
  return d;
}

std::vector<ExplorationSet::NodeId> ExplorationSet::level(std::size_t lv) const {
  std::vector<NodeId> out;
  std::vector<NodeId> stack{kRoot};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    const Node& n = nodes_[id];
    if (n.level == lv) {
      out.push_back(id);
      continue;
    }
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::vector<Item> ExplorationSet::level_items(std::size_t lv) const {
  std::vector<Item> out;
  std::set<Item> seen;
  for (NodeId id : level(lv))
    if (seen.insert(nodes_[id].item).second) out.push_back(nodes_[id].item);
  return out;
}

std::vector<Path> ExplorationSet::paths() const {
  std::vector<Path> out;
  if (empty()) return out;
  Path current;
  // Iterative DFS carrying the current prefix.
  std::vector<std::pair<NodeId, std::size_t>> stack{{kRoot, 0}};
  while (!stack.empty()) {
    auto& [id, next_child] = stack.back();
    const Node& n = nodes_[id];
    if (next_child == 0) {
      current.push_back(n.item);
      if (n.children.empty()) out.push_back(current);
    }
    if (next_child < n.children.size()) {
      NodeId child = n.children[next_child++];
      stack.emplace_back(child, 0);
    } else {
      current.pop_back();
      stack.pop_back();
    }
  }
  return out;
}

std::vector<Item> ExplorationSet::leaves() const {
  std::vector<Item> out;
  std::set<Item> seen;
  for (const auto& path : paths())
    if (seen.insert(path.back()).second) out.push_back(path.back());
  return out;
}

std::set<Path> ExplorationSet::path_set() const {
  std::set<Path> out;
  for (auto path : paths()) {
    path.front() = Item();
    out.insert(std::move(path));
  }
  return out;
}

bool ExplorationSet::same_paths(const ExplorationSet& other) const {
  return path_set() == other.path_set();
}

bool ExplorationSet::same_ordered_tree(const ExplorationSet& other) const {
  std::vector<std::pair<NodeId, NodeId>> stack{{kRoot, kRoot}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    const auto& ca = nodes_[a].children;
    const auto& cb = other.nodes_[b].children;
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
      if (nodes_[ca[i]].item != other.nodes_[cb[i]].item) return false;
      stack.emplace_back(ca[i], cb[i]);
    }
  }
  return true;
}

void ExplorationSet::reorder_children(NodeId parent, std::vector<NodeId> order) {
  auto& children = nodes_.at(parent).children;
  std::vector<NodeId> a = children, b = order;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw EvalError("reorder_children: not a permutation of the children");
  children = std::move(order);
}

std::vector<Path> root_replace(std::span<const Path> paths, const Item& new_root) {
  std::vector<Path> out;
  std::set<Path> seen;
  for (const auto& path : paths) {
    if (path.empty()) continue;
    Path p = path;
    p.front() = new_root;
    if (seen.insert(p).second) out.push_back(std::move(p));
  }
  return out;
}

namespace {

void render(const ExplorationSet& set, ExplorationSet::NodeId id, std::ostringstream& os) {
  const auto& n = set.node(id);
  if (n.children.empty()) {
    os << n.item.id();
    return;
  }
  os << '<' << n.item.id() << ", {";
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) os << ", ";
    render(set, n.children[i], os);
  }
  os << "}>";
}

}  // namespace

std::string to_string(const ExplorationSet& set) {
  std::ostringstream os;
  os << '{';
  auto children = set.children(ExplorationSet::kRoot);
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) os << ", ";
    render(set, children[i], os);
  }
  os << '}';
  return os.str();
}

}  // namespace xplore
