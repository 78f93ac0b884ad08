#pragma once

// Items, relations, datasets and exploration sets (nested relations as
// ordered trees), plus the path calculus the operators are defined on.
//
// Level convention: the root of a tree is at level 1 (its predecessor set is
// itself), the root's children at level 2, and so on.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xplore {

enum class ItemKind : std::uint8_t { Entity, Int, Float, String };

std::string_view to_string(ItemKind kind);

/// An exploration item. Identity is (kind, id); the label is display data only.
/// Literal ids are canonical renderings of their value ("2002", "475.05").
class Item {
 public:
  Item() = default;

  static Item entity(std::string id, std::optional<std::string> label = std::nullopt);
  static Item integer(std::int64_t value);
  static Item real(double value);
  static Item string(std::string value);
  /// Applies the triple-file literal rules: quoted -> string, digits -> int,
  /// digits with a dot -> float, anything else -> entity.
  static Item from_token(std::string_view token);

  ItemKind kind() const noexcept { return kind_; }
  const std::string& id() const noexcept { return id_; }
  const std::optional<std::string>& label() const noexcept { return label_; }
  Item with_label(std::optional<std::string> label) const;

  bool is_literal() const noexcept { return kind_ != ItemKind::Entity; }
  bool is_numeric() const noexcept { return kind_ == ItemKind::Int || kind_ == ItemKind::Float; }
  /// Numeric value; throws EvalError for entities and strings.
  double number() const;
  /// Label when present, otherwise the id.
  const std::string& display() const noexcept { return label_ ? *label_ : id_; }

  friend bool operator==(const Item& a, const Item& b) noexcept {
    return a.kind_ == b.kind_ && a.id_ == b.id_;
  }
  friend std::strong_ordering operator<=>(const Item& a, const Item& b) noexcept {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    return a.id_.compare(b.id_) <=> 0;
  }

 private:
  Item(ItemKind kind, std::string id, std::optional<std::string> label)
      : kind_(kind), id_(std::move(id)), label_(std::move(label)) {}

  ItemKind kind_ = ItemKind::Entity;
  std::string id_;
  std::optional<std::string> label_;
};

/// Canonical text of a float literal; always contains a decimal point.
std::string format_real(double value);

using Edge = std::pair<Item, Item>;

// ---------------------------------------------------------------------------
// Relations

enum class Provenance : std::uint8_t { Schema, Computed, Inverse };

/// A binary relation between items; conceptually a two-level tree rooted at
/// the relation id. Pairs are deduplicated and kept in insertion order.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::string id, Provenance provenance = Provenance::Schema,
                    std::string inverse_of = {});

  const std::string& id() const noexcept { return id_; }
  Provenance provenance() const noexcept { return provenance_; }
  /// Id of the relation this one inverts (Provenance::Inverse only).
  const std::string& inverse_of() const noexcept { return inverse_of_; }

  /// Returns false when the pair was already present.
  bool add(const Item& domain_item, const Item& image_item);

  const std::vector<Edge>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  bool contains(const Item& domain_item, const Item& image_item) const;

  /// :R[item]
  std::span<const Item> image_of(const Item& domain_item) const;
  /// :R^-1[item]
  std::span<const Item> domain_of(const Item& image_item) const;

  std::vector<Item> domain() const;
  std::vector<Item> image() const;

  /// Same pairs, regardless of id or provenance.
  bool same_pairs(const Relation& other) const;

 private:
  std::string id_;
  Provenance provenance_ = Provenance::Schema;
  std::string inverse_of_;
  std::vector<Edge> pairs_;
  std::set<Edge> index_;
  std::map<Item, std::vector<Item>> forward_;
  std::map<Item, std::vector<Item>> backward_;
};

/// restrictedImage: { j | <item, j> in r }
std::vector<Item> restricted_image(const Relation& r, const Item& item);
/// restrictedDomain: { j | <j, item> in r }
std::vector<Item> restricted_domain(const Relation& r, const Item& item);
/// RJoin: { <i, j> | <i, k> in r1 and <k, j> in r2 }.
Relation rjoin(const Relation& r1, const Relation& r2);
/// Swapped pairs; inverting an inverse restores the original id and provenance.
Relation inverse_of(const Relation& r);

/// One step of a relation path: a relation id, optionally traversed backwards.
struct RelationStep {
  std::string id;
  bool inverse = false;

  friend bool operator==(const RelationStep&, const RelationStep&) = default;
  friend auto operator<=>(const RelationStep&, const RelationStep&) = default;
};

/// Non-empty sequence of relation steps; denotes the left fold of rjoin.
struct RelationPath {
  std::vector<RelationStep> steps;

  RelationPath() = default;
  explicit RelationPath(std::vector<RelationStep> s) : steps(std::move(s)) {}
  /// Parses ":A:B", "inverse(:A)", "inverse(:A:B):C".
  static RelationPath parse(std::string_view text);
  static RelationPath single(std::string id) { return RelationPath({{std::move(id), false}}); }

  RelationPath inverted() const;
  /// Canonical text, e.g. ":Author:Affiliation" or "inverse(:isHeldBy)".
  std::string to_string() const;

  friend bool operator==(const RelationPath&, const RelationPath&) = default;
  friend auto operator<=>(const RelationPath&, const RelationPath&) = default;
};

/// Read access to relations by id. Implemented by Dataset and by session
/// overlays that add computed relations.
class RelationCatalog {
 public:
  virtual ~RelationCatalog() = default;
  virtual const Relation* find(std::string_view id) const = 0;
  virtual void for_each(const std::function<void(const Relation&)>& visit) const = 0;
  /// Display label of an item; defaults to the label the item carries.
  virtual std::optional<std::string> label_of(const Item& item) const { return item.label(); }
};

/// Resolves a single step. An id ":XOf" that is not itself defined resolves to
/// the inverse of ":X". Throws ResolutionError.
Relation resolve_step(const RelationCatalog& catalog, const RelationStep& step);
/// resolvePath: left fold of rjoin over the steps.
Relation resolve_path(const RelationCatalog& catalog, const RelationPath& path);
/// Image of one item through a relation path, computed step by step without
/// materializing the joins. Order follows first discovery.
std::vector<Item> path_image(const RelationCatalog& catalog, const RelationPath& path,
                             const Item& item);
/// Throws ResolutionError when any step does not resolve.
void check_resolvable(const RelationCatalog& catalog, const RelationPath& path);

// ---------------------------------------------------------------------------
// Datasets

/// D = <I, R>. Every item referenced by a relation pair is registered in items.
class Dataset : public RelationCatalog {
 public:
  static constexpr std::string_view kLabelRelation = ":label";

  void add_item(const Item& item);
  /// Adds the pair and registers both items. Creates the relation on demand.
  void add_pair(const std::string& relation_id, const Item& subject, const Item& object);
  void set_label(const std::string& entity_id, std::string label);

  const Relation* find(std::string_view id) const override;
  void for_each(const std::function<void(const Relation&)>& visit) const override;
  std::optional<std::string> label_of(const Item& item) const override;

  const std::map<std::string, Relation, std::less<>>& relations() const noexcept {
    return relations_;
  }
  /// All items, entities first, in id order within each kind.
  std::vector<Item> items() const;
  std::vector<Item> entities() const;
  std::optional<Item> find_entity(std::string_view id) const;
  std::size_t item_count() const noexcept { return items_.size(); }
  const std::map<std::string, std::string, std::less<>>& labels() const noexcept {
    return labels_;
  }

  bool operator==(const Dataset& other) const;

 private:
  std::set<Item> items_;
  std::map<std::string, std::string, std::less<>> labels_;
  std::map<std::string, Relation, std::less<>> relations_;
};

// ---------------------------------------------------------------------------
// Exploration sets

/// Root-to-leaf item sequence, root included.
using Path = std::vector<Item>;

/// Fresh synthetic root item ("rs#<n>").
Item fresh_root();

/// An exploration set: a rooted tree of items whose children carry an explicit
/// order. Adding an item under a parent that already has it is a no-op, so the
/// tree never holds duplicate paths.
class ExplorationSet {
 public:
  using NodeId = std::size_t;
  static constexpr NodeId kRoot = 0;

  struct Node {
    Item item;
    NodeId parent = kRoot;
    std::size_t level = 1;
    std::vector<NodeId> children;
  };

  ExplorationSet() : ExplorationSet(fresh_root()) {}
  explicit ExplorationSet(Item root);

  /// Depth-2 set with the given items under a fresh root.
  static ExplorationSet flat(std::span<const Item> items);
  static ExplorationSet flat(std::initializer_list<Item> items);
  /// Builds a tree from paths; each path's first element is ignored (replaced
  /// by the new root). Paths are inserted in order; common prefixes merge.
  static ExplorationSet from_paths(std::span<const Path> paths, Item root = fresh_root());

  /// Returns the child node for item under parent, creating it if absent.
  NodeId add_child(NodeId parent, const Item& item);

  const Item& root_item() const noexcept { return nodes_[kRoot].item; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::span<const NodeId> children(NodeId id) const { return nodes_.at(id).children; }
  bool empty() const noexcept { return nodes_[kRoot].children.empty(); }

  /// Maximum node height; 1 for a root-only set.
  std::size_t depth() const;
  /// Node ids at the given 1-based level, in depth-first order.
  std::vector<NodeId> level(std::size_t lv) const;
  /// Items at the given level, deduplicated, in depth-first order.
  std::vector<Item> level_items(std::size_t lv) const;
  /// lf(T) minus the root: distinct leaf items in depth-first order.
  std::vector<Item> leaves() const;
  /// paths(S): one path per leaf, in depth-first order. Root-only set -> none.
  std::vector<Path> paths() const;
  /// Path set with the root slot blanked, for order-insensitive comparison.
  std::set<Path> path_set() const;
  /// Equality of path sets modulo root identity.
  bool same_paths(const ExplorationSet& other) const;
  /// Stronger than same_paths: identical child order at every node.
  bool same_ordered_tree(const ExplorationSet& other) const;

  /// Re-orders the children of one node. The permutation must be a
  /// permutation of children(parent).
  void reorder_children(NodeId parent, std::vector<NodeId> order);

 private:
  std::vector<Node> nodes_;
  std::map<std::pair<NodeId, Item>, NodeId> child_index_;
};

/// r(Ph, nroot): every path's first element replaced; duplicates collapse,
/// first occurrence order kept.
std::vector<Path> root_replace(std::span<const Path> paths, const Item& new_root);

/// Compact textual rendering used by tests and the CLI:
/// {a1, <a2, {p2, p3}>} style without the root.
std::string to_string(const ExplorationSet& set);

}  // namespace xplore

template <>
struct std::hash<xplore::Item> {
  std::size_t operator()(const xplore::Item& item) const noexcept {
    return std::hash<std::string>{}(item.id()) * 31u + static_cast<std::size_t>(item.kind());
  }
};
