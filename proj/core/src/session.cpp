#include "xplore/session.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <unordered_set>

#include "xplore/errors.hpp"

namespace xplore {

std::string input_name(const Input& input) {
  if (const auto* id = std::get_if<StateId>(&input)) return *id;
  return std::get<SourceRef>(input).key;
}

Invocation Invocation::unary(
    std::string op, Input input, std::string args,
    std::function<ExplorationSet(const ExplorationSet&, const RelationCatalog&)> fn) {
  Invocation inv;
  inv.op = op;
  inv.inputs.push_back(std::move(input));
  inv.apply = [fn = std::move(fn)](std::span<const ExplorationSet* const> in,
                                   const RelationCatalog& catalog) { return fn(*in[0], catalog); };
  inv.render = [op = std::move(op), args = std::move(args)](std::span<const std::string> names) {
    return names[0] + "." + op + "(" + args + ")";
  };
  return inv;
}

// ---------------------------------------------------------------------------

const Relation* SessionCatalog::find(std::string_view id) const {
  if (auto it = computed_.find(id); it != computed_.end()) return &it->second;
  return dataset_->find(id);
}

void SessionCatalog::for_each(const std::function<void(const Relation&)>& visit) const {
  dataset_->for_each(visit);
  for (const auto& [id, r] : computed_) visit(r);
}

std::optional<std::string> SessionCatalog::label_of(const Item& item) const {
  return dataset_->label_of(item);
}

const Relation& SessionCatalog::add_computed(Relation relation) {
  std::string id = relation.id();
  return computed_.insert_or_assign(std::move(id), std::move(relation)).first->second;
}

// ---------------------------------------------------------------------------

Session::Session(std::shared_ptr<const Dataset> dataset)
    : dataset_(std::move(dataset)), catalog_(dataset_) {
  if (!dataset_) throw SessionError("session needs a dataset");
}

StateId Session::append(Invocation invocation, bool derived,
                        std::optional<ExplorationSet> extension) {
  std::vector<std::string> names;
  for (const auto& in : invocation.inputs) {
    if (const auto* id = std::get_if<StateId>(&in); id && !index_.contains(*id))
      throw SessionError("unknown state '" + *id + "'");
    names.push_back(input_name(in));
  }
  auto slot = std::make_unique<Slot>();
  slot->state.id = "s" + std::to_string(slots_.size() + 1);
  slot->state.intention_text = invocation.render ? invocation.render(names) : invocation.op;
  slot->state.intention = std::move(invocation);
  slot->state.created_at = std::chrono::system_clock::now();
  slot->state.derived = derived;
  slot->extension = std::move(extension);
  StateId id = slot->state.id;
  index_.emplace(id, slots_.size());
  slots_.push_back(std::move(slot));
  return id;
}

StateId Session::invoke(Invocation invocation) {
  std::lock_guard lock(mutex_);
  bool propagate = invocation.back_propagate;
  StateId id = append(std::move(invocation), false);
  if (propagate) back_propagate(id);
  return id;
}

StateId Session::invoke(Invocation invocation, ExplorationSet extension) {
  std::lock_guard lock(mutex_);
  bool propagate = invocation.back_propagate;
  StateId id = append(std::move(invocation), false, std::move(extension));
  if (propagate) back_propagate(id);
  return id;
}

namespace {

// Paths of `base` whose tail reaches one of `kept` through rp.
ExplorationSet restrict_to_support(const ExplorationSet& base, const ExplorationSet& kept,
                                   const RelationPath& rp, const RelationCatalog& catalog) {
  auto leaves = kept.leaves();
  std::unordered_set<Item> survivors(leaves.begin(), leaves.end());
  std::vector<Path> out;
  for (auto& p : base.paths()) {
    auto image = path_image(catalog, rp, p.back());
    if (std::any_of(image.begin(), image.end(), [&](const Item& j) { return survivors.contains(j); }))
      out.push_back(std::move(p));
  }
  return ExplorationSet::from_paths(out);
}

}  // namespace

std::vector<StateId> Session::back_propagate(const StateId& refine_state) {
  std::lock_guard lock(mutex_);
  const auto& refine = state_locked(refine_state);
  if (refine.intention.inputs.size() != 1)
    throw SessionError("back-propagation needs a single-input refine");
  const Input* upstream = &refine.intention.inputs.front();
  const auto* pivot_id = std::get_if<StateId>(upstream);
  if (!pivot_id || !state_locked(*pivot_id).intention.pivot_path)
    throw SessionError("back-propagation from '" + refine_state + "' needs a pivot input, got '" +
                       input_name(*upstream) + "'");

  std::vector<StateId> out;
  StateId restricted = refine_state;
  while (const auto* id = std::get_if<StateId>(upstream)) {
    const auto& pivot = state_locked(*id);
    if (!pivot.intention.pivot_path || pivot.intention.inputs.size() != 1) break;
    Invocation inv;
    inv.op = "propagate";
    inv.inputs = {restricted, pivot.intention.inputs.front()};
    inv.apply = [rp = *pivot.intention.pivot_path](std::span<const ExplorationSet* const> in,
                                                   const RelationCatalog& catalog) {
      return restrict_to_support(*in[1], *in[0], rp, catalog);
    };
    inv.render = [](std::span<const std::string> names) {
      return "propagate(" + names[0] + ", " + names[1] + ")";
    };
    restricted = append(std::move(inv), true);
    out.push_back(restricted);
    upstream = &pivot.intention.inputs.front();
  }
  return out;
}

bool Session::has_state(std::string_view id) const {
  std::lock_guard lock(mutex_);
  return index_.contains(id);
}

const ExplorationState& Session::state_locked(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw SessionError("unknown state '" + std::string(id) + "'");
  return slots_[it->second]->state;
}

const ExplorationState& Session::state(std::string_view id) const {
  std::lock_guard lock(mutex_);
  return state_locked(id);
}

std::vector<StateId> Session::state_ids() const {
  std::lock_guard lock(mutex_);
  std::vector<StateId> out;
  for (const auto& s : slots_) out.push_back(s->state.id);
  return out;
}

std::size_t Session::size() const {
  std::lock_guard lock(mutex_);
  return slots_.size();
}

const ExplorationSet& Session::extension(std::string_view id) const {
  std::lock_guard lock(mutex_);
  auto it = index_.find(id);
  if (it == index_.end()) throw SessionError("unknown state '" + std::string(id) + "'");
  const auto& slot = *slots_[it->second];
  if (!slot.extension) {
    std::vector<const ExplorationSet*> inputs;
    for (const auto& in : slot.state.intention.inputs) inputs.push_back(&resolve(in));
    slot.extension = slot.state.intention.apply(inputs, catalog_);
  }
  return *slot.extension;
}

const ExplorationSet& Session::resolve(const Input& input) const {
  if (const auto* id = std::get_if<StateId>(&input)) return extension(*id);
  return std::get<SourceRef>(input).set;
}

bool Session::is_materialized(std::string_view id) const {
  std::lock_guard lock(mutex_);
  auto it = index_.find(id);
  return it != index_.end() && slots_[it->second]->extension.has_value();
}

void Session::bind(const std::string& name, Input input) {
  std::lock_guard lock(mutex_);
  if (const auto* id = std::get_if<StateId>(&input); id && !index_.contains(*id))
    throw SessionError("unknown state '" + *id + "'");
  bindings_.insert_or_assign(name, std::move(input));
}

std::optional<Input> Session::binding(std::string_view name) const {
  std::lock_guard lock(mutex_);
  if (auto it = bindings_.find(name); it != bindings_.end()) return it->second;
  return std::nullopt;
}

Trail Session::trail() const {
  std::lock_guard lock(mutex_);
  Trail t;
  for (const auto& slot : slots_) {
    const auto& s = slot->state;
    TrailNode node{s.id, s.intention.op, s.intention_text, s.derived, {}};
    for (const auto& in : s.intention.inputs) {
      if (const auto* id = std::get_if<StateId>(&in))
        t.edges.emplace_back(*id, s.id);
      else
        node.sources.push_back(std::get<SourceRef>(in).key);
    }
    t.nodes.push_back(std::move(node));
  }
  return t;
}

std::vector<StateId> Session::replay(std::span<const StateId> ids,
                                     const std::map<std::string, Input>& substitutions) {
  std::lock_guard lock(mutex_);
  std::vector<std::size_t> order;
  for (const auto& id : ids) {
    auto it = index_.find(id);
    if (it == index_.end()) throw SessionError("unknown state '" + id + "'");
    order.push_back(it->second);
  }
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  std::map<StateId, StateId> copies;
  std::vector<StateId> out;
  for (auto pos : order) {
    const auto& original = slots_[pos]->state;
    Invocation inv = original.intention;
    for (auto& in : inv.inputs) {
      if (auto sub = substitutions.find(input_name(in)); sub != substitutions.end()) {
        in = sub->second;
      } else if (const auto* id = std::get_if<StateId>(&in)) {
        if (auto c = copies.find(*id); c != copies.end()) in = c->second;
      }
    }
    // Back-propagation copies come along as explicit derived states.
    inv.back_propagate = false;
    auto fresh = append(std::move(inv), original.derived);
    copies.emplace(original.id, fresh);
    out.push_back(fresh);
  }
  return out;
}

const Relation& Session::register_computed_relation(const StateId& id, const std::string& name) {
  std::lock_guard lock(mutex_);
  if (name.size() < 2 || name.front() != ':')
    throw SessionError("relation name '" + name + "' must start with ':'");
  if (catalog_.find(name) != nullptr)
    throw SessionError("relation '" + name + "' already exists");
  const auto& set = extension(id);
  Relation r(name, Provenance::Computed);
  if (!set.empty()) {
    if (set.depth() != 3)
      throw SessionError("state '" + id + "' has depth " + std::to_string(set.depth()) +
                         "; a computed relation needs item -> value pairs (depth 3)");
    for (auto n : set.children(ExplorationSet::kRoot)) {
      auto values = set.children(n);
      if (values.size() > 1)
        throw SessionError("item '" + set.node(n).item.id() + "' of state '" + id +
                           "' has several values");
      for (auto v : values) r.add(set.node(n).item, set.node(v).item);
    }
  }
  registrations_.emplace_back(slots_.size(), "register(" + id + ", " + name + ")");
  return catalog_.add_computed(std::move(r));
}

std::string Session::save() const {
  std::lock_guard lock(mutex_);
  std::ostringstream os;
  os << "#dataset " << dataset_fingerprint(*dataset_) << "\n";
  auto next = registrations_.begin();
  auto registered_until = [&](std::size_t count) {
    for (; next != registrations_.end() && next->first <= count; ++next) os << next->second << "\n";
  };
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    registered_until(i);
    const auto& s = slots_[i]->state;
    if (s.derived) continue;
    os << s.id << " = " << s.intention_text << (s.intention.back_propagate ? "!" : "") << "\n";
  }
  registered_until(slots_.size());
  for (const auto& [name, in] : bindings_) {
    const auto* id = std::get_if<StateId>(&in);
    if (id && *id != name) os << name << " = " << *id << "\n";
  }
  return os.str();
}

std::string dataset_fingerprint(const Dataset& dataset) {
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  for (const auto& item : dataset.items()) {
    feed(to_string(item.kind()));
    feed(item.id());
  }
  for (const auto& [id, label] : dataset.labels()) {
    feed(id);
    feed(label);
  }
  for (const auto& [id, r] : dataset.relations()) {
    feed(id);
    std::set<Edge> pairs(r.pairs().begin(), r.pairs().end());
    for (const auto& [a, b] : pairs) {
      feed(a.id());
      feed(b.id());
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace xplore
