#pragma once

// Exploration sessions: a DAG of states, each an intention (the invocation
// that produced it) plus a lazily materialized extension.

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "xplore/model.hpp"

namespace xplore {

using StateId = std::string;

/// A set that does not come from a state: the dataset `d`, a bound item such
/// as `p`, or a set literal. The key is its source text.
struct SourceRef {
  std::string key;
  ExplorationSet set;
};

using Input = std::variant<StateId, SourceRef>;

std::string input_name(const Input& input);

struct Invocation {
  using ApplyFn =
      std::function<ExplorationSet(std::span<const ExplorationSet* const>, const RelationCatalog&)>;
  /// Intention text given the display names of the inputs, e.g. "s1.pivot(:cite)".
  using RenderFn = std::function<std::string(std::span<const std::string>)>;

  std::string op;
  std::vector<Input> inputs;
  ApplyFn apply;
  RenderFn render;
  /// Relation path of a pivot; lets back-propagation walk pivot chains.
  std::optional<RelationPath> pivot_path;
  /// Refine carrying the "!" marker.
  bool back_propagate = false;

  /// Single-input operation rendered as "<input>.<op>(<args>)".
  static Invocation unary(std::string op, Input input, std::string args,
                          std::function<ExplorationSet(const ExplorationSet&, const RelationCatalog&)> fn);
};

struct ExplorationState {
  StateId id;
  Invocation intention;
  std::string intention_text;
  std::chrono::system_clock::time_point created_at;
  /// Produced by back-propagation rather than by a user statement.
  bool derived = false;
};

struct TrailNode {
  StateId id;
  std::string op;
  std::string intention;
  bool derived = false;
  /// Inputs that are not states (dataset, items, literals).
  std::vector<std::string> sources;
};

struct Trail {
  std::vector<TrailNode> nodes;                       // topological order
  std::vector<std::pair<StateId, StateId>> edges;     // <input state, dependent state>
};

/// Relation catalog of a session: the dataset plus computed relations.
class SessionCatalog : public RelationCatalog {
 public:
  explicit SessionCatalog(std::shared_ptr<const Dataset> dataset) : dataset_(std::move(dataset)) {}

  const Relation* find(std::string_view id) const override;
  void for_each(const std::function<void(const Relation&)>& visit) const override;
  std::optional<std::string> label_of(const Item& item) const override;

  const Relation& add_computed(Relation relation);
  const std::map<std::string, Relation, std::less<>>& computed() const noexcept { return computed_; }

 private:
  std::shared_ptr<const Dataset> dataset_;
  std::map<std::string, Relation, std::less<>> computed_;
};

class Session {
 public:
  explicit Session(std::shared_ptr<const Dataset> dataset);

  const Dataset& dataset() const noexcept { return *dataset_; }
  std::shared_ptr<const Dataset> dataset_ptr() const noexcept { return dataset_; }
  const RelationCatalog& catalog() const noexcept { return catalog_; }

  /// Appends a state. Throws SessionError for unknown input states. A refine
  /// carrying back_propagate also emits the derived ancestor states.
  StateId invoke(Invocation invocation);
  /// Same, with the extension already computed by the caller.
  StateId invoke(Invocation invocation, ExplorationSet extension);

  /// Derived states restricting every set along the pivot chain that feeds
  /// the refine state to items supporting its surviving paths. Throws
  /// SessionError when the refine's input is not a pivot state.
  std::vector<StateId> back_propagate(const StateId& refine_state);

  bool has_state(std::string_view id) const;
  const ExplorationState& state(std::string_view id) const;
  std::vector<StateId> state_ids() const;
  std::size_t size() const;

  /// Materializes (once) and returns the extension of a state.
  const ExplorationSet& extension(std::string_view id) const;
  /// Extension of a state or the set of a source.
  const ExplorationSet& resolve(const Input& input) const;
  bool is_materialized(std::string_view id) const;

  void bind(const std::string& name, Input input);
  std::optional<Input> binding(std::string_view name) const;
  const std::map<std::string, Input, std::less<>>& bindings() const noexcept { return bindings_; }

  Trail trail() const;

  /// Re-evaluates the given states (in creation order) as fresh states. Inputs
  /// named in substitutions (by state id or source key) are replaced; inputs
  /// among the replayed states are redirected to their copies.
  std::vector<StateId> replay(std::span<const StateId> ids,
                              const std::map<std::string, Input>& substitutions);

  /// Registers the <item, value> pairs of a depth-3 state with single-valued
  /// leaves as a computed relation.
  const Relation& register_computed_relation(const StateId& id, const std::string& name);

  /// "#dataset <fingerprint>" followed by one `sN = ...` line per user state
  /// and `name = sN` alias lines.
  std::string save() const;

  /// Callers that need to run several mutating steps atomically lock this.
  std::mutex& writer_mutex() const noexcept { return writer_; }

 private:
  StateId append(Invocation invocation, bool derived,
                 std::optional<ExplorationSet> extension = std::nullopt);
  const ExplorationState& state_locked(std::string_view id) const;

  struct Slot {
    ExplorationState state;
    mutable std::optional<ExplorationSet> extension;
  };

  std::shared_ptr<const Dataset> dataset_;
  SessionCatalog catalog_;
  std::vector<std::unique_ptr<Slot>> slots_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, Input, std::less<>> bindings_;
  std::vector<std::pair<std::size_t, std::string>> registrations_;  // <states before, statement>
  mutable std::recursive_mutex mutex_;
  mutable std::mutex writer_;
};

/// Content hash of a dataset (FNV-1a over a canonical serialization), hex.
std::string dataset_fingerprint(const Dataset& dataset);

}  // namespace xplore
