#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mmnet/multiset.hpp"
#include "mmnet/net.hpp"

namespace mmnet {

using Marking = std::map<std::string, Multiset<Tuple>>;

/// Runtime state: storage, marking of every place (views included) and the
/// counter used to mint fresh values.
struct Snapshot {
  StorageInstance storage;
  Marking marking;
  std::uint64_t fresh_counter = 0;

  const Multiset<Tuple>& tokens(const std::string& place) const;
  /// Canonical text; equal snapshots serialize identically.
  std::string serialize() const;
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

/// Initial tokens and storage of the net, with view markings computed.
Snapshot initial_snapshot(const MMNet& net);
/// Initial snapshot over a caller-provided storage instance.
Snapshot initial_snapshot(const MMNet& net, StorageInstance storage);

/// Recomputes every view place from the current metadata.
void refresh_views(const MMNet& net, Snapshot& s);

/// Plain text of every value occurring in tokens, metadata and object addresses.
std::set<std::string> values_of(const Snapshot& s);

/// Candidate values for external-input variables, by variable name.
using Supply = std::map<std::string, std::vector<Value>>;

struct Firing {
  std::string transition;
  Binding binding;
  auto operator<=>(const Firing&) const = default;
};

/// Modes of `t` in `s`, sorted. Fresh variables receive the next unused
/// `ν:<type>:<n>` names. Throws NoSupply when some input binding passes the
/// guard but an external-input variable has no supplied values.
std::vector<Binding> enabled_bindings(const MMNet& net, const Snapshot& s, const std::string& t,
                                      const Supply& supply = {});
/// Every enabled (transition, binding) pair, ordered by transition name then binding.
std::vector<Firing> enabled_firings(const MMNet& net, const Snapshot& s, const Supply& supply = {});

/// Fires `t` under `binding`. Throws NotEnabled naming the failed clause, or
/// the error raised while evaluating outputs or applying the action.
Snapshot fire(const MMNet& net, const Snapshot& s, const std::string& t, const Binding& binding);

/// Renames fresh values to ν:<type>:0.. in minting order and resets the counter.
/// Integer fresh values are left alone.
void canonicalize(Snapshot& s);

std::string binding_to_string(const Binding& b);
/// `place=count` for every nonempty place.
std::string marking_summary(const Snapshot& s);
/// `#<step> <transition> [<binding>] | <marking summary>`
std::string trace_line(std::size_t step, const Firing& f, const Snapshot& after);

// Exploration

struct Bounds {
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();
  std::size_t max_depth = kUnbounded;
  std::size_t max_states = 100000;
  std::size_t max_tokens_per_place = kUnbounded;
  std::size_t max_triples = kUnbounded;
  std::size_t max_objects = kUnbounded;
};

struct ExploreOptions {
  Bounds bounds;
  bool canonicalize = false;
  Supply supply;
};

struct Truncation {
  bool depth = false;
  bool states = false;
  bool tokens = false;
  bool triples = false;
  bool objects = false;
  bool any() const { return depth || states || tokens || triples || objects; }
  std::string to_string() const;
  friend bool operator==(const Truncation&, const Truncation&) = default;
};

struct Edge {
  std::size_t from;
  std::size_t to;
  Firing firing;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A firing that raised an error; exploration records it and goes on.
struct FiringError {
  std::size_t from;
  Firing firing;
  std::string message;
  friend bool operator==(const FiringError&, const FiringError&) = default;
};

struct LTS {
  static constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();
  std::vector<Snapshot> states;      // states[0] is the initial state
  std::vector<std::size_t> depth;
  std::vector<std::size_t> parent;   // index of the edge that discovered the state
  std::vector<Edge> edges;
  std::vector<FiringError> errors;
  Truncation truncated;

  /// States without outgoing edges or errors.
  std::vector<std::size_t> terminal_states() const;
  /// Firings leading from the initial state to `state`.
  std::vector<Firing> path_to(std::size_t state) const;
  friend bool operator==(const LTS&, const LTS&) = default;
};

/// Breadth-first exploration.
LTS explore(const MMNet& net, const Snapshot& init, const ExploreOptions& opts = {});
/// Level-synchronous OpenMP exploration; returns the same LTS as `explore`.
LTS explore_parallel(const MMNet& net, const Snapshot& init, const ExploreOptions& opts = {});

enum class Verdict { Reachable, NotReachableWithinBounds, Truncated };

struct ReachResult {
  Verdict verdict;
  std::vector<Firing> witness;  // set when reachable
  std::size_t states_seen = 0;
};

/// Whether some reachable state puts a token on `place`. Stops at the first hit.
ReachResult reachable_nonempty(const MMNet& net, const Snapshot& init, const std::string& place,
                               const ExploreOptions& opts = {});

std::string verdict_name(Verdict v);
std::string to_dot(const LTS& lts);

}  // namespace mmnet
