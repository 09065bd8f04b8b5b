#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mmnet/action.hpp"
#include "mmnet/expr.hpp"
#include "mmnet/query.hpp"

namespace mmnet {

enum class PlaceKind { Control, View };

struct Place {
  std::string name;
  PlaceKind kind = PlaceKind::Control;
  TypeTuple color;
  std::optional<Query> query;  // view places only
  std::string query_text;      // source form of `query`

  bool is_view() const { return kind == PlaceKind::View; }
};

struct Arc {
  std::string place;
  std::vector<Expr> inscription;
  friend bool operator==(const Arc&, const Arc&) = default;
};

struct ActionCall {
  std::string action;
  std::vector<Expr> args;
  friend bool operator==(const ActionCall&, const ActionCall&) = default;
};

struct Transition {
  std::string name;
  Guard guard;
  std::vector<Arc> inputs;   // consuming arcs from control places
  std::vector<Arc> reads;    // read arcs from view places
  std::vector<Arc> outputs;
  std::optional<ActionCall> action;
  std::vector<Param> fresh;     // ν-variables
  std::vector<Param> external;  // unbound non-fresh variables fed by an input supply
};

struct InitialToken {
  std::string place;
  Tuple tuple;
};

struct NetInit {
  std::vector<InitialToken> tokens;
  StorageInstance storage;
  // When set, the writer refers to these files instead of inlining the storage.
  std::string triples_file;
  std::string objects_file;
};

class MMNet {
 public:
  std::string name = "net";
  std::set<std::string> media_types{"jpg"};
  PrefixMap prefixes;
  std::vector<ActionDef> actions;
  std::vector<Place> places;
  std::vector<Transition> transitions;
  NetInit init;

  const Place* find_place(const std::string& name) const;
  const Transition* find_transition(const std::string& name) const;
  const ActionDef* find_action(const std::string& name) const;
  /// Throw UnknownPlace / UnknownTransition.
  const Place& place(const std::string& name) const;
  const Transition& transition(const std::string& name) const;
};

struct ValidationError {
  std::string clause;    // short name of the violated typing condition
  std::string location;  // place, transition or arc
  std::string message;
  std::string to_string() const;
};

/// Checks every structural and typing condition; empty iff the net is well formed.
std::vector<ValidationError> validate(const MMNet& net);

/// Variables of the input and read inscriptions.
std::set<std::string> in_vars(const MMNet& net, const std::string& transition);
/// Variables of the output inscriptions and of the action arguments.
std::set<std::string> out_vars(const MMNet& net, const std::string& transition);
/// Declared ν-variables occurring among the output variables.
std::set<std::string> fresh_out_vars(const MMNet& net, const std::string& transition);
/// Output variables that are neither bound by inputs nor fresh.
std::set<std::string> external_input_vars(const MMNet& net, const std::string& transition);

/// Types of every variable around a transition: input/read arcs, fresh and
/// external declarations. Conflicting or unknown types are left out.
TypeEnv variable_types(const MMNet& net, const Transition& t);

/// Builds a view place with a parsed query.
Place make_view(std::string name, TypeTuple color, std::string query_text,
                const PrefixMap& prefixes = PrefixMap());
Place make_place(std::string name, TypeTuple color);

}  // namespace mmnet
