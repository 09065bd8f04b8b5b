#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmnet/object_store.hpp"
#include "mmnet/types.hpp"

namespace mmnet {

/// What a function may read besides its arguments.
struct EvalContext {
  const ObjectStore* store = nullptr;
};

struct PredicateEntry {
  std::string name;
  int arity = 0;
  // True when the argument types are accepted.
  std::function<bool(const TypeTuple&)> accepts;
  std::function<bool(const std::vector<Value>&)> eval;
};

/// Functions yield tuples: most yield one value, `getL` yields the removed
/// element's components, which are spliced into the surrounding argument list.
struct FunctionEntry {
  std::string name;
  int arity = 0;  // -1 for variadic
  // Result types for the given argument types, or nullopt when ill-typed.
  std::function<std::optional<TypeTuple>(const TypeTuple&)> result;
  std::function<Tuple(const std::vector<Value>&, const EvalContext&)> eval;
};

/// Interpretation of predicate and function symbols. The built-in registry is
/// created once and read-only afterwards.
class Registry {
 public:
  static const Registry& builtin();

  bool has_predicate(const std::string& name) const { return predicates_.count(name) > 0; }
  bool has_function(const std::string& name) const { return functions_.count(name) > 0; }

  /// Throws UnknownPredicate.
  const PredicateEntry& predicate(const std::string& name) const;
  /// Throws UnknownFunction.
  const FunctionEntry& function(const std::string& name) const;

  /// Throws UnknownPredicate, ArityMismatch or TypeMismatch.
  void check_predicate(const std::string& name, const TypeTuple& args) const;
  TypeTuple function_result(const std::string& name, const TypeTuple& args) const;

  bool eval_predicate(const std::string& name, const std::vector<Value>& args) const;
  Tuple eval_function(const std::string& name, const std::vector<Value>& args,
                      const EvalContext& ctx = {}) const;

  std::vector<std::string> predicate_names() const;
  std::vector<std::string> function_names() const;

  void add(PredicateEntry e) { predicates_[e.name] = std::move(e); }
  void add(FunctionEntry e) { functions_[e.name] = std::move(e); }

 private:
  std::map<std::string, PredicateEntry> predicates_;
  std::map<std::string, FunctionEntry> functions_;
};

inline bool eval_predicate(const std::string& name, const std::vector<Value>& args) {
  return Registry::builtin().eval_predicate(name, args);
}

inline Tuple eval_function(const std::string& name, const std::vector<Value>& args,
                           const EvalContext& ctx = {}) {
  return Registry::builtin().eval_function(name, args, ctx);
}

}  // namespace mmnet
