#pragma once

#include <set>
#include <string>
#include <vector>

#include "mmnet/expr.hpp"
#include "mmnet/object_store.hpp"
#include "mmnet/rdf.hpp"

namespace mmnet {

struct Param {
  std::string name;
  DataType type;
  friend bool operator==(const Param&, const Param&) = default;
};

/// Triple with expressions in each position. Subject and object values that
/// are not L or I are cast to L; the predicate must evaluate to an IRI.
struct TripleTemplate {
  Expr s;
  Expr p;
  Expr o;
  friend bool operator==(const TripleTemplate&, const TripleTemplate&) = default;
};

/// `target -> function(args)`: writes the function result at the target address.
struct Generator {
  Expr target;
  std::string function;
  std::vector<Expr> args;
  friend bool operator==(const Generator&, const Generator&) = default;
};

/// Parameterized action: parameters, deletions (mm-, mo-) and additions (mm+, mo+).
struct ActionDef {
  std::string name;
  std::vector<Param> params;
  std::vector<TripleTemplate> mm_minus;
  std::vector<TripleTemplate> mm_plus;
  std::vector<Expr> mo_minus;
  std::vector<Generator> mo_plus;

  friend bool operator==(const ActionDef&, const ActionDef&) = default;
};

/// Multimedia storage instance: metadata graph plus object store.
struct StorageInstance {
  MetadataGraph metadata;
  ObjectStore objects;
  friend bool operator==(const StorageInstance&, const StorageInstance&) = default;
};

struct GroundGenerator {
  std::string target;
  std::string function;
  std::vector<Expr> args;  // ground; evaluated against the storage being updated
};

struct ActionInstance {
  std::string name;
  std::set<Triple> mm_minus;
  std::set<Triple> mm_plus;
  std::set<std::string> mo_minus;
  std::vector<GroundGenerator> mo_plus;
};

/// Grounds the action under `sigma` (actual values are cast to parameter
/// types). Templates that read objects use `store`. Throws MissingParameter,
/// TypeMismatch, NoCastRule or CastFailure.
ActionInstance instantiate(const ActionDef& def, const Binding& sigma,
                           const ObjectStore* store = nullptr);

/// M' = (M ∖ mm-) ∪ mm+ and O' = (O ∖ (mo- minus updated addresses)) ∪ mo+,
/// with every generator evaluated on the original storage. Throws
/// DanglingAddress, AddressConflict or the generator's own error.
StorageInstance apply(const ActionInstance& inst, const StorageInstance& storage);

/// Static well-formedness; one message per problem.
std::vector<std::string> validate_action(const ActionDef& def);

/// Advisory warnings for deletions or creations without matching metadata.
std::vector<std::string> lint_consistency(const ActionDef& def);

}  // namespace mmnet
