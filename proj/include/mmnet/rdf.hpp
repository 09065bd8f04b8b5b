#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "mmnet/prefixes.hpp"
#include "mmnet/types.hpp"

namespace mmnet {

enum class TermKind { Iri, Literal };

/// Ground RDF term. There are no blank nodes.
struct Term {
  TermKind kind = TermKind::Literal;
  std::string text;

  static Term iri(std::string t) { return {TermKind::Iri, std::move(t)}; }
  static Term literal(std::string t) { return {TermKind::Literal, std::move(t)}; }

  bool is_iri() const { return kind == TermKind::Iri; }
  std::string to_string(const PrefixMap& prefixes = PrefixMap()) const;

  auto operator<=>(const Term&) const = default;
};

struct Triple {
  Term s;
  Term p;
  Term o;

  std::string to_string(const PrefixMap& prefixes = PrefixMap()) const;
  auto operator<=>(const Triple&) const = default;
};

/// Converts between store terms and typed values (L and I only).
Value term_to_value(const Term& t);
Term value_to_term(const Value& v);

/// Ground RDF graph with set semantics, indexed by subject, predicate and
/// object for pattern lookups.
class MetadataGraph {
 public:
  MetadataGraph() = default;
  explicit MetadataGraph(const std::set<Triple>& triples);

  /// Adds a triple; throws TypeMismatch when the predicate is a literal.
  void add(const Triple& t);
  void erase(const Triple& t);

  bool contains(const Triple& t) const { return spo_.count(t) > 0; }
  std::size_t size() const { return spo_.size(); }
  bool empty() const { return spo_.empty(); }
  const std::set<Triple>& triples() const { return spo_; }

  /// All triples agreeing with the bound positions.
  std::vector<Triple> match(const std::optional<Term>& s, const std::optional<Term>& p,
                            const std::optional<Term>& o) const;

  friend bool operator==(const MetadataGraph& a, const MetadataGraph& b) {
    return a.spo_ == b.spo_;
  }

 private:
  struct ByPredicate {
    bool operator()(const Triple& a, const Triple& b) const {
      return std::tie(a.p, a.o, a.s) < std::tie(b.p, b.o, b.s);
    }
  };
  struct ByObject {
    bool operator()(const Triple& a, const Triple& b) const {
      return std::tie(a.o, a.s, a.p) < std::tie(b.o, b.s, b.p);
    }
  };

  std::set<Triple> spo_;
  std::set<Triple, ByPredicate> pos_;
  std::set<Triple, ByObject> osp_;
};

/// g ∪ ts
MetadataGraph insert(MetadataGraph g, const std::set<Triple>& ts);
/// g ∖ ts; absent triples are ignored.
MetadataGraph remove(MetadataGraph g, const std::set<Triple>& ts);

/// Reads the N-Triples subset: `s p o .` per line, `@prefix p: <ns> .`
/// declarations, `#` comments. Declared prefixes are added to `prefixes`.
MetadataGraph parse_ntriples(std::string_view text, PrefixMap& prefixes);
MetadataGraph parse_ntriples(std::string_view text);
std::string write_ntriples(const MetadataGraph& g, const PrefixMap& prefixes = PrefixMap());

}  // namespace mmnet
