#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mmnet/prefixes.hpp"
#include "mmnet/rdf.hpp"

namespace mmnet {

/// A triple-pattern position: a variable (`?x`, stored without `?`) or a term.
struct PatternTerm {
  bool is_var = false;
  std::string var;
  Term term;

  static PatternTerm variable(std::string name) { return {true, std::move(name), {}}; }
  static PatternTerm constant(Term t) { return {false, {}, std::move(t)}; }

  auto operator<=>(const PatternTerm&) const = default;
};

struct TriplePattern {
  PatternTerm s;
  PatternTerm p;
  PatternTerm o;
  auto operator<=>(const TriplePattern&) const = default;
};

/// FILTER condition: term (in)equality combined with !, && and ||.
struct Condition {
  enum class Op { Eq, Ne, And, Or, Not };
  Op op = Op::Eq;
  PatternTerm lhs;
  PatternTerm rhs;
  std::vector<Condition> children;

  friend bool operator==(const Condition&, const Condition&) = default;
};

struct GraphPattern {
  enum class Op { Bgp, Join, Union, Filter };
  Op op = Op::Bgp;
  std::vector<TriplePattern> triples;   // Bgp
  std::vector<GraphPattern> children;   // Join/Union: two, Filter: one
  Condition condition;                  // Filter

  static GraphPattern bgp(std::vector<TriplePattern> triples);
  static GraphPattern join(GraphPattern a, GraphPattern b);
  static GraphPattern union_of(GraphPattern a, GraphPattern b);
  static GraphPattern filter(GraphPattern p, Condition c);

  friend bool operator==(const GraphPattern&, const GraphPattern&) = default;
};

struct Query {
  enum class Form { Select, Ask };
  Form form = Form::Select;
  std::vector<std::string> vars;  // answer variables, in declared order
  GraphPattern pattern;

  friend bool operator==(const Query&, const Query&) = default;
};

using Mapping = std::map<std::string, Term>;
using AnswerTuple = std::vector<Term>;

/// Variables of a pattern in first-occurrence order.
std::vector<std::string> pattern_vars(const GraphPattern& p);

/// Parses `[PREFIX p: <ns>]* (SELECT ?v.. | SELECT * | ASK) [WHERE] { ... }`.
/// Throws SyntaxError or UnboundAnswerVariable.
Query parse_query(std::string_view text, const PrefixMap& prefixes = PrefixMap());

/// Inverse of parse_query up to whitespace: parse(unparse(q)) == q.
std::string unparse_query(const Query& q, const PrefixMap& prefixes = PrefixMap());

std::set<Mapping> eval_bgp(const MetadataGraph& g, const std::vector<TriplePattern>& bgp);
std::set<Mapping> eval_pattern(const MetadataGraph& g, const GraphPattern& p);

/// Select: the set of answer tuples. Ask: {()} when the pattern has a
/// solution, {} otherwise.
std::set<AnswerTuple> answer(const MetadataGraph& g, const Query& q);
bool ask(const MetadataGraph& g, const Query& q);

}  // namespace mmnet
