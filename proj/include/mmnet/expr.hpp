#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mmnet/prefixes.hpp"
#include "mmnet/registry.hpp"
#include "mmnet/types.hpp"

namespace mmnet {

class TokenStream;

using Binding = std::map<std::string, Value>;
using TypeEnv = std::map<std::string, DataType>;

/// Inscription item, action argument or guard operand.
struct Expr {
  enum class Op { Var, Const, Call, Cast };
  Op op = Op::Var;
  std::string name;  // variable or function name
  Value value;       // Const
  DataType type;     // Cast target
  std::vector<Expr> args;

  static Expr var(std::string name);
  static Expr constant(Value v);
  static Expr call(std::string fn, std::vector<Expr> args);
  static Expr cast(Expr inner, DataType target);

  friend bool operator==(const Expr&, const Expr&) = default;
};

/// Evaluates to a tuple; only calls such as getL produce more than one value.
/// Throws MissingParameter for unbound variables.
Tuple eval_expr(const Expr& e, const Binding& b, const EvalContext& ctx);
/// Evaluates and concatenates a list of expressions.
Tuple eval_exprs(const std::vector<Expr>& es, const Binding& b, const EvalContext& ctx);

/// Static result types; throws TypeMismatch, UnknownFunction, ArityMismatch or
/// NoCastRule.
TypeTuple type_of(const Expr& e, const TypeEnv& env);
TypeTuple types_of(const std::vector<Expr>& es, const TypeEnv& env);

void collect_vars(const Expr& e, std::set<std::string>& out);
/// Substitutes bound variables by constants.
Expr substitute(const Expr& e, const Binding& b);
bool is_ground(const Expr& e);

std::string to_string(const Expr& e, const PrefixMap& prefixes = PrefixMap());
std::string to_string(const std::vector<Expr>& es, const PrefixMap& prefixes = PrefixMap());

/// Guard formula: predicates over terms closed under not/and/or.
struct Guard {
  enum class Op { True, Pred, Not, And, Or };
  Op op = Op::True;
  std::string pred;
  std::vector<Expr> args;
  std::vector<Guard> children;

  static Guard top() { return {}; }
  static Guard predicate(std::string name, std::vector<Expr> args);
  static Guard negate(Guard g);
  static Guard conj(Guard a, Guard b);
  static Guard disj(Guard a, Guard b);

  friend bool operator==(const Guard&, const Guard&) = default;
};

/// Value-level failures inside a guard (a failed cast, getL on an empty set,
/// a dangling address) make the guard false.
bool eval_guard(const Guard& g, const Binding& b, const EvalContext& ctx);
void check_guard(const Guard& g, const TypeEnv& env);
void collect_vars(const Guard& g, std::set<std::string>& out);
std::string to_string(const Guard& g, const PrefixMap& prefixes = PrefixMap());

// Text syntax shared with the net-definition reader.
DataType parse_type(TokenStream& ts, const std::set<std::string>& media);
Expr parse_expr(TokenStream& ts, const PrefixMap& prefixes);
Guard parse_guard(TokenStream& ts, const PrefixMap& prefixes);
Expr parse_expr(std::string_view text, const PrefixMap& prefixes = PrefixMap());
Guard parse_guard(std::string_view text, const PrefixMap& prefixes = PrefixMap());

}  // namespace mmnet
