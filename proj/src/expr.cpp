#include "mmnet/expr.hpp"

#include "mmnet/error.hpp"
#include "mmnet/lexer.hpp"

namespace mmnet {

Expr Expr::var(std::string name) {
  Expr e;
  e.op = Op::Var;
  e.name = std::move(name);
  return e;
}

Expr Expr::constant(Value v) {
  Expr e;
  e.op = Op::Const;
  e.value = std::move(v);
  return e;
}

Expr Expr::call(std::string fn, std::vector<Expr> args) {
  Expr e;
  e.op = Op::Call;
  e.name = std::move(fn);
  e.args = std::move(args);
  return e;
}

Expr Expr::cast(Expr inner, DataType target) {
  Expr e;
  e.op = Op::Cast;
  e.type = std::move(target);
  e.args = {std::move(inner)};
  return e;
}

Tuple eval_expr(const Expr& e, const Binding& b, const EvalContext& ctx) {
  switch (e.op) {
    case Expr::Op::Var: {
      auto it = b.find(e.name);
      if (it == b.end()) throw MissingParameter("variable " + e.name + " is unbound");
      return {it->second};
    }
    case Expr::Op::Const: return {e.value};
    case Expr::Op::Call:
      return Registry::builtin().eval_function(e.name, eval_exprs(e.args, b, ctx), ctx);
    case Expr::Op::Cast: {
      Tuple inner = eval_expr(e.args[0], b, ctx);
      if (inner.size() != 1) throw TypeMismatch("cannot cast a tuple of " +
                                                std::to_string(inner.size()) + " values");
      return {cast(inner[0], e.type)};
    }
  }
  return {};
}

Tuple eval_exprs(const std::vector<Expr>& es, const Binding& b, const EvalContext& ctx) {
  Tuple out;
  for (const auto& e : es) {
    Tuple part = eval_expr(e, b, ctx);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

TypeTuple type_of(const Expr& e, const TypeEnv& env) {
  switch (e.op) {
    case Expr::Op::Var: {
      auto it = env.find(e.name);
      if (it == env.end()) throw TypeMismatch("variable " + e.name + " has no known type");
      return {it->second};
    }
    case Expr::Op::Const: return {e.value.type()};
    case Expr::Op::Call:
      return Registry::builtin().function_result(e.name, types_of(e.args, env));
    case Expr::Op::Cast: {
      TypeTuple inner = type_of(e.args[0], env);
      if (inner.size() != 1) throw TypeMismatch("cannot cast a tuple");
      if (!castable(inner[0], e.type))
        throw NoCastRule("no conversion from " + inner[0].name() + " to " + e.type.name());
      return {e.type};
    }
  }
  return {};
}

TypeTuple types_of(const std::vector<Expr>& es, const TypeEnv& env) {
  TypeTuple out;
  for (const auto& e : es) {
    TypeTuple part = type_of(e, env);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.op == Expr::Op::Var) out.insert(e.name);
  for (const auto& a : e.args) collect_vars(a, out);
}

Expr substitute(const Expr& e, const Binding& b) {
  if (e.op == Expr::Op::Var) {
    auto it = b.find(e.name);
    return it == b.end() ? e : Expr::constant(it->second);
  }
  Expr out = e;
  for (auto& a : out.args) a = substitute(a, b);
  return out;
}

bool is_ground(const Expr& e) {
  if (e.op == Expr::Op::Var) return false;
  for (const auto& a : e.args)
    if (!is_ground(a)) return false;
  return true;
}

std::string to_string(const Expr& e, const PrefixMap& prefixes) {
  switch (e.op) {
    case Expr::Op::Var: return e.name;
    case Expr::Op::Const:
      if (e.value.kind() == Kind::Iri) return format_iri(e.value.text(), prefixes);
      return e.value.to_string();
    case Expr::Op::Call: return e.name + "(" + to_string(e.args, prefixes) + ")";
    case Expr::Op::Cast: return to_string(e.args[0], prefixes) + "::" + e.type.name();
  }
  return "";
}

std::string to_string(const std::vector<Expr>& es, const PrefixMap& prefixes) {
  std::string out;
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (i) out += ", ";
    out += to_string(es[i], prefixes);
  }
  return out;
}

Guard Guard::predicate(std::string name, std::vector<Expr> args) {
  Guard g;
  g.op = Op::Pred;
  g.pred = std::move(name);
  g.args = std::move(args);
  return g;
}

Guard Guard::negate(Guard inner) {
  Guard g;
  g.op = Op::Not;
  g.children = {std::move(inner)};
  return g;
}

Guard Guard::conj(Guard a, Guard b) {
  Guard g;
  g.op = Op::And;
  g.children = {std::move(a), std::move(b)};
  return g;
}

Guard Guard::disj(Guard a, Guard b) {
  Guard g;
  g.op = Op::Or;
  g.children = {std::move(a), std::move(b)};
  return g;
}

bool eval_guard(const Guard& g, const Binding& b, const EvalContext& ctx) {
  switch (g.op) {
    case Guard::Op::True: return true;
    case Guard::Op::Pred:
      try {
        return Registry::builtin().eval_predicate(g.pred, eval_exprs(g.args, b, ctx));
      } catch (const CastFailure&) {
        return false;
      } catch (const EmptySetAccess&) {
        return false;
      } catch (const DanglingAddress&) {
        return false;
      }
    case Guard::Op::Not: return !eval_guard(g.children[0], b, ctx);
    case Guard::Op::And:
      return eval_guard(g.children[0], b, ctx) && eval_guard(g.children[1], b, ctx);
    case Guard::Op::Or:
      return eval_guard(g.children[0], b, ctx) || eval_guard(g.children[1], b, ctx);
  }
  return false;
}

void check_guard(const Guard& g, const TypeEnv& env) {
  if (g.op == Guard::Op::Pred) {
    Registry::builtin().check_predicate(g.pred, types_of(g.args, env));
    return;
  }
  for (const auto& c : g.children) check_guard(c, env);
}

void collect_vars(const Guard& g, std::set<std::string>& out) {
  for (const auto& a : g.args) collect_vars(a, out);
  for (const auto& c : g.children) collect_vars(c, out);
}

namespace {

const std::set<std::string>& infix_predicates() {
  static const std::set<std::string> ops{"=", "!=", "<", ">", "<=", ">="};
  return ops;
}

std::string guard_operand(const Guard& g, const PrefixMap& prefixes) {
  std::string s = to_string(g, prefixes);
  if (g.op == Guard::Op::And || g.op == Guard::Op::Or) return "(" + s + ")";
  return s;
}

}  // namespace

std::string to_string(const Guard& g, const PrefixMap& prefixes) {
  switch (g.op) {
    case Guard::Op::True: return "true";
    case Guard::Op::Pred:
      if (infix_predicates().count(g.pred) && g.args.size() == 2)
        return to_string(g.args[0], prefixes) + " " + g.pred + " " +
               to_string(g.args[1], prefixes);
      return g.pred + "(" + to_string(g.args, prefixes) + ")";
    case Guard::Op::Not: return "not " + guard_operand(g.children[0], prefixes);
    case Guard::Op::And:
      return guard_operand(g.children[0], prefixes) + " and " +
             guard_operand(g.children[1], prefixes);
    case Guard::Op::Or:
      return guard_operand(g.children[0], prefixes) + " or " +
             guard_operand(g.children[1], prefixes);
  }
  return "";
}

// ----------------------------------------------------------------- parsing

DataType parse_type(TokenStream& ts, const std::set<std::string>& media) {
  const Token tok = ts.peek();
  std::string name = ts.expect_ident();
  if (name == "Set") {
    ts.expect_punct("<");
    TypeTuple elems;
    do {
      elems.push_back(parse_type(ts, media));
    } while (ts.accept_punct("*") || ts.accept_punct(","));
    ts.expect_punct(">");
    for (const auto& e : elems)
      if (e.is_media()) ts.fail_at(tok, "sets of media objects are not supported");
    return DataType::set_of(std::move(elems));
  }
  std::set<std::string> known = media;
  known.insert("jpg");
  auto t = DataType::parse(name, known);
  if (!t) ts.fail_at(tok, "unknown type " + name);
  return *t;
}

namespace {

bool rect_ahead(const TokenStream& ts) {
  return ts.is_punct("(") && ts.peek(1).kind == TokenKind::Int && ts.is_punct(",", 2) &&
         ts.peek(3).kind == TokenKind::Int && ts.is_punct(")", 4) && ts.is_punct("..", 5);
}

Expr parse_primary(TokenStream& ts, const PrefixMap& prefixes) {
  const Token tok = ts.peek();
  switch (tok.kind) {
    case TokenKind::Ident: {
      ts.next();
      if (ts.accept_punct("(")) {
        std::vector<Expr> args;
        if (!ts.is_punct(")")) {
          do {
            args.push_back(parse_expr(ts, prefixes));
          } while (ts.accept_punct(","));
        }
        ts.expect_punct(")");
        return Expr::call(tok.text, std::move(args));
      }
      return Expr::var(tok.text);
    }
    case TokenKind::String:
    case TokenKind::Int:
    case TokenKind::Oid:
    case TokenKind::Iri:
    case TokenKind::PName: {
      DataType expected = tok.kind == TokenKind::String ? DataType::str()
                          : tok.kind == TokenKind::Int ? DataType::integer()
                          : tok.kind == TokenKind::Oid ? DataType::oid()
                                                       : DataType::iri();
      if (tok.kind == TokenKind::String && ts.is_punct("^^", 1)) {
        expected = ts.peek(2).text == "I" ? DataType::iri() : DataType::literal();
      }
      return Expr::constant(parse_value(ts, expected, prefixes));
    }
    case TokenKind::Punct:
      if (rect_ahead(ts)) return Expr::constant(parse_value(ts, DataType::rect(), prefixes));
      [[fallthrough]];
    default:
      ts.fail("expected an expression");
  }
}

Guard parse_or(TokenStream& ts, const PrefixMap& prefixes);

Guard parse_atom(TokenStream& ts, const PrefixMap& prefixes) {
  if (ts.accept_keyword("true")) return Guard::top();
  if (ts.is_punct("(") && !rect_ahead(ts)) {
    ts.next();
    Guard g = parse_or(ts, prefixes);
    ts.expect_punct(")");
    return g;
  }
  const Token& tok = ts.peek();
  if (tok.kind == TokenKind::Ident && ts.is_punct("(", 1) &&
      Registry::builtin().has_predicate(tok.text) && !Registry::builtin().has_function(tok.text)) {
    std::string name = ts.next().text;
    ts.expect_punct("(");
    std::vector<Expr> args;
    if (!ts.is_punct(")")) {
      do {
        args.push_back(parse_expr(ts, prefixes));
      } while (ts.accept_punct(","));
    }
    ts.expect_punct(")");
    return Guard::predicate(name, std::move(args));
  }
  Expr lhs = parse_expr(ts, prefixes);
  for (const auto& op : infix_predicates()) {
    if (ts.accept_punct(op)) return Guard::predicate(op, {std::move(lhs), parse_expr(ts, prefixes)});
  }
  ts.fail("expected a comparison or predicate");
}

Guard parse_not(TokenStream& ts, const PrefixMap& prefixes) {
  if (ts.accept_keyword("not") || ts.accept_punct("!"))
    return Guard::negate(parse_not(ts, prefixes));
  return parse_atom(ts, prefixes);
}

Guard parse_and(TokenStream& ts, const PrefixMap& prefixes) {
  Guard g = parse_not(ts, prefixes);
  while (ts.accept_keyword("and") || ts.accept_punct("&&"))
    g = Guard::conj(std::move(g), parse_not(ts, prefixes));
  return g;
}

Guard parse_or(TokenStream& ts, const PrefixMap& prefixes) {
  Guard g = parse_and(ts, prefixes);
  while (ts.accept_keyword("or") || ts.accept_punct("||"))
    g = Guard::disj(std::move(g), parse_and(ts, prefixes));
  return g;
}

}  // namespace

Expr parse_expr(TokenStream& ts, const PrefixMap& prefixes) {
  Expr e = parse_primary(ts, prefixes);
  while (ts.accept_punct("::")) e = Expr::cast(std::move(e), parse_type(ts, {}));
  return e;
}

Guard parse_guard(TokenStream& ts, const PrefixMap& prefixes) { return parse_or(ts, prefixes); }

Expr parse_expr(std::string_view text, const PrefixMap& prefixes) {
  TokenStream ts(tokenize(text));
  Expr e = parse_expr(ts, prefixes);
  if (!ts.at_end()) ts.fail("trailing input after expression");
  return e;
}

Guard parse_guard(std::string_view text, const PrefixMap& prefixes) {
  TokenStream ts(tokenize(text));
  Guard g = parse_guard(ts, prefixes);
  if (!ts.at_end()) ts.fail("trailing input after guard");
  return g;
}

}  // namespace mmnet
