#include "mmnet/query.hpp"

#include <algorithm>
#include <optional>

#include "mmnet/error.hpp"
#include "mmnet/lexer.hpp"

namespace mmnet {

GraphPattern GraphPattern::bgp(std::vector<TriplePattern> triples) {
  GraphPattern p;
  p.op = Op::Bgp;
  p.triples = std::move(triples);
  return p;
}

GraphPattern GraphPattern::join(GraphPattern a, GraphPattern b) {
  GraphPattern p;
  p.op = Op::Join;
  p.children = {std::move(a), std::move(b)};
  return p;
}

GraphPattern GraphPattern::union_of(GraphPattern a, GraphPattern b) {
  GraphPattern p;
  p.op = Op::Union;
  p.children = {std::move(a), std::move(b)};
  return p;
}

GraphPattern GraphPattern::filter(GraphPattern inner, Condition c) {
  GraphPattern p;
  p.op = Op::Filter;
  p.children = {std::move(inner)};
  p.condition = std::move(c);
  return p;
}

namespace {

void add_var(std::vector<std::string>& out, const PatternTerm& t) {
  if (t.is_var && std::find(out.begin(), out.end(), t.var) == out.end()) out.push_back(t.var);
}

void collect_vars(const GraphPattern& p, std::vector<std::string>& out) {
  for (const auto& tp : p.triples) {
    add_var(out, tp.s);
    add_var(out, tp.p);
    add_var(out, tp.o);
  }
  for (const auto& c : p.children) collect_vars(c, out);
}

void condition_vars(const Condition& c, std::vector<std::string>& out) {
  add_var(out, c.lhs);
  add_var(out, c.rhs);
  for (const auto& ch : c.children) condition_vars(ch, out);
}

// ---------------------------------------------------------------- parsing

class QueryParser {
 public:
  QueryParser(std::string_view text, const PrefixMap& prefixes)
      : ts_(tokenize(text)), prefixes_(prefixes) {}

  Query parse() {
    while (ts_.accept_keyword("PREFIX")) {
      std::string name = ts_.expect_ident();
      ts_.expect_punct(":");
      if (ts_.peek().kind != TokenKind::Iri) ts_.fail("expected a namespace IRI");
      prefixes_.declare(name, ts_.next().text);
    }
    Query q;
    bool star = false;
    std::vector<Token> var_tokens;
    if (ts_.accept_keyword("SELECT")) {
      q.form = Query::Form::Select;
      if (ts_.accept_punct("*")) {
        star = true;
      } else {
        if (ts_.peek().kind != TokenKind::Var) ts_.fail("expected answer variables or '*'");
        while (ts_.peek().kind == TokenKind::Var || ts_.is_punct(",")) {
          if (ts_.accept_punct(",")) continue;
          var_tokens.push_back(ts_.next());
        }
      }
    } else if (ts_.accept_keyword("ASK")) {
      q.form = Query::Form::Ask;
    } else {
      ts_.fail("expected SELECT or ASK");
    }
    ts_.accept_keyword("WHERE");
    q.pattern = group();
    if (!ts_.at_end()) ts_.fail("unexpected input after the query pattern");

    auto vars = pattern_vars(q.pattern);
    if (star) {
      q.vars = vars;
    } else {
      for (const auto& tok : var_tokens) {
        if (std::find(vars.begin(), vars.end(), tok.text) == vars.end())
          throw UnboundAnswerVariable("?" + tok.text);
        q.vars.push_back(tok.text);
      }
    }
    return q;
  }

 private:
  GraphPattern group() {
    ts_.expect_punct("{");
    std::vector<GraphPattern> parts;
    std::vector<TriplePattern> pending;
    std::vector<std::pair<Token, Condition>> filters;
    auto flush = [&]() {
      if (!pending.empty()) {
        parts.push_back(GraphPattern::bgp(std::move(pending)));
        pending.clear();
      }
    };
    while (!ts_.is_punct("}")) {
      if (ts_.at_end()) ts_.fail("unterminated group, expected '}'");
      if (ts_.accept_punct(".")) continue;
      if (ts_.is_keyword("FILTER")) {
        Token at = ts_.next();
        ts_.expect_punct("(");
        Condition c = condition();
        ts_.expect_punct(")");
        filters.emplace_back(at, std::move(c));
        continue;
      }
      if (ts_.is_punct("{")) {
        flush();
        GraphPattern g = group();
        while (ts_.accept_keyword("UNION")) g = GraphPattern::union_of(std::move(g), group());
        parts.push_back(std::move(g));
        continue;
      }
      TriplePattern tp;
      tp.s = term(false);
      tp.p = term(true);
      tp.o = term(false);
      pending.push_back(std::move(tp));
      if (!ts_.is_punct("}") && !ts_.is_punct(".") && !ts_.is_keyword("FILTER") &&
          !ts_.is_punct("{"))
        ts_.fail("expected '.' or '}' after a triple pattern");
    }
    ts_.expect_punct("}");
    flush();
    GraphPattern result = GraphPattern::bgp({});
    if (!parts.empty()) {
      result = std::move(parts[0]);
      for (std::size_t i = 1; i < parts.size(); ++i)
        result = GraphPattern::join(std::move(result), std::move(parts[i]));
    }
    for (auto& [at, c] : filters) {
      std::vector<std::string> have = pattern_vars(result);
      std::vector<std::string> used;
      condition_vars(c, used);
      for (const auto& v : used)
        if (std::find(have.begin(), have.end(), v) == have.end())
          ts_.fail_at(at, "filter variable ?" + v + " does not occur in the group");
      result = GraphPattern::filter(std::move(result), std::move(c));
    }
    return result;
  }

  PatternTerm term(bool predicate) {
    const Token& tok = ts_.peek();
    switch (tok.kind) {
      case TokenKind::Var: return PatternTerm::variable(ts_.next().text);
      case TokenKind::Iri: return PatternTerm::constant(Term::iri(ts_.next().text));
      case TokenKind::PName: {
        auto full = prefixes_.expand(tok.text);
        if (!full) ts_.fail("undeclared prefix");
        ts_.next();
        return PatternTerm::constant(Term::iri(*full));
      }
      case TokenKind::String:
        if (predicate) ts_.fail("a literal cannot be a predicate");
        return PatternTerm::constant(Term::literal(ts_.next().text));
      default:
        ts_.fail(predicate ? "expected a predicate" : "expected a term or variable");
    }
  }

  Condition condition() {
    Condition left = conjunction();
    while (ts_.accept_punct("||")) {
      Condition c;
      c.op = Condition::Op::Or;
      c.children = {std::move(left), conjunction()};
      left = std::move(c);
    }
    return left;
  }

  Condition conjunction() {
    Condition left = unary();
    while (ts_.accept_punct("&&")) {
      Condition c;
      c.op = Condition::Op::And;
      c.children = {std::move(left), unary()};
      left = std::move(c);
    }
    return left;
  }

  Condition unary() {
    if (ts_.accept_punct("!")) {
      Condition c;
      c.op = Condition::Op::Not;
      c.children = {unary()};
      return c;
    }
    if (ts_.accept_punct("(")) {
      Condition c = condition();
      ts_.expect_punct(")");
      return c;
    }
    Condition c;
    c.lhs = term(false);
    if (ts_.accept_punct("="))
      c.op = Condition::Op::Eq;
    else if (ts_.accept_punct("!="))
      c.op = Condition::Op::Ne;
    else
      ts_.fail("expected '=' or '!='");
    c.rhs = term(false);
    return c;
  }

  TokenStream ts_;
  PrefixMap prefixes_;
};

// -------------------------------------------------------------- unparsing

std::string term_text(const PatternTerm& t, const PrefixMap& prefixes) {
  if (t.is_var) return "?" + t.var;
  return t.term.to_string(prefixes);
}

std::string condition_text(const Condition& c, const PrefixMap& prefixes) {
  switch (c.op) {
    case Condition::Op::Eq:
      return term_text(c.lhs, prefixes) + " = " + term_text(c.rhs, prefixes);
    case Condition::Op::Ne:
      return term_text(c.lhs, prefixes) + " != " + term_text(c.rhs, prefixes);
    case Condition::Op::Not: return "!(" + condition_text(c.children[0], prefixes) + ")";
    case Condition::Op::And:
      return "(" + condition_text(c.children[0], prefixes) + " && " +
             condition_text(c.children[1], prefixes) + ")";
    case Condition::Op::Or:
      return "(" + condition_text(c.children[0], prefixes) + " || " +
             condition_text(c.children[1], prefixes) + ")";
  }
  return "";
}

std::string group_text(const GraphPattern& p, const PrefixMap& prefixes) {
  switch (p.op) {
    case GraphPattern::Op::Bgp: {
      if (p.triples.empty()) return "{ }";
      std::string out = "{ ";
      for (std::size_t i = 0; i < p.triples.size(); ++i) {
        if (i) out += " . ";
        const auto& t = p.triples[i];
        out += term_text(t.s, prefixes) + " " + term_text(t.p, prefixes) + " " +
               term_text(t.o, prefixes);
      }
      return out + " }";
    }
    case GraphPattern::Op::Join:
      return "{ " + group_text(p.children[0], prefixes) + " " +
             group_text(p.children[1], prefixes) + " }";
    case GraphPattern::Op::Union:
      return "{ " + group_text(p.children[0], prefixes) + " UNION " +
             group_text(p.children[1], prefixes) + " }";
    case GraphPattern::Op::Filter:
      return "{ " + group_text(p.children[0], prefixes) + " FILTER(" +
             condition_text(p.condition, prefixes) + ") }";
  }
  return "{ }";
}

// ------------------------------------------------------------- evaluation

bool bind(Mapping& m, const PatternTerm& pt, const Term& value) {
  if (!pt.is_var) return pt.term == value;
  auto [it, inserted] = m.emplace(pt.var, value);
  return inserted || it->second == value;
}

std::optional<Term> resolve(const Mapping& m, const PatternTerm& pt) {
  if (!pt.is_var) return pt.term;
  auto it = m.find(pt.var);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

void match_from(const MetadataGraph& g, const std::vector<TriplePattern>& bgp, std::size_t i,
                const Mapping& current, std::set<Mapping>& out) {
  if (i == bgp.size()) {
    out.insert(current);
    return;
  }
  const TriplePattern& tp = bgp[i];
  auto s = resolve(current, tp.s);
  auto p = resolve(current, tp.p);
  auto o = resolve(current, tp.o);
  for (const Triple& t : g.match(s, p, o)) {
    Mapping next = current;
    if (bind(next, tp.s, t.s) && bind(next, tp.p, t.p) && bind(next, tp.o, t.o))
      match_from(g, bgp, i + 1, next, out);
  }
}

bool compatible(const Mapping& a, const Mapping& b) {
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it != b.end() && it->second != v) return false;
  }
  return true;
}

// Three-valued filter evaluation: nullopt is an evaluation error, raised by
// comparisons on unbound variables.
std::optional<bool> holds(const Condition& c, const Mapping& m) {
  switch (c.op) {
    case Condition::Op::Eq:
    case Condition::Op::Ne: {
      auto l = resolve(m, c.lhs);
      auto r = resolve(m, c.rhs);
      if (!l || !r) return std::nullopt;
      return (c.op == Condition::Op::Eq) == (*l == *r);
    }
    case Condition::Op::Not: {
      auto v = holds(c.children[0], m);
      if (!v) return std::nullopt;
      return !*v;
    }
    case Condition::Op::And: {
      auto a = holds(c.children[0], m);
      auto b = holds(c.children[1], m);
      if ((a && !*a) || (b && !*b)) return false;
      if (!a || !b) return std::nullopt;
      return true;
    }
    case Condition::Op::Or: {
      auto a = holds(c.children[0], m);
      auto b = holds(c.children[1], m);
      if ((a && *a) || (b && *b)) return true;
      if (!a || !b) return std::nullopt;
      return false;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::string> pattern_vars(const GraphPattern& p) {
  std::vector<std::string> out;
  collect_vars(p, out);
  return out;
}

Query parse_query(std::string_view text, const PrefixMap& prefixes) {
  return QueryParser(text, prefixes).parse();
}

std::string unparse_query(const Query& q, const PrefixMap& prefixes) {
  std::string out;
  if (q.form == Query::Form::Ask) {
    out = "ASK WHERE ";
  } else {
    out = "SELECT";
    for (const auto& v : q.vars) out += " ?" + v;
    out += " WHERE ";
  }
  return out + group_text(q.pattern, prefixes);
}

std::set<Mapping> eval_bgp(const MetadataGraph& g, const std::vector<TriplePattern>& bgp) {
  std::set<Mapping> out;
  match_from(g, bgp, 0, Mapping{}, out);
  return out;
}

std::set<Mapping> eval_pattern(const MetadataGraph& g, const GraphPattern& p) {
  switch (p.op) {
    case GraphPattern::Op::Bgp: return eval_bgp(g, p.triples);
    case GraphPattern::Op::Join: {
      auto left = eval_pattern(g, p.children[0]);
      auto right = eval_pattern(g, p.children[1]);
      std::set<Mapping> out;
      for (const auto& a : left) {
        for (const auto& b : right) {
          if (!compatible(a, b)) continue;
          Mapping merged = a;
          merged.insert(b.begin(), b.end());
          out.insert(std::move(merged));
        }
      }
      return out;
    }
    case GraphPattern::Op::Union: {
      auto out = eval_pattern(g, p.children[0]);
      auto right = eval_pattern(g, p.children[1]);
      out.insert(right.begin(), right.end());
      return out;
    }
    case GraphPattern::Op::Filter: {
      std::set<Mapping> out;
      for (const auto& m : eval_pattern(g, p.children[0])) {
        auto v = holds(p.condition, m);
        if (v && *v) out.insert(m);
      }
      return out;
    }
  }
  return {};
}

std::set<AnswerTuple> answer(const MetadataGraph& g, const Query& q) {
  std::set<AnswerTuple> out;
  auto solutions = eval_pattern(g, q.pattern);
  if (q.form == Query::Form::Ask) {
    if (!solutions.empty()) out.insert(AnswerTuple{});
    return out;
  }
  for (const auto& m : solutions) {
    AnswerTuple row;
    bool complete = true;
    for (const auto& v : q.vars) {
      auto it = m.find(v);
      if (it == m.end()) {
        complete = false;
        break;
      }
      row.push_back(it->second);
    }
    // A UNION branch may leave an answer variable unbound; such rows have no
    // tuple of the declared arity and are skipped.
    if (complete) out.insert(std::move(row));
  }
  return out;
}

bool ask(const MetadataGraph& g, const Query& q) {
  return !eval_pattern(g, q.pattern).empty();
}

}  // namespace mmnet
