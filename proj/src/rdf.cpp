#include "mmnet/rdf.hpp"

#include "mmnet/error.hpp"
#include "mmnet/lexer.hpp"

namespace mmnet {

std::string Term::to_string(const PrefixMap& prefixes) const {
  if (kind == TermKind::Iri) return format_iri(text, prefixes);
  return quote(text);
}

std::string Triple::to_string(const PrefixMap& prefixes) const {
  return s.to_string(prefixes) + " " + p.to_string(prefixes) + " " + o.to_string(prefixes);
}

Value term_to_value(const Term& t) {
  return t.is_iri() ? Value::iri(t.text) : Value::literal(t.text);
}

Term value_to_term(const Value& v) {
  if (v.kind() == Kind::Iri) return Term::iri(v.text());
  if (v.kind() == Kind::Literal) return Term::literal(v.text());
  throw TypeMismatch("RDF terms are L or I, got " + v.type().name());
}

MetadataGraph::MetadataGraph(const std::set<Triple>& triples) {
  for (const auto& t : triples) add(t);
}

void MetadataGraph::add(const Triple& t) {
  if (!t.p.is_iri()) throw TypeMismatch("predicate must be an IRI: " + t.to_string());
  if (spo_.insert(t).second) {
    pos_.insert(t);
    osp_.insert(t);
  }
}

void MetadataGraph::erase(const Triple& t) {
  if (spo_.erase(t)) {
    pos_.erase(t);
    osp_.erase(t);
  }
}

std::vector<Triple> MetadataGraph::match(const std::optional<Term>& s,
                                         const std::optional<Term>& p,
                                         const std::optional<Term>& o) const {
  std::vector<Triple> out;
  auto keep = [&](const Triple& t) {
    if ((!s || t.s == *s) && (!p || t.p == *p) && (!o || t.o == *o)) out.push_back(t);
  };
  if (s) {
    Triple lo{*s, Term{TermKind::Iri, ""}, Term{TermKind::Iri, ""}};
    for (auto it = spo_.lower_bound(lo); it != spo_.end() && it->s == *s; ++it) keep(*it);
  } else if (p) {
    Triple lo{Term{TermKind::Iri, ""}, *p, Term{TermKind::Iri, ""}};
    for (auto it = pos_.lower_bound(lo); it != pos_.end() && it->p == *p; ++it) keep(*it);
  } else if (o) {
    Triple lo{Term{TermKind::Iri, ""}, Term{TermKind::Iri, ""}, *o};
    for (auto it = osp_.lower_bound(lo); it != osp_.end() && it->o == *o; ++it) keep(*it);
  } else {
    out.assign(spo_.begin(), spo_.end());
  }
  return out;
}

MetadataGraph insert(MetadataGraph g, const std::set<Triple>& ts) {
  for (const auto& t : ts) g.add(t);
  return g;
}

MetadataGraph remove(MetadataGraph g, const std::set<Triple>& ts) {
  for (const auto& t : ts) g.erase(t);
  return g;
}

namespace {

Term read_term(TokenStream& ts, const PrefixMap& prefixes) {
  const Token& tok = ts.peek();
  switch (tok.kind) {
    case TokenKind::Iri: return Term::iri(ts.next().text);
    case TokenKind::String: return Term::literal(ts.next().text);
    case TokenKind::PName: {
      auto full = prefixes.expand(tok.text);
      if (!full) ts.fail("undeclared prefix");
      ts.next();
      return Term::iri(*full);
    }
    default:
      ts.fail("expected an IRI or a literal");
  }
}

}  // namespace

MetadataGraph parse_ntriples(std::string_view text, PrefixMap& prefixes) {
  TokenStream ts(tokenize(text));
  MetadataGraph g;
  while (!ts.at_end()) {
    const Token& head = ts.peek();
    if (head.kind == TokenKind::Oid && head.text == "prefix") {
      ts.next();
      std::string name = ts.expect_ident();
      ts.expect_punct(":");
      if (ts.peek().kind != TokenKind::Iri) ts.fail("expected a namespace IRI");
      prefixes.declare(name, ts.next().text);
      ts.expect_punct(".");
      continue;
    }
    const Token start = ts.peek();
    Triple t;
    t.s = read_term(ts, prefixes);
    t.p = read_term(ts, prefixes);
    t.o = read_term(ts, prefixes);
    if (!t.p.is_iri()) ts.fail_at(start, "predicate must be an IRI");
    ts.expect_punct(".");
    g.add(t);
  }
  return g;
}

MetadataGraph parse_ntriples(std::string_view text) {
  PrefixMap prefixes;
  return parse_ntriples(text, prefixes);
}

std::string write_ntriples(const MetadataGraph& g, const PrefixMap& prefixes) {
  std::string out;
  for (const auto& [name, ns] : prefixes.entries())
    out += "@prefix " + name + ": <" + ns + "> .\n";
  for (const auto& t : g.triples()) out += t.to_string(prefixes) + " .\n";
  return out;
}

}  // namespace mmnet
