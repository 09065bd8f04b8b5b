#pragma once

// Random inputs and independent oracles shared by the unit and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mmnet/action.hpp"
#include "mmnet/net.hpp"
#include "mmnet/net_text.hpp"
#include "mmnet/object_store.hpp"
#include "mmnet/query.hpp"
#include "mmnet/rdf.hpp"
#include "mmnet/runtime.hpp"

namespace mmnet::test {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
const T& pick_of(Rng& rng, const std::vector<T>& xs) {
  return xs[pick(rng, xs.size())];
}

// ---- graphs and BGPs ------------------------------------------------------

/// Term number i of a small vocabulary: even numbers are IRIs, odd ones literals.
inline Term vocab_term(int i) {
  return i % 2 == 0 ? Term::iri("http://t.example/" + std::to_string(i))
                    : Term::literal("v" + std::to_string(i));
}

inline MetadataGraph random_graph(Rng& rng, std::size_t max_triples, int n_terms) {
  MetadataGraph g;
  std::size_t n = pick(rng, max_triples + 1);
  // Predicates must be IRIs: the even-numbered terms.
  int n_iris = (n_terms + 1) / 2;
  for (std::size_t i = 0; i < n; ++i)
    g.add({vocab_term(static_cast<int>(pick(rng, n_terms))),
           vocab_term(2 * static_cast<int>(pick(rng, n_iris))),
           vocab_term(static_cast<int>(pick(rng, n_terms)))});
  return g;
}

inline std::vector<TriplePattern> random_bgp(Rng& rng, int n_terms, std::size_t max_patterns = 3,
                                             int max_vars = 3) {
  auto position = [&] {
    if (coin(rng, 0.55))
      return PatternTerm::variable("x" + std::to_string(pick(rng, max_vars)));
    return PatternTerm::constant(vocab_term(static_cast<int>(pick(rng, n_terms))));
  };
  std::vector<TriplePattern> out(1 + pick(rng, max_patterns));
  for (auto& tp : out) tp = {position(), position(), position()};
  return out;
}

/// Tries every assignment of the pattern variables to terms of `g` and keeps
/// those that map every pattern onto a triple of `g`.
inline std::set<Mapping> brute_force_bgp(const MetadataGraph& g,
                                         const std::vector<TriplePattern>& bgp) {
  std::set<std::string> var_set;
  for (const auto& tp : bgp)
    for (const auto* pt : {&tp.s, &tp.p, &tp.o})
      if (pt->is_var) var_set.insert(pt->var);
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  std::set<Term> terms;
  for (const auto& t : g.triples()) terms.insert({t.s, t.p, t.o});
  std::vector<Term> domain(terms.begin(), terms.end());

  std::set<Mapping> out;
  if (!vars.empty() && domain.empty()) return out;
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Mapping m;
    for (std::size_t i = 0; i < vars.size(); ++i) m[vars[i]] = domain[idx[i]];
    auto ground = [&](const PatternTerm& pt) { return pt.is_var ? m.at(pt.var) : pt.term; };
    bool ok = std::all_of(bgp.begin(), bgp.end(), [&](const TriplePattern& tp) {
      return g.contains({ground(tp.s), ground(tp.p), ground(tp.o)});
    });
    if (ok) out.insert(m);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == domain.size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return out;
}

// ---- multiset oracle ------------------------------------------------------

using Bag = std::map<Tuple, long>;

inline Bag to_bag(const Multiset<Tuple>& m) {
  Bag b;
  for (const auto& [t, n] : m.entries()) b[t] = static_cast<long>(n);
  return b;
}

inline void normalize(Bag& b) {
  for (auto it = b.begin(); it != b.end();) it = it->second == 0 ? b.erase(it) : std::next(it);
}

/// Evaluates the inscription forms the random nets use: variables, constants
/// and casts.
inline Value eval_simple(const Expr& e, const Binding& b) {
  switch (e.op) {
    case Expr::Op::Var: return b.at(e.name);
    case Expr::Op::Const: return e.value;
    case Expr::Op::Cast: return cast(eval_simple(e.args.at(0), b), e.type);
    default: throw Error("eval_simple: calls are not supported");
  }
}

inline Tuple eval_arc(const Arc& a, const Binding& b, const TypeTuple& color) {
  Tuple t;
  for (std::size_t i = 0; i < a.inscription.size(); ++i) {
    Value v = eval_simple(a.inscription[i], b);
    t.push_back(v.type() == color[i] ? v : cast(v, color[i]));
  }
  return t;
}

/// m − σ(F_in) + σ(F_out) for the control places of `net`, computed over plain maps.
inline std::map<std::string, Bag> firing_formula(const MMNet& net, const Snapshot& s,
                                                 const Transition& t, const Binding& b) {
  std::map<std::string, Bag> m;
  for (const auto& p : net.places)
    if (!p.is_view()) m[p.name] = to_bag(s.tokens(p.name));
  for (const auto& a : t.inputs) m[a.place][eval_arc(a, b, net.place(a.place).color)] -= 1;
  for (const auto& a : t.outputs) m[a.place][eval_arc(a, b, net.place(a.place).color)] += 1;
  for (auto& [_, bag] : m) normalize(bag);
  return m;
}

/// Whether σ(F_in) and σ(F_read) fit inside the marking, summing per place.
inline bool inputs_contained(const MMNet& net, const Snapshot& s, const Transition& t,
                             const Binding& b) {
  std::map<std::string, Bag> need;
  for (const auto* arcs : {&t.inputs, &t.reads})
    for (const auto& a : *arcs) need[a.place][eval_arc(a, b, net.place(a.place).color)] += 1;
  for (const auto& [p, bag] : need) {
    Bag have = to_bag(s.tokens(p));
    for (const auto& [tup, n] : bag)
      if (have[tup] < n) return false;
  }
  return true;
}

// ---- view coherence -------------------------------------------------------

/// Expected marking of a view: each castable answer row once.
inline Multiset<Tuple> expected_view(const Place& v, const MetadataGraph& g) {
  Multiset<Tuple> out;
  for (const auto& row : answer(g, *v.query)) {
    Tuple t;
    bool ok = true;
    for (std::size_t i = 0; i < row.size() && ok; ++i) {
      try {
        t.push_back(cast(term_to_value(row[i]), v.color[i]));
      } catch (const Error&) {
        ok = false;
      }
    }
    if (ok && out.count(t) == 0) out.add(t);
  }
  return out;
}

/// Names of views whose marking differs from the query answer.
inline std::vector<std::string> incoherent_views(const MMNet& net, const Snapshot& s) {
  std::vector<std::string> bad;
  for (const auto& p : net.places)
    if (p.is_view() && s.tokens(p.name) != expected_view(p, s.storage.metadata))
      bad.push_back(p.name);
  return bad;
}

// ---- random actions -------------------------------------------------------

struct ActionCase {
  ActionDef def;
  Binding sigma;
  StorageInstance storage;
};

/// Small actions over subjects s0..s2, predicates mmdb:p0/p1, objects o0..o2
/// and addresses o0..o3, with parameters x: str and t: oid.
inline ActionCase random_action_case(Rng& rng) {
  auto lit = [&](const char* prefix, std::size_t n) {
    return std::string(prefix) + std::to_string(pick(rng, n));
  };
  auto pred = [&] { return Value::iri(std::string(kMmdbNamespace) + lit("p", 2)); };
  ActionCase c;
  c.def.name = "random";
  c.def.params = {{"x", DataType::str()}, {"t", DataType::oid()}};
  c.sigma = {{"x", Value::str(lit("s", 3))}, {"t", Value::oid(lit("o", 4))}};

  for (int i = 0; i < 6; ++i)
    if (coin(rng))
      c.storage.metadata.add({Term::literal(lit("s", 3)),
                              Term::iri(std::string(kMmdbNamespace) + lit("p", 2)),
                              Term::literal(lit("o", 3))});
  for (int a = 0; a < 4; ++a) {
    if (!coin(rng, 0.6)) continue;
    SyntheticImage img;
    img.width = 40;
    img.height = 40;
    for (std::size_t r = pick(rng, 3); r > 0; --r) {
      std::int64_t x = static_cast<std::int64_t>(pick(rng, 30));
      img.regions.push_back({"human face", {x, x, x + 5, x + 5}});
    }
    c.storage.objects.put_or_update("o" + std::to_string(a), img);
  }

  auto subject = [&] {
    return coin(rng) ? Expr::cast(Expr::var("x"), DataType::literal())
                     : Expr::constant(Value::literal(lit("s", 3)));
  };
  auto tmpl = [&] {
    return TripleTemplate{subject(), Expr::constant(pred()),
                          Expr::constant(Value::literal(lit("o", 3)))};
  };
  for (std::size_t n = pick(rng, 4); n > 0; --n) c.def.mm_minus.push_back(tmpl());
  for (std::size_t n = pick(rng, 4); n > 0; --n) c.def.mm_plus.push_back(tmpl());
  if (!c.def.mm_minus.empty() && coin(rng, 0.4))
    c.def.mm_plus.push_back(pick_of(rng, c.def.mm_minus));

  auto address = [&] {
    return coin(rng, 0.3) ? Expr::var("t") : Expr::constant(Value::oid(lit("o", 4)));
  };
  // Sources mostly name stored objects so that most cases apply cleanly.
  std::vector<std::string> stored;
  for (const auto& [a, _] : c.storage.objects.objects()) stored.push_back(a);
  auto src = [&] {
    if (!stored.empty() && coin(rng, 0.85))
      return Expr::call("src", {Expr::constant(Value::oid(pick_of(rng, stored)))});
    return Expr::call("src", {address()});
  };
  for (std::size_t n = pick(rng, 3); n > 0; --n) c.def.mo_minus.push_back(address());
  for (std::size_t n = pick(rng, 3); n > 0; --n) {
    Generator g;
    g.target = address();
    switch (pick(rng, 3)) {
      case 0:
        g.function = "extractIMG";
        g.args = {src(), Expr::constant(Value::rect({0, 0, 10, 10}))};
        break;
      case 1:
        g.function = "markIMG";
        g.args = {src(), Expr::constant(Value::rect({1, 1, 4, 4})),
                  Expr::constant(Value::str("oval")), Expr::constant(Value::str("red"))};
        break;
      default:
        g.function = "sub";
        g.args = {src(), src()};
    }
    c.def.mo_plus.push_back(std::move(g));
  }
  return c;
}

struct ApplyOracle {
  StorageInstance result;
  std::string error;  // "AddressConflict" or "DanglingAddress" when apply must throw
  bool priority_case = false;  // some triple is both deleted and added
  bool carve_out_case = false;  // some existing address is both deleted and rewritten
};

/// The set formulas M' = (M ∖ mm−) ∪ mm+ and
/// O' = (O ∖ (mo− ∖ rewritten existing addresses)) ∪ mo+, evaluated directly.
inline ApplyOracle apply_oracle(const ActionCase& c) {
  auto ground = [&](const Expr& e) -> Value {
    if (e.op == Expr::Op::Var) return c.sigma.at(e.name);
    if (e.op == Expr::Op::Cast) return cast(c.sigma.at(e.args[0].name), e.type);
    return e.value;
  };
  auto triple = [&](const TripleTemplate& t) {
    return Triple{Term::literal(ground(t.s).text()), Term::iri(ground(t.p).text()),
                  Term::literal(ground(t.o).text())};
  };
  std::set<Triple> minus, plus;
  for (const auto& t : c.def.mm_minus) minus.insert(triple(t));
  for (const auto& t : c.def.mm_plus) plus.insert(triple(t));

  ApplyOracle out;
  for (const auto& t : minus)
    if (plus.count(t)) out.priority_case = true;
  std::set<Triple> m;
  for (const auto& t : c.storage.metadata.triples())
    if (!minus.count(t)) m.insert(t);
  m.insert(plus.begin(), plus.end());
  out.result.metadata = MetadataGraph(m);

  const auto& objects = c.storage.objects.objects();
  std::map<std::string, SyntheticImage> writes;
  for (const auto& g : c.def.mo_plus) {
    std::string target = ground(g.target).text();
    if (writes.count(target)) {
      out.error = "AddressConflict";
      return out;
    }
    std::vector<const SyntheticImage*> srcs;
    for (const auto& a : g.args)
      if (a.op == Expr::Op::Call) {
        auto it = objects.find(ground(a.args[0]).text());
        if (it == objects.end()) {
          out.error = "DanglingAddress";
          return out;
        }
        srcs.push_back(&it->second);
      }
    if (g.function == "extractIMG")
      writes[target] = extract_img(*srcs[0], {0, 0, 10, 10});
    else if (g.function == "markIMG")
      writes[target] = mark_img(*srcs[0], {1, 1, 4, 4}, "oval", "red");
    else
      writes[target] = sub_img(*srcs[0], *srcs[1]);
  }
  std::set<std::string> deleted;
  for (const auto& e : c.def.mo_minus) {
    std::string a = ground(e).text();
    if (writes.count(a) && objects.count(a))
      out.carve_out_case = true;
    else
      deleted.insert(a);
  }
  for (const auto& [a, img] : objects)
    if (!deleted.count(a)) out.result.objects.put_or_update(a, img);
  for (const auto& [a, img] : writes) out.result.objects.put_or_update(a, img);
  return out;
}

// ---- random nets ----------------------------------------------------------

struct RandomNetOptions {
  int places = 3;       // control places, all of color str
  int transitions = 3;
  int tokens = 4;
  bool views = true;    // view places, read arcs and metadata actions
  bool growing = true;  // allow more outputs than inputs
};

/// A random well-formed net over str tokens "a".."c". With views, two view
/// places read `mmdb:p` and `mmdb:q` triples that actions add and delete.
inline std::string random_net_text(Rng& rng, const RandomNetOptions& o) {
  const std::vector<std::string> consts{"\"a\"", "\"b\"", "\"c\""};
  std::string text = "net random\n\n";
  if (o.views) {
    text +=
        "actions {\n"
        "  action addP(x: str, y: str) { add-mm { (x::L, mmdb:p, y::L) } }\n"
        "  action delP(x: str, y: str) { del-mm { (x::L, mmdb:p, y::L) } }\n"
        "  action addQ(x: str) { add-mm { (x::L, mmdb:q, \"on\"^^L) } }\n"
        "  action flip(x: str, y: str) {\n"
        "    del-mm { (x::L, mmdb:p, y::L) (x::L, mmdb:q, \"on\"^^L) }\n"
        "    add-mm { (y::L, mmdb:p, x::L) }\n"
        "  }\n"
        "}\n\n";
  }
  text += "places {\n";
  for (int i = 0; i < o.places; ++i) text += "  place P" + std::to_string(i) + " : str\n";
  if (o.views) {
    text += "  view V : L * L\n    query \"\"\"SELECT ?s ?o WHERE { ?s mmdb:p ?o }\"\"\"\n";
    text += "  view W : L\n    query \"\"\"SELECT ?s WHERE { ?s mmdb:q \"on\" }\"\"\"\n";
  }
  text += "}\n\ntransitions {\n";
  for (int i = 0; i < o.transitions; ++i) {
    std::string body;
    std::vector<std::string> terms = consts;
    std::vector<std::string> guards;
    body += "    in P" + std::to_string(pick(rng, o.places)) + " [x]\n";
    terms.push_back("x");
    int n_inputs = 1;
    if (coin(rng, 0.35)) {
      // Reusing x demands two equal tokens.
      std::string var = coin(rng, 0.3) ? "x" : "y";
      body += "    in P" + std::to_string(pick(rng, o.places)) + " [" + var + "]\n";
      if (var == "y") terms.push_back("y");
      ++n_inputs;
    }
    bool reads_v = o.views && coin(rng, 0.4);
    if (reads_v) {
      body += "    read V [s, o]\n";
      terms.push_back("s::str");
      terms.push_back("o::str");
      if (coin(rng)) guards.push_back("s::str = x");
    }
    if (o.views && coin(rng, 0.2)) {
      body += "    read W [w]\n";
      guards.push_back("w::str = x");
    }
    if (coin(rng, 0.3))
      guards.push_back(coin(rng) ? "x = " + pick_of(rng, consts)
                                 : "not x = " + pick_of(rng, consts));
    if (!guards.empty()) {
      std::string g = guards[0];
      for (std::size_t k = 1; k < guards.size(); ++k) g += " and " + guards[k];
      body = "    guard " + g + "\n" + body;
    }
    if (o.views && coin(rng, 0.7)) {
      switch (pick(rng, 4)) {
        case 0:
          body += "    action addP(" + pick_of(rng, terms) + ", " + pick_of(rng, terms) + ")\n";
          break;
        case 1:
          body += reads_v ? "    action delP(s::str, o::str)\n"
                          : "    action delP(x, " + pick_of(rng, terms) + ")\n";
          break;
        case 2: body += "    action addQ(" + pick_of(rng, terms) + ")\n"; break;
        default:
          body += reads_v ? "    action flip(s::str, o::str)\n"
                          : "    action flip(x, " + pick_of(rng, terms) + ")\n";
      }
    }
    std::size_t max_out = o.growing ? 2 : static_cast<std::size_t>(n_inputs);
    std::size_t n_out = pick(rng, max_out + 1);
    for (std::size_t k = 0; k < n_out; ++k)
      body += "    out P" + std::to_string(pick(rng, o.places)) + " [" + pick_of(rng, terms) +
              "]\n";
    text += "  transition T" + std::to_string(i) + " {\n" + body + "  }\n";
  }
  text += "}\n\ninit {\n";
  for (int i = 0; i < o.tokens; ++i)
    text += "  token P" + std::to_string(pick(rng, o.places)) + " [" + pick_of(rng, consts) +
            "]\n";
  if (o.views) {
    std::string nt;
    for (int i = 0; i < 3; ++i)
      if (coin(rng))
        nt += "\"" + std::string(1, static_cast<char>('a' + pick(rng, 3))) +
              "\" <http://example.org/mmdb#p> \"" +
              std::string(1, static_cast<char>('a' + pick(rng, 3))) + "\" .\n";
    if (coin(rng)) nt += "\"a\" <http://example.org/mmdb#q> \"on\" .\n";
    if (!nt.empty()) text += "  metadata \"\"\"\n" + nt + "\"\"\"\n";
  }
  text += "}\n";
  return text;
}

/// Fires random enabled firings from the initial snapshot; `visit` sees every
/// (pre, firing, post) step.
template <typename Visit>
void random_walk(const MMNet& net, Rng& rng, std::size_t steps, Visit visit,
                 const Supply& supply = {}) {
  Snapshot s = initial_snapshot(net);
  for (std::size_t i = 0; i < steps; ++i) {
    auto firings = enabled_firings(net, s, supply);
    if (firings.empty()) return;
    const Firing& f = firings[pick(rng, firings.size())];
    Snapshot next = fire(net, s, f.transition, f.binding);
    visit(s, f, next);
    s = std::move(next);
  }
}

// ---- reachability oracle for nets without views or ν ------------------------

/// Every marking reachable by firing any transition under any choice of one
/// token per input arc, as plain maps. Returns the set of markings and the
/// number of distinct (state, firing) edges.
struct OracleGraph {
  std::set<std::map<std::string, Bag>> states;
  std::size_t edges = 0;
};

inline std::map<std::string, Bag> control_marking(const MMNet& net, const Snapshot& s) {
  std::map<std::string, Bag> m;
  for (const auto& p : net.places)
    if (!p.is_view()) {
      m[p.name] = to_bag(s.tokens(p.name));
      normalize(m[p.name]);
    }
  return m;
}

/// Guard forms produced by random_net_text without views: x = c, not x = c.
inline bool eval_simple_guard(const Guard& g, const Binding& b) {
  switch (g.op) {
    case Guard::Op::True: return true;
    case Guard::Op::Not: return !eval_simple_guard(g.children[0], b);
    case Guard::Op::And:
      return eval_simple_guard(g.children[0], b) && eval_simple_guard(g.children[1], b);
    case Guard::Op::Or:
      return eval_simple_guard(g.children[0], b) || eval_simple_guard(g.children[1], b);
    case Guard::Op::Pred:
      if (g.pred != "=") throw Error("eval_simple_guard: unsupported predicate " + g.pred);
      return eval_simple(g.args[0], b) == eval_simple(g.args[1], b);
  }
  return false;
}

inline OracleGraph brute_force_reachability(const MMNet& net) {
  OracleGraph out;
  std::vector<std::map<std::string, Bag>> queue{control_marking(net, initial_snapshot(net))};
  out.states.insert(queue[0]);
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    auto m = queue[qi];
    std::set<std::pair<std::string, Binding>> seen;
    for (const auto& t : net.transitions) {
      // One token choice per input arc.
      std::vector<std::vector<Tuple>> choices;
      for (const auto& a : t.inputs) {
        std::vector<Tuple> c;
        for (const auto& [tup, n] : m[a.place]) c.push_back(tup);
        choices.push_back(c);
      }
      if (std::any_of(choices.begin(), choices.end(), [](const auto& c) { return c.empty(); }))
        continue;
      std::vector<std::size_t> idx(choices.size(), 0);
      while (true) {
        Binding b;
        bool unify = true;
        for (std::size_t i = 0; i < choices.size() && unify; ++i) {
          const auto& var = t.inputs[i].inscription[0].name;
          const Value& v = choices[i][idx[i]][0];
          auto [it, fresh] = b.emplace(var, v);
          if (!fresh && it->second != v) unify = false;
        }
        if (unify && eval_simple_guard(t.guard, b) && !seen.count({t.name, b})) {
          std::map<std::string, Bag> need;
          for (const auto& a : t.inputs) need[a.place][{b.at(a.inscription[0].name)}] += 1;
          bool fits = true;
          for (const auto& [p, bag] : need)
            for (const auto& [tup, n] : bag)
              if (m[p][tup] < n) fits = false;
          if (fits) {
            seen.insert({t.name, b});
            auto next = m;
            for (const auto& a : t.inputs) next[a.place][{b.at(a.inscription[0].name)}] -= 1;
            for (const auto& a : t.outputs) next[a.place][{eval_simple(a.inscription[0], b)}] += 1;
            for (auto& [_, bag] : next) normalize(bag);
            ++out.edges;
            if (out.states.insert(next).second) queue.push_back(next);
          }
        }
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
        if (i == idx.size()) break;
      }
    }
  }
  return out;
}

}  // namespace mmnet::test
