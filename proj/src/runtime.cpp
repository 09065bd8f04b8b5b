#include "mmnet/runtime.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <tuple>

#include "mmnet/error.hpp"

namespace mmnet {

namespace {

const std::string kNu = "\xCE\xBD";  // ν

const Multiset<Tuple>& empty_tokens() {
  static const Multiset<Tuple> empty;
  return empty;
}

void collect_values(const Value& v, std::set<std::string>& out) {
  switch (v.kind()) {
    case Kind::Set:
      for (const auto& t : v.items())
        for (const auto& x : t) collect_values(x, out);
      break;
    case Kind::Media:
      if (v.as_media().address) out.insert(*v.as_media().address);
      break;
    default:
      out.insert(v.plain_text());
  }
}

// ν:<kind>:<n> parts, or nullopt for other text.
std::optional<std::pair<std::string, std::uint64_t>> parse_fresh(const std::string& text) {
  if (text.compare(0, kNu.size() + 1, kNu + ":") != 0) return std::nullopt;
  std::size_t k = kNu.size() + 1;
  std::size_t colon = text.find(':', k);
  if (colon == std::string::npos || colon + 1 >= text.size()) return std::nullopt;
  std::uint64_t n = 0;
  auto [p, ec] = std::from_chars(text.data() + colon + 1, text.data() + text.size(), n);
  if (ec != std::errc() || p != text.data() + text.size()) return std::nullopt;
  return std::make_pair(text.substr(k, colon - k), n);
}

Value make_fresh(const DataType& type, std::uint64_t n) {
  std::string text = kNu + ":" + type.name() + ":" + std::to_string(n);
  switch (type.kind()) {
    case Kind::String: return Value::str(text);
    case Kind::Literal: return Value::literal(text);
    case Kind::Iri: return Value::iri(text);
    case Kind::Oid: return Value::oid(text);
    case Kind::Int: return Value::integer(static_cast<std::int64_t>(n));
    default: throw TypeMismatch("no fresh values of type " + type.name());
  }
}

std::set<std::string> binding_values(const Binding& b) {
  std::set<std::string> out;
  for (const auto& [_, v] : b) collect_values(v, out);
  return out;
}

const Place& checked_place(const MMNet& net, const std::string& name) { return net.place(name); }

// Σ σ(F_in(p,t)) over input and read arcs, by place.
std::map<std::string, Multiset<Tuple>> demand(const Transition& t, const Binding& b,
                                              const EvalContext& ctx) {
  std::map<std::string, Multiset<Tuple>> out;
  auto add = [&](const std::vector<Arc>& arcs) {
    for (const auto& a : arcs) out[a.place].add(eval_exprs(a.inscription, b, ctx));
  };
  add(t.inputs);
  add(t.reads);
  return out;
}

bool covered(const Snapshot& s, const std::map<std::string, Multiset<Tuple>>& need) {
  for (const auto& [p, ms] : need)
    if (!ms.subset_of(s.tokens(p))) return false;
  return true;
}

// All assignments of input/read tuples to inscription variables.
void unify_arcs(const std::vector<const Arc*>& arcs, std::size_t i, const Snapshot& s, Binding& b,
                std::vector<Binding>& out) {
  if (i == arcs.size()) {
    out.push_back(b);
    return;
  }
  const Arc& arc = *arcs[i];
  for (const auto& [tuple, _] : s.tokens(arc.place).entries()) {
    if (tuple.size() != arc.inscription.size()) continue;
    Binding saved = b;
    bool ok = true;
    for (std::size_t j = 0; ok && j < tuple.size(); ++j) {
      const Expr& e = arc.inscription[j];
      if (e.op != Expr::Op::Var)
        throw TypeMismatch("input inscription item " + to_string(e) + " is not a variable");
      auto [it, inserted] = b.emplace(e.name, tuple[j]);
      ok = inserted || it->second == tuple[j];
    }
    if (ok) unify_arcs(arcs, i + 1, s, b, out);
    b = std::move(saved);
  }
}

Value to_color(const Value& v, const DataType& type) {
  return v.type() == type ? v : cast(v, type);
}

}  // namespace

const Multiset<Tuple>& Snapshot::tokens(const std::string& place) const {
  auto it = marking.find(place);
  return it == marking.end() ? empty_tokens() : it->second;
}

std::string Snapshot::serialize() const {
  std::string out = "counter " + std::to_string(fresh_counter) + "\n";
  for (const auto& [p, ms] : marking) {
    if (ms.empty()) continue;
    out += "place " + p + "\n";
    for (const auto& [t, n] : ms.entries()) out += "  " + tuple_to_string(t) + " x" + std::to_string(n) + "\n";
  }
  out += "metadata\n";
  for (const auto& t : storage.metadata.triples()) out += "  " + t.to_string() + "\n";
  out += "objects\n" + store_to_json(storage.objects) + "\n";
  return out;
}

void refresh_views(const MMNet& net, Snapshot& s) {
  for (const auto& p : net.places) {
    if (!p.is_view() || !p.query) continue;
    Multiset<Tuple> ms;
    for (const auto& ans : answer(s.storage.metadata, *p.query)) {
      if (ans.size() != p.color.size()) continue;
      Tuple t;
      try {
        for (std::size_t i = 0; i < ans.size(); ++i)
          t.push_back(to_color(term_to_value(ans[i]), p.color[i]));
      } catch (const CastFailure&) {
        continue;
      }
      ms.add(t);
    }
    if (ms.empty())
      s.marking.erase(p.name);
    else
      s.marking[p.name] = std::move(ms);
  }
}

Snapshot initial_snapshot(const MMNet& net, StorageInstance storage) {
  Snapshot s;
  s.storage = std::move(storage);
  for (const auto& tok : net.init.tokens) {
    const Place& p = checked_place(net, tok.place);
    Tuple t;
    for (std::size_t i = 0; i < tok.tuple.size() && i < p.color.size(); ++i)
      t.push_back(to_color(tok.tuple[i], p.color[i]));
    s.marking[tok.place].add(t);
  }
  refresh_views(net, s);
  return s;
}

Snapshot initial_snapshot(const MMNet& net) { return initial_snapshot(net, net.init.storage); }

std::set<std::string> values_of(const Snapshot& s) {
  std::set<std::string> out;
  for (const auto& [_, ms] : s.marking)
    for (const auto& [t, n] : ms.entries())
      for (const auto& v : t) collect_values(v, out);
  for (const auto& t : s.storage.metadata.triples()) {
    out.insert(t.s.text);
    out.insert(t.p.text);
    out.insert(t.o.text);
  }
  for (const auto& [addr, img] : s.storage.objects.objects()) {
    out.insert(addr);
    for (const auto& r : img.regions) {
      out.insert(r.tag);
      out.insert(r.box.to_string());
    }
    for (const auto& d : img.decorations) {
      out.insert(d.shape);
      out.insert(d.color);
      out.insert(d.box.to_string());
    }
  }
  return out;
}

std::vector<Binding> enabled_bindings(const MMNet& net, const Snapshot& s, const std::string& name,
                                      const Supply& supply) {
  const Transition& t = net.transition(name);
  EvalContext ctx{&s.storage.objects};

  std::vector<const Arc*> arcs;
  for (const auto& a : t.inputs) arcs.push_back(&a);
  for (const auto& a : t.reads) arcs.push_back(&a);
  std::vector<Binding> partial;
  Binding scratch;
  unify_arcs(arcs, 0, s, scratch, partial);

  std::vector<Binding> passed;
  for (auto& b : partial) {
    if (!covered(s, demand(t, b, ctx))) continue;
    if (!eval_guard(t.guard, b, ctx)) continue;
    passed.push_back(std::move(b));
  }
  if (passed.empty()) return {};

  // External inputs: cartesian product over the supplied values.
  for (const auto& v : external_input_vars(net, name)) {
    auto decl = std::find_if(t.external.begin(), t.external.end(),
                             [&](const Param& p) { return p.name == v; });
    auto it = supply.find(v);
    if (it == supply.end() || it->second.empty())
      throw NoSupply("transition " + name + " needs values for external input " + v);
    std::vector<Binding> next;
    for (const auto& b : passed)
      for (const auto& val : it->second) {
        Binding nb = b;
        nb[v] = decl != t.external.end() ? to_color(val, decl->type) : val;
        next.push_back(std::move(nb));
      }
    passed = std::move(next);
  }

  if (!t.fresh.empty()) {
    std::set<std::string> used = values_of(s);
    for (auto& b : passed) {
      std::set<std::string> taken = used;
      for (const auto& x : binding_values(b)) taken.insert(x);
      std::uint64_t c = s.fresh_counter;
      for (const auto& f : t.fresh) {
        Value v = make_fresh(f.type, c++);
        while (taken.count(v.plain_text())) v = make_fresh(f.type, c++);
        taken.insert(v.plain_text());
        b[f.name] = v;
      }
    }
  }

  std::sort(passed.begin(), passed.end());
  passed.erase(std::unique(passed.begin(), passed.end()), passed.end());
  return passed;
}

std::vector<Firing> enabled_firings(const MMNet& net, const Snapshot& s, const Supply& supply) {
  std::vector<std::string> names;
  for (const auto& t : net.transitions) names.push_back(t.name);
  std::sort(names.begin(), names.end());
  std::vector<Firing> out;
  for (const auto& n : names)
    for (auto& b : enabled_bindings(net, s, n, supply)) out.push_back({n, std::move(b)});
  return out;
}

Snapshot fire(const MMNet& net, const Snapshot& s, const std::string& name, const Binding& binding) {
  const Transition& t = net.transition(name);
  EvalContext ctx{&s.storage.objects};

  for (const auto& v : in_vars(net, name))
    if (!binding.count(v)) throw NotEnabled(name + ": input variable " + v + " is unbound");
  std::map<std::string, Multiset<Tuple>> need;
  try {
    need = demand(t, binding, ctx);
  } catch (const Error& e) {
    throw NotEnabled(name + ": input inscriptions do not evaluate: " + e.what());
  }
  if (!covered(s, need)) throw NotEnabled(name + ": input tokens are not available");
  if (!eval_guard(t.guard, binding, ctx)) throw NotEnabled(name + ": guard is false");

  std::set<std::string> used = values_of(s);
  std::uint64_t counter = s.fresh_counter;
  for (const auto& f : t.fresh) {
    auto it = binding.find(f.name);
    if (it == binding.end()) throw NotEnabled(name + ": fresh variable " + f.name + " is unbound");
    if (it->second.type() != f.type)
      throw NotEnabled(name + ": fresh variable " + f.name + " must be " + f.type.name());
    std::string text = it->second.plain_text();
    if (used.count(text)) throw NotEnabled(name + ": value of " + f.name + " is not fresh");
    for (const auto& [other, v] : binding)
      if (other != f.name && v.plain_text() == text)
        throw NotEnabled(name + ": value of " + f.name + " also binds " + other);
    if (auto parsed = parse_fresh(text))
      counter = std::max(counter, parsed->second + 1);
    else if (f.type.kind() == Kind::Int && it->second.as_int() >= 0)
      counter = std::max(counter, static_cast<std::uint64_t>(it->second.as_int()) + 1);
  }
  for (const auto& v : external_input_vars(net, name))
    if (!binding.count(v)) throw NotEnabled(name + ": external input " + v + " is unbound");

  // Outputs and action arguments read the storage before the action.
  std::map<std::string, Multiset<Tuple>> produced;
  for (const auto& a : t.outputs) {
    const Place& p = checked_place(net, a.place);
    Tuple vals = eval_exprs(a.inscription, binding, ctx);
    if (vals.size() != p.color.size())
      throw TypeMismatch(name + ": output to " + a.place + " has " + std::to_string(vals.size()) +
                         " values, color has " + std::to_string(p.color.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = to_color(vals[i], p.color[i]);
    produced[a.place].add(vals);
  }

  Snapshot out;
  out.fresh_counter = counter;
  if (t.action) {
    const ActionDef* def = net.find_action(t.action->action);
    if (!def) throw UnknownFunction("action " + t.action->action);
    Tuple args = eval_exprs(t.action->args, binding, ctx);
    if (args.size() != def->params.size())
      throw ArityMismatch(def->name + " takes " + std::to_string(def->params.size()) +
                          " arguments, got " + std::to_string(args.size()));
    Binding sigma;
    for (std::size_t i = 0; i < args.size(); ++i) sigma[def->params[i].name] = args[i];
    out.storage = apply(instantiate(*def, sigma, &s.storage.objects), s.storage);
  } else {
    out.storage = s.storage;
  }

  out.marking = s.marking;
  for (const auto& a : t.inputs) {
    auto it = need.find(a.place);
    if (it == need.end() || checked_place(net, a.place).is_view()) continue;
    out.marking[a.place] = out.marking[a.place] - it->second;
    need.erase(it);
  }
  for (auto& [p, ms] : produced) out.marking[p] = out.marking[p] + ms;
  for (auto it = out.marking.begin(); it != out.marking.end();)
    it = it->second.empty() ? out.marking.erase(it) : std::next(it);
  refresh_views(net, out);
  return out;
}

void canonicalize(Snapshot& s) {
  std::set<std::string> all = values_of(s);
  std::vector<std::tuple<std::uint64_t, std::string, std::string>> minted;  // n, text, kind
  for (const auto& text : all)
    if (auto f = parse_fresh(text)) minted.emplace_back(f->second, text, f->first);
  std::sort(minted.begin(), minted.end());
  std::map<std::string, std::string> rename;
  for (std::size_t i = 0; i < minted.size(); ++i) {
    const auto& [n, text, kind] = minted[i];
    std::string target = kNu + ":" + kind + ":" + std::to_string(i);
    if (target != text) rename[text] = target;
  }
  s.fresh_counter = minted.size();
  if (rename.empty()) return;

  auto mapped = [&](const std::string& text) {
    auto it = rename.find(text);
    return it == rename.end() ? text : it->second;
  };
  std::function<Value(const Value&)> map_value = [&](const Value& v) -> Value {
    switch (v.kind()) {
      case Kind::String: return Value::str(mapped(v.text()));
      case Kind::Literal: return Value::literal(mapped(v.text()));
      case Kind::Iri: return Value::iri(mapped(v.text()));
      case Kind::Oid: return Value::oid(mapped(v.text()));
      case Kind::Set: {
        std::vector<Tuple> items;
        for (const auto& t : v.items()) {
          Tuple nt;
          for (const auto& x : t) nt.push_back(map_value(x));
          items.push_back(std::move(nt));
        }
        return Value::set(v.type().elements(), std::move(items));
      }
      default: return v;
    }
  };

  Marking m;
  for (const auto& [p, ms] : s.marking) {
    Multiset<Tuple> nms;
    for (const auto& [t, n] : ms.entries()) {
      Tuple nt;
      for (const auto& v : t) nt.push_back(map_value(v));
      nms.add(nt, n);
    }
    m[p] = std::move(nms);
  }
  s.marking = std::move(m);

  MetadataGraph g;
  for (const auto& t : s.storage.metadata.triples())
    g.add({{t.s.kind, mapped(t.s.text)}, {t.p.kind, mapped(t.p.text)}, {t.o.kind, mapped(t.o.text)}});
  s.storage.metadata = std::move(g);

  ObjectStore o;
  for (const auto& [addr, img] : s.storage.objects.objects()) o.put_or_update(mapped(addr), img);
  s.storage.objects = std::move(o);
}

std::string binding_to_string(const Binding& b) {
  std::string out;
  for (const auto& [k, v] : b) {
    if (!out.empty()) out += ", ";
    out += k + "=" + v.to_string();
  }
  return out;
}

std::string marking_summary(const Snapshot& s) {
  std::string out;
  for (const auto& [p, ms] : s.marking) {
    if (ms.empty()) continue;
    if (!out.empty()) out += " ";
    out += p + "=" + std::to_string(ms.size());
  }
  return out;
}

std::string trace_line(std::size_t step, const Firing& f, const Snapshot& after) {
  return "#" + std::to_string(step) + " " + f.transition + " [" + binding_to_string(f.binding) +
         "] | " + marking_summary(after);
}

}  // namespace mmnet
