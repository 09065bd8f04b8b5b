#include "mmnet/action.hpp"

#include <algorithm>

#include "mmnet/error.hpp"

namespace mmnet {

namespace {

Value single(const Tuple& t, const std::string& what) {
  if (t.size() != 1)
    throw TypeMismatch(what + " evaluates to " + std::to_string(t.size()) + " values");
  return t[0];
}

Term node_term(const Value& v) {
  if (v.kind() == Kind::Iri || v.kind() == Kind::Literal) return value_to_term(v);
  return value_to_term(cast(v, DataType::literal()));
}

Triple ground_triple(const TripleTemplate& tt, const Binding& b, const EvalContext& ctx) {
  Triple t;
  t.s = node_term(single(eval_expr(tt.s, b, ctx), "triple subject"));
  Value p = single(eval_expr(tt.p, b, ctx), "triple predicate");
  if (p.kind() != Kind::Iri) throw TypeMismatch("predicate must be an IRI, got " + p.to_string());
  t.p = value_to_term(p);
  t.o = node_term(single(eval_expr(tt.o, b, ctx), "triple object"));
  return t;
}

std::string address_of(const Expr& e, const Binding& b, const EvalContext& ctx) {
  Value v = single(eval_expr(e, b, ctx), "address");
  if (v.kind() != Kind::Oid) throw TypeMismatch("address must be an oid, got " + v.to_string());
  return v.text();
}

}  // namespace

ActionInstance instantiate(const ActionDef& def, const Binding& sigma, const ObjectStore* store) {
  Binding b;
  for (const auto& p : def.params) {
    auto it = sigma.find(p.name);
    if (it == sigma.end())
      throw MissingParameter(def.name + ": no value for parameter " + p.name);
    if (!castable(it->second.type(), p.type))
      throw TypeMismatch(def.name + ": parameter " + p.name + " expects " + p.type.name() +
                         ", got " + it->second.type().name());
    b[p.name] = cast(it->second, p.type);
  }
  EvalContext ctx{store};
  ActionInstance inst;
  inst.name = def.name;
  for (const auto& tt : def.mm_minus) inst.mm_minus.insert(ground_triple(tt, b, ctx));
  for (const auto& tt : def.mm_plus) inst.mm_plus.insert(ground_triple(tt, b, ctx));
  for (const auto& e : def.mo_minus) inst.mo_minus.insert(address_of(e, b, ctx));
  for (const auto& g : def.mo_plus) {
    GroundGenerator gg;
    gg.target = address_of(g.target, b, ctx);
    gg.function = g.function;
    for (const auto& a : g.args) gg.args.push_back(substitute(a, b));
    inst.mo_plus.push_back(std::move(gg));
  }
  return inst;
}

StorageInstance apply(const ActionInstance& inst, const StorageInstance& storage) {
  // Every generator reads the storage as it was before the action.
  EvalContext ctx{&storage.objects};
  std::vector<std::pair<std::string, SyntheticImage>> writes;
  for (const auto& g : inst.mo_plus) {
    for (const auto& w : writes)
      if (w.first == g.target)
        throw AddressConflict("two generators write @" + g.target + " in " + inst.name);
    Value v = single(
        Registry::builtin().eval_function(g.function, eval_exprs(g.args, {}, ctx), ctx),
        "generator " + g.function);
    if (!v.type().is_media())
      throw TypeMismatch("generator " + g.function + " does not produce a media object");
    writes.emplace_back(g.target, *v.as_media().image);
  }

  StorageInstance out;
  out.metadata = insert(remove(storage.metadata, inst.mm_minus), inst.mm_plus);
  out.objects = storage.objects;
  for (const auto& a : inst.mo_minus) {
    bool updated = std::any_of(writes.begin(), writes.end(),
                               [&](const auto& w) { return w.first == a; }) &&
                   storage.objects.contains(a);
    if (!updated) out.objects.remove(a);
  }
  for (auto& [addr, img] : writes) out.objects.put_or_update(addr, std::move(img));
  return out;
}

std::vector<std::string> validate_action(const ActionDef& def) {
  std::vector<std::string> errors;
  TypeEnv env;
  for (const auto& p : def.params) {
    if (env.count(p.name)) errors.push_back(def.name + ": duplicate parameter " + p.name);
    if (p.type.is_media())
      errors.push_back(def.name + ": parameter " + p.name + " has media type " + p.type.name());
    env[p.name] = p.type;
  }
  auto check_node = [&](const Expr& e, const std::string& where) {
    try {
      TypeTuple t = type_of(e, env);
      if (t.size() != 1)
        errors.push_back(def.name + ": " + where + " yields " + std::to_string(t.size()) +
                         " values");
      else if (t[0].kind() != Kind::Iri && !castable(t[0], DataType::literal()))
        errors.push_back(def.name + ": " + where + " of type " + t[0].name() +
                         " is not an RDF term");
    } catch (const Error& ex) {
      errors.push_back(def.name + ": " + where + ": " + ex.what());
    }
  };
  auto check_templates = [&](const std::vector<TripleTemplate>& ts, const std::string& part) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      std::string where = part + " template " + std::to_string(i + 1);
      check_node(ts[i].s, where + " subject");
      check_node(ts[i].o, where + " object");
      try {
        TypeTuple t = type_of(ts[i].p, env);
        if (t.size() != 1 || t[0].kind() != Kind::Iri)
          errors.push_back(def.name + ": " + where + " predicate must be an IRI");
      } catch (const Error& ex) {
        errors.push_back(def.name + ": " + where + " predicate: " + ex.what());
      }
    }
  };
  check_templates(def.mm_minus, "del-mm");
  check_templates(def.mm_plus, "add-mm");
  auto check_address = [&](const Expr& e, const std::string& where) {
    try {
      TypeTuple t = type_of(e, env);
      if (t.size() != 1 || t[0].kind() != Kind::Oid)
        errors.push_back(def.name + ": " + where + " must be an oid");
    } catch (const Error& ex) {
      errors.push_back(def.name + ": " + where + ": " + ex.what());
    }
  };
  for (const auto& e : def.mo_minus) check_address(e, "del-mo address");
  for (const auto& g : def.mo_plus) {
    check_address(g.target, "add-mo target");
    try {
      TypeTuple r = Registry::builtin().function_result(g.function, types_of(g.args, env));
      if (r.size() != 1 || !r[0].is_media())
        errors.push_back(def.name + ": add-mo function " + g.function +
                         " does not produce a media object");
    } catch (const Error& ex) {
      errors.push_back(def.name + ": add-mo " + g.function + ": " + ex.what());
    }
  }
  return errors;
}

namespace {

const Expr& strip_casts(const Expr& e) {
  return e.op == Expr::Op::Cast ? strip_casts(e.args[0]) : e;
}

bool mentions(const Expr& haystack, const Expr& needle) {
  if (strip_casts(haystack) == needle) return true;
  for (const auto& a : haystack.args)
    if (mentions(a, needle)) return true;
  return false;
}

bool is_address_predicate(const Expr& p) {
  return p.op == Expr::Op::Const && p.value.kind() == Kind::Iri &&
         p.value.text() == std::string(kMmdbNamespace) + "address";
}

}  // namespace

std::vector<std::string> lint_consistency(const ActionDef& def) {
  std::vector<std::string> warnings;
  for (const auto& e : def.mo_minus) {
    const Expr& addr = strip_casts(e);
    bool covered = std::any_of(def.mm_minus.begin(), def.mm_minus.end(), [&](const auto& t) {
      return mentions(t.s, addr) || mentions(t.o, addr);
    });
    if (!covered)
      warnings.push_back(def.name + ": deletes object " + to_string(addr) +
                         " but removes no metadata mentioning it");
  }
  for (const auto& g : def.mo_plus) {
    const Expr& addr = strip_casts(g.target);
    // `a -> f(src(a), ...)` rewrites an object in place.
    bool in_place = std::any_of(g.args.begin(), g.args.end(),
                                [&](const Expr& e) { return mentions(e, addr); });
    bool covered = in_place || std::any_of(def.mm_plus.begin(), def.mm_plus.end(), [&](const auto& t) {
      return is_address_predicate(t.p) && strip_casts(t.o) == addr;
    });
    if (!covered)
      warnings.push_back(def.name + ": writes object " + to_string(addr) +
                         " without adding an mmdb:address triple for it");
  }
  return warnings;
}

}  // namespace mmnet
