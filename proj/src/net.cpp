#include "mmnet/net.hpp"

#include <algorithm>
#include <map>

#include "mmnet/error.hpp"

namespace mmnet {

const Place* MMNet::find_place(const std::string& n) const {
  for (const auto& p : places)
    if (p.name == n) return &p;
  return nullptr;
}

const Transition* MMNet::find_transition(const std::string& n) const {
  for (const auto& t : transitions)
    if (t.name == n) return &t;
  return nullptr;
}

const ActionDef* MMNet::find_action(const std::string& n) const {
  for (const auto& a : actions)
    if (a.name == n) return &a;
  return nullptr;
}

const Place& MMNet::place(const std::string& n) const {
  if (const Place* p = find_place(n)) return *p;
  throw UnknownPlace(n);
}

const Transition& MMNet::transition(const std::string& n) const {
  if (const Transition* t = find_transition(n)) return *t;
  throw UnknownTransition(n);
}

std::string ValidationError::to_string() const {
  return "[" + clause + "] " + location + ": " + message;
}

Place make_view(std::string name, TypeTuple color, std::string query_text,
                const PrefixMap& prefixes) {
  Place p;
  p.name = std::move(name);
  p.kind = PlaceKind::View;
  p.color = std::move(color);
  p.query = parse_query(query_text, prefixes);
  p.query_text = std::move(query_text);
  return p;
}

Place make_place(std::string name, TypeTuple color) {
  Place p;
  p.name = std::move(name);
  p.color = std::move(color);
  return p;
}

namespace {

void arc_vars(const std::vector<Arc>& arcs, std::set<std::string>& out) {
  for (const auto& a : arcs)
    for (const auto& e : a.inscription) collect_vars(e, out);
}

std::set<std::string> in_vars_of(const Transition& t) {
  std::set<std::string> out;
  arc_vars(t.inputs, out);
  arc_vars(t.reads, out);
  return out;
}

std::set<std::string> out_vars_of(const Transition& t) {
  std::set<std::string> out;
  arc_vars(t.outputs, out);
  if (t.action)
    for (const auto& e : t.action->args) collect_vars(e, out);
  return out;
}

bool declared(const std::vector<Param>& ps, const std::string& n) {
  return std::any_of(ps.begin(), ps.end(), [&](const Param& p) { return p.name == n; });
}

bool freshable(const DataType& t) {
  Kind k = t.kind();
  return k == Kind::String || k == Kind::Int || k == Kind::Literal || k == Kind::Iri ||
         k == Kind::Oid;
}

class Validator {
 public:
  explicit Validator(const MMNet& net) : net_(net) {}

  std::vector<ValidationError> run() {
    names();
    for (const auto& a : net_.actions)
      for (const auto& msg : validate_action(a)) add("action", "action " + a.name, msg);
    for (const auto& p : net_.places) place(p);
    for (const auto& t : net_.transitions) transition(t);
    init();
    return std::move(errors_);
  }

 private:
  void add(std::string clause, std::string location, std::string message) {
    errors_.push_back({std::move(clause), std::move(location), std::move(message)});
  }

  void names() {
    std::set<std::string> seen;
    for (const auto& p : net_.places)
      if (!seen.insert(p.name).second) add("names", "place " + p.name, "duplicate place name");
    std::set<std::string> tseen;
    for (const auto& t : net_.transitions) {
      if (seen.count(t.name))
        add("P∩T", "transition " + t.name, "name is shared with a place");
      if (!tseen.insert(t.name).second)
        add("names", "transition " + t.name, "duplicate transition name");
    }
    std::set<std::string> aseen;
    for (const auto& a : net_.actions)
      if (!aseen.insert(a.name).second) add("names", "action " + a.name, "duplicate action name");
  }

  void place(const Place& p) {
    std::string loc = "place " + p.name;
    if (p.color.empty()) add("color", loc, "empty color");
    for (const auto& c : p.color) {
      if (c.is_media()) add("color", loc, "media type " + c.name() + " cannot color a place");
      if (p.is_view() && c.kind() != Kind::Literal && c.kind() != Kind::Iri)
        add("color", loc, "view place components must be L or I, got " + c.name());
    }
    if (p.is_view()) {
      if (!p.query) {
        add("query", loc, "view place without a query");
      } else if (p.query->form == Query::Form::Ask || p.query->vars.size() != p.color.size()) {
        std::size_t arity = p.query->form == Query::Form::Ask ? 0 : p.query->vars.size();
        add("query", loc,
            "query answers have " + std::to_string(arity) + " components, color has " +
                std::to_string(p.color.size()));
      }
    } else if (p.query) {
      add("query", loc, "control place with a query");
    }
  }

  // Checks that an arc's inscription is a variable tuple matching the color and
  // records the variable types.
  void bind_arc(const Transition& t, const Arc& a, const std::string& dir, TypeEnv& env) {
    std::string loc = "arc " + (dir == "out" ? t.name + " -> " + a.place : a.place + " -> " + t.name);
    const Place* p = net_.find_place(a.place);
    if (!p) {
      add("arcs", loc, "unknown place " + a.place);
      return;
    }
    if (dir == "in" && p->is_view())
      add("view-arcs", loc, "view places connect to transitions only with read arcs");
    if (dir == "read" && !p->is_view())
      add("view-arcs", loc, "read arcs are reserved for view places");
    if (a.inscription.size() != p->color.size()) {
      add("F_in-type", loc,
          "inscription has " + std::to_string(a.inscription.size()) + " items, color " +
              type_tuple_name(p->color) + " has " + std::to_string(p->color.size()));
      return;
    }
    for (std::size_t i = 0; i < a.inscription.size(); ++i) {
      const Expr& e = a.inscription[i];
      if (e.op != Expr::Op::Var) {
        add("F_in-vars", loc, "input inscriptions hold variables only, found " + to_string(e));
        continue;
      }
      auto [it, inserted] = env.emplace(e.name, p->color[i]);
      if (!inserted && it->second != p->color[i])
        add("F_in-type", loc,
            "variable " + e.name + " is " + it->second.name() + " elsewhere but " +
                p->color[i].name() + " here");
    }
  }

  void transition(const Transition& t) {
    std::string loc = "transition " + t.name;
    TypeEnv env;
    for (const auto& a : t.inputs) bind_arc(t, a, "in", env);
    for (const auto& a : t.reads) bind_arc(t, a, "read", env);
    std::set<std::string> ins = in_vars_of(t);

    std::set<std::string> decl;
    for (const auto& f : t.fresh) {
      if (!decl.insert(f.name).second) add("fresh", loc, "variable " + f.name + " declared twice");
      if (ins.count(f.name)) add("fresh", loc, "fresh variable " + f.name + " is bound by an input");
      if (!freshable(f.type)) add("fresh", loc, "no fresh values of type " + f.type.name());
      env[f.name] = f.type;
    }
    for (const auto& x : t.external) {
      if (!decl.insert(x.name).second) add("fresh", loc, "variable " + x.name + " declared twice");
      if (ins.count(x.name))
        add("ext-input", loc, "external input " + x.name + " is bound by an input");
      if (x.type.is_media()) add("ext-input", loc, "external input " + x.name + " is media-typed");
      env[x.name] = x.type;
    }

    std::set<std::string> gvars;
    collect_vars(t.guard, gvars);
    for (const auto& v : gvars)
      if (!ins.count(v))
        add("guard-vars", loc, "guard variable " + v + " does not occur on an input arc");
    if (std::all_of(gvars.begin(), gvars.end(), [&](const auto& v) { return ins.count(v); })) {
      try {
        check_guard(t.guard, env);
      } catch (const Error& e) {
        add("guard-type", loc, e.what());
      }
    }

    // Typing is skipped for terms over unbound variables; they are reported once here.
    std::set<std::string> unbound;
    for (const auto& v : out_vars_of(t))
      if (!ins.count(v) && !declared(t.fresh, v) && !declared(t.external, v)) {
        unbound.insert(v);
        add("ext-input", loc,
            "variable " + v + " is unbound; declare it fresh or as an external input");
      }
    auto mentions_unbound = [&](const std::vector<Expr>& es) {
      std::set<std::string> vs;
      for (const auto& e : es) collect_vars(e, vs);
      return std::any_of(vs.begin(), vs.end(), [&](const auto& v) { return unbound.count(v); });
    };

    for (const auto& a : t.outputs) {
      std::string aloc = "arc " + t.name + " -> " + a.place;
      const Place* p = net_.find_place(a.place);
      if (!p) {
        add("arcs", aloc, "unknown place " + a.place);
        continue;
      }
      if (p->is_view()) {
        add("view-arcs", aloc, "output arc into a view place");
        continue;
      }
      if (mentions_unbound(a.inscription)) continue;
      try {
        TypeTuple got = types_of(a.inscription, env);
        if (got != p->color)
          add("F_out-type", aloc,
              "inscription type " + type_tuple_name(got) + " differs from color " +
                  type_tuple_name(p->color));
      } catch (const Error& e) {
        add("F_out-type", aloc, e.what());
      }
    }

    if (t.action) {
      const ActionDef* def = net_.find_action(t.action->action);
      if (!def) {
        add("act", loc, "unknown action " + t.action->action);
      } else if (!mentions_unbound(t.action->args)) {
        try {
          TypeTuple got = types_of(t.action->args, env);
          if (got.size() != def->params.size()) {
            add("act", loc,
                def->name + " takes " + std::to_string(def->params.size()) + " arguments, got " +
                    std::to_string(got.size()));
          } else {
            for (std::size_t i = 0; i < got.size(); ++i)
              if (!castable(got[i], def->params[i].type))
                add("act", loc,
                    "argument " + std::to_string(i + 1) + " of " + def->name + " is " +
                        got[i].name() + ", parameter " + def->params[i].name + " is " +
                        def->params[i].type.name());
          }
        } catch (const Error& e) {
          add("act", loc, e.what());
        }
      }
    }
  }

  void init() {
    for (const auto& tok : net_.init.tokens) {
      const Place* p = net_.find_place(tok.place);
      std::string loc = "init token in " + tok.place;
      if (!p) {
        add("init", loc, "unknown place");
        continue;
      }
      if (p->is_view()) {
        add("init", loc, "view place markings are derived from their query");
        continue;
      }
      TypeTuple got;
      for (const auto& v : tok.tuple) got.push_back(v.type());
      if (got != p->color)
        add("init", loc, "token type " + type_tuple_name(got) + " differs from color " +
                             type_tuple_name(p->color));
    }
  }

  const MMNet& net_;
  std::vector<ValidationError> errors_;
};

}  // namespace

std::vector<ValidationError> validate(const MMNet& net) { return Validator(net).run(); }

std::set<std::string> in_vars(const MMNet& net, const std::string& t) {
  return in_vars_of(net.transition(t));
}

std::set<std::string> out_vars(const MMNet& net, const std::string& t) {
  return out_vars_of(net.transition(t));
}

std::set<std::string> fresh_out_vars(const MMNet& net, const std::string& t) {
  const Transition& tr = net.transition(t);
  std::set<std::string> out;
  for (const auto& v : out_vars_of(tr))
    if (declared(tr.fresh, v)) out.insert(v);
  return out;
}

std::set<std::string> external_input_vars(const MMNet& net, const std::string& t) {
  const Transition& tr = net.transition(t);
  std::set<std::string> ins = in_vars_of(tr);
  std::set<std::string> out;
  for (const auto& v : out_vars_of(tr))
    if (!ins.count(v) && !declared(tr.fresh, v)) out.insert(v);
  return out;
}

TypeEnv variable_types(const MMNet& net, const Transition& t) {
  TypeEnv env;
  auto visit = [&](const std::vector<Arc>& arcs) {
    for (const auto& a : arcs) {
      const Place* p = net.find_place(a.place);
      if (!p || p->color.size() != a.inscription.size()) continue;
      for (std::size_t i = 0; i < a.inscription.size(); ++i)
        if (a.inscription[i].op == Expr::Op::Var) env.emplace(a.inscription[i].name, p->color[i]);
    }
  };
  visit(t.inputs);
  visit(t.reads);
  for (const auto& f : t.fresh) env.emplace(f.name, f.type);
  for (const auto& x : t.external) env.emplace(x.name, x.type);
  return env;
}

}  // namespace mmnet
