#include "mmnet/registry.hpp"

#include "mmnet/error.hpp"

namespace mmnet {

namespace {

bool all_of_kind(const TypeTuple& args, Kind k) {
  for (const auto& a : args)
    if (a.kind() != k) return false;
  return true;
}

bool is_texty(const DataType& t) { return t.kind() == Kind::String || t.kind() == Kind::Literal; }

PredicateEntry int_relation(std::string name, std::function<bool(std::int64_t, std::int64_t)> rel) {
  PredicateEntry e;
  e.name = std::move(name);
  e.arity = 2;
  e.accepts = [](const TypeTuple& a) { return all_of_kind(a, Kind::Int); };
  e.eval = [rel](const std::vector<Value>& v) { return rel(v[0].as_int(), v[1].as_int()); };
  return e;
}

PredicateEntry typed_equality(std::string name, Kind k) {
  PredicateEntry e;
  e.name = std::move(name);
  e.arity = 2;
  e.accepts = [k](const TypeTuple& a) { return all_of_kind(a, k); };
  e.eval = [](const std::vector<Value>& v) { return v[0] == v[1]; };
  return e;
}

PredicateEntry generic_equality(std::string name, bool negate) {
  PredicateEntry e;
  e.name = std::move(name);
  e.arity = 2;
  e.accepts = [](const TypeTuple& a) { return a[0] == a[1] && !a[0].is_media(); };
  e.eval = [negate](const std::vector<Value>& v) { return (v[0] == v[1]) != negate; };
  return e;
}

// Checks `set, c1..cn` against Set<T1..Tn>.
bool set_with_element(const TypeTuple& a) {
  if (a.empty() || a[0].kind() != Kind::Set) return false;
  const auto& elems = a[0].elements();
  if (a.size() != elems.size() + 1) return false;
  for (std::size_t i = 0; i < elems.size(); ++i)
    if (a[i + 1] != elems[i]) return false;
  return true;
}

Tuple one(Value v) { return Tuple{std::move(v)}; }

const SyntheticImage& image_arg(const Value& v) { return *v.as_media().image; }

Registry make_builtin() {
  Registry r;

  r.add(generic_equality("=", false));
  r.add(generic_equality("!=", true));
  r.add(typed_equality("=_s", Kind::String));
  r.add(typed_equality("=_int", Kind::Int));
  r.add(typed_equality("=_oid", Kind::Oid));
  r.add(typed_equality("=_L", Kind::Literal));
  r.add(typed_equality("=_I", Kind::Iri));
  r.add(int_relation("<_int", [](auto a, auto b) { return a < b; }));
  r.add(int_relation("<", [](auto a, auto b) { return a < b; }));
  r.add(int_relation(">", [](auto a, auto b) { return a > b; }));
  r.add(int_relation("<=", [](auto a, auto b) { return a <= b; }));
  r.add(int_relation(">=", [](auto a, auto b) { return a >= b; }));
  {
    PredicateEntry e;
    e.name = "empty";
    e.arity = 1;
    e.accepts = [](const TypeTuple& a) { return a[0].kind() == Kind::Set; };
    e.eval = [](const std::vector<Value>& v) { return v[0].items().empty(); };
    r.add(std::move(e));
  }

  r.add(FunctionEntry{
      "succ", 1,
      [](const TypeTuple& a) -> std::optional<TypeTuple> {
        if (!all_of_kind(a, Kind::Int)) return std::nullopt;
        return TypeTuple{DataType::integer()};
      },
      [](const std::vector<Value>& v, const EvalContext&) {
        return one(Value::integer(v[0].as_int() + 1));
      }});
  r.add(FunctionEntry{
      "minus", 2,
      [](const TypeTuple& a) -> std::optional<TypeTuple> {
        if (!all_of_kind(a, Kind::Int)) return std::nullopt;
        return TypeTuple{DataType::integer()};
      },
      [](const std::vector<Value>& v, const EvalContext&) {
        return one(Value::integer(v[0].as_int() - v[1].as_int()));
      }});

  r.add(FunctionEntry{
      "ins", -1,
      [](const TypeTuple& a) -> std::optional<TypeTuple> {
        if (!set_with_element(a)) return std::nullopt;
        return TypeTuple{a[0]};
      },
      [](const std::vector<Value>& v, const EvalContext&) {
        std::vector<Tuple> items = v[0].items();
        items.emplace_back(v.begin() + 1, v.end());
        return one(Value::set(v[0].type().elements(), std::move(items)));
      }});
  r.add(FunctionEntry{
      "getL", 1,
      [](const TypeTuple& a) -> std::optional<TypeTuple> {
        if (a[0].kind() != Kind::Set) return std::nullopt;
        return a[0].elements();
      },
      [](const std::vector<Value>& v, const EvalContext&) {
        const auto& items = v[0].items();
        if (items.empty()) throw EmptySetAccess("getL on an empty set");
        return items.back();
      }});
  r.add(FunctionEntry{
      "rem", -1,
      [](const TypeTuple& a) -> std::optional<TypeTuple> {
        if (!set_with_element(a)) return std::nullopt;
        return TypeTuple{a[0]};
      },
      [](const std::vector<Value>& v, const EvalContext&) {
        const auto& items = v[0].items();
        if (items.empty()) throw EmptySetAccess("rem on an empty set");
        Tuple element(v.begin() + 1, v.end());
        std::vector<Tuple> kept;
        for (const auto& it : items)
          if (it != element) kept.push_back(it);
        return one(Value::set(v[0].type().elements(), std::move(kept)));
      }});

  r.add(FunctionEntry{
      "src", 1,
      [](const TypeTuple& a) -> std::optional<TypeTuple> {
        if (a[0].kind() != Kind::Oid) return std::nullopt;
        return TypeTuple{DataType::media("jpg")};
      },
      [](const std::vector<Value>& v, const EvalContext& ctx) {
        if (!ctx.store) throw FunctionFailure("src needs an object store");
        const std::string& a = v[0].text();
        return one(Value::media("jpg", ctx.store->src(a), a));
      }});
  r.add(FunctionEntry{
      "addr", 1,
      [](const TypeTuple& a) -> std::optional<TypeTuple> {
        if (!a[0].is_media()) return std::nullopt;
        return TypeTuple{DataType::oid()};
      },
      [](const std::vector<Value>& v, const EvalContext&) {
        const auto& m = v[0].as_media();
        if (!m.address) throw FunctionFailure("addr of an object that is not stored");
        return one(Value::oid(*m.address));
      }});
  r.add(FunctionEntry{
      "countIMGs", 2,
      [](const TypeTuple& a) -> std::optional<TypeTuple> {
        if (!a[0].is_media() || !is_texty(a[1])) return std::nullopt;
        return TypeTuple{DataType::integer()};
      },
      [](const std::vector<Value>& v, const EvalContext&) {
        return one(Value::integer(count_imgs(image_arg(v[0]), v[1].text())));
      }});
  r.add(FunctionEntry{
      "detectIMG", 2,
      [](const TypeTuple& a) -> std::optional<TypeTuple> {
        if (!a[0].is_media() || !is_texty(a[1])) return std::nullopt;
        return TypeTuple{DataType::set_of({DataType::rect()})};
      },
      [](const std::vector<Value>& v, const EvalContext&) {
        std::vector<Tuple> items;
        for (const auto& box : detect_img(image_arg(v[0]), v[1].text()))
          items.push_back({Value::rect(box)});
        return one(Value::set({DataType::rect()}, std::move(items)));
      }});
  r.add(FunctionEntry{
      "extractIMG", 2,
      [](const TypeTuple& a) -> std::optional<TypeTuple> {
        if (!a[0].is_media() || a[1].kind() != Kind::Rect) return std::nullopt;
        return TypeTuple{a[0]};
      },
      [](const std::vector<Value>& v, const EvalContext&) {
        return one(Value::media(v[0].type().format(),
                                extract_img(image_arg(v[0]), v[1].as_rect())));
      }});
  r.add(FunctionEntry{
      "sub", 2,
      [](const TypeTuple& a) -> std::optional<TypeTuple> {
        if (!a[0].is_media() || !a[1].is_media()) return std::nullopt;
        return TypeTuple{a[0]};
      },
      [](const std::vector<Value>& v, const EvalContext&) {
        return one(Value::media(v[0].type().format(), sub_img(image_arg(v[0]), image_arg(v[1]))));
      }});
  r.add(FunctionEntry{
      "markIMG", 4,
      [](const TypeTuple& a) -> std::optional<TypeTuple> {
        if (!a[0].is_media() || a[1].kind() != Kind::Rect || !is_texty(a[2]) || !is_texty(a[3]))
          return std::nullopt;
        return TypeTuple{a[0]};
      },
      [](const std::vector<Value>& v, const EvalContext&) {
        return one(Value::media(v[0].type().format(),
                                mark_img(image_arg(v[0]), v[1].as_rect(), v[2].text(),
                                         v[3].text())));
      }});
  return r;
}

TypeTuple types_of(const std::vector<Value>& args) {
  TypeTuple out;
  out.reserve(args.size());
  for (const auto& a : args) out.push_back(a.type());
  return out;
}

}  // namespace

const Registry& Registry::builtin() {
  static const Registry instance = make_builtin();
  return instance;
}

const PredicateEntry& Registry::predicate(const std::string& name) const {
  auto it = predicates_.find(name);
  if (it == predicates_.end()) throw UnknownPredicate(name);
  return it->second;
}

const FunctionEntry& Registry::function(const std::string& name) const {
  auto it = functions_.find(name);
  if (it == functions_.end()) throw UnknownFunction(name);
  return it->second;
}

void Registry::check_predicate(const std::string& name, const TypeTuple& args) const {
  const auto& e = predicate(name);
  if (static_cast<int>(args.size()) != e.arity)
    throw ArityMismatch(name + " takes " + std::to_string(e.arity) + " arguments, got " +
                        std::to_string(args.size()));
  if (!e.accepts(args))
    throw TypeMismatch(name + " is not defined on (" + type_tuple_name(args) + ")");
}

TypeTuple Registry::function_result(const std::string& name, const TypeTuple& args) const {
  const auto& e = function(name);
  if (e.arity >= 0 && static_cast<int>(args.size()) != e.arity)
    throw ArityMismatch(name + " takes " + std::to_string(e.arity) + " arguments, got " +
                        std::to_string(args.size()));
  auto r = e.result(args);
  if (!r) throw TypeMismatch(name + " is not defined on (" + type_tuple_name(args) + ")");
  return *r;
}

bool Registry::eval_predicate(const std::string& name, const std::vector<Value>& args) const {
  check_predicate(name, types_of(args));
  return predicate(name).eval(args);
}

Tuple Registry::eval_function(const std::string& name, const std::vector<Value>& args,
                              const EvalContext& ctx) const {
  function_result(name, types_of(args));
  return function(name).eval(args, ctx);
}

std::vector<std::string> Registry::predicate_names() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : predicates_) out.push_back(k);
  return out;
}

std::vector<std::string> Registry::function_names() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : functions_) out.push_back(k);
  return out;
}

}  // namespace mmnet
