#include "mmnet/types.hpp"

#include <algorithm>
#include <charconv>

#include "mmnet/error.hpp"
#include "mmnet/lexer.hpp"

namespace mmnet {

DataType DataType::set_of(std::vector<DataType> elements) {
  DataType t(Kind::Set);
  t.elements_ = std::move(elements);
  return t;
}

DataType DataType::media(std::string format) {
  DataType t(Kind::Media);
  t.format_ = std::move(format);
  return t;
}

std::string DataType::name() const {
  switch (kind_) {
    case Kind::String: return "str";
    case Kind::Int: return "int";
    case Kind::Literal: return "L";
    case Kind::Iri: return "I";
    case Kind::Oid: return "oid";
    case Kind::Rect: return "rect";
    case Kind::Set: return "Set<" + type_tuple_name(elements_) + ">";
    case Kind::Media: return format_;
  }
  return "?";
}

std::strong_ordering operator<=>(const DataType& a, const DataType& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (auto c = a.format_ <=> b.format_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.elements_.begin(), a.elements_.end(),
                                                b.elements_.begin(), b.elements_.end());
}

namespace {

std::optional<DataType> parse_type_at(std::string_view s, std::size_t& i,
                                      const std::set<std::string>& media);

std::optional<TypeTuple> parse_type_list(std::string_view s, std::size_t& i,
                                         const std::set<std::string>& media) {
  TypeTuple out;
  while (true) {
    auto t = parse_type_at(s, i, media);
    if (!t) return std::nullopt;
    out.push_back(*t);
    while (i < s.size() && s[i] == ' ') ++i;
    if (i < s.size() && (s[i] == '*' || s[i] == ',')) {
      ++i;
      continue;
    }
    return out;
  }
}

std::optional<DataType> parse_type_at(std::string_view s, std::size_t& i,
                                      const std::set<std::string>& media) {
  while (i < s.size() && s[i] == ' ') ++i;
  std::size_t start = i;
  while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
  std::string word(s.substr(start, i - start));
  if (word == "str") return DataType::str();
  if (word == "int") return DataType::integer();
  if (word == "L") return DataType::literal();
  if (word == "I") return DataType::iri();
  if (word == "oid") return DataType::oid();
  if (word == "rect") return DataType::rect();
  if (word == "Set") {
    while (i < s.size() && s[i] == ' ') ++i;
    if (i >= s.size() || s[i] != '<') return std::nullopt;
    ++i;
    auto elems = parse_type_list(s, i, media);
    if (!elems) return std::nullopt;
    while (i < s.size() && s[i] == ' ') ++i;
    if (i >= s.size() || s[i] != '>') return std::nullopt;
    ++i;
    for (const auto& e : *elems)
      if (e.is_media()) return std::nullopt;
    return DataType::set_of(std::move(*elems));
  }
  if (!word.empty() && media.count(word)) return DataType::media(word);
  return std::nullopt;
}

}  // namespace

std::optional<DataType> DataType::parse(std::string_view text,
                                        const std::set<std::string>& media) {
  std::size_t i = 0;
  auto t = parse_type_at(text, i, media);
  while (i < text.size() && text[i] == ' ') ++i;
  if (!t || i != text.size()) return std::nullopt;
  return t;
}

std::string type_tuple_name(const TypeTuple& types) {
  std::string out;
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (i) out += "*";
    out += types[i].name();
  }
  return out;
}

Value Value::str(std::string text) {
  Value v;
  v.type_ = DataType::str();
  v.payload_ = std::move(text);
  return v;
}

Value Value::integer(std::int64_t n) {
  Value v;
  v.type_ = DataType::integer();
  v.payload_ = n;
  return v;
}

Value Value::literal(std::string text) {
  Value v;
  v.type_ = DataType::literal();
  v.payload_ = std::move(text);
  return v;
}

Value Value::iri(std::string text) {
  Value v;
  v.type_ = DataType::iri();
  v.payload_ = std::move(text);
  return v;
}

Value Value::oid(std::string address) {
  Value v;
  v.type_ = DataType::oid();
  v.payload_ = std::move(address);
  return v;
}

Value Value::rect(const Rect& r) {
  if (r.x1 > r.x2 || r.y1 > r.y2) throw LiteralSyntax("inverted rectangle " + r.to_string());
  Value v;
  v.type_ = DataType::rect();
  v.payload_ = r;
  return v;
}

Value Value::set(std::vector<DataType> element_types, std::vector<Tuple> items) {
  std::vector<Tuple> unique;
  unique.reserve(items.size());
  for (auto& item : items) {
    if (item.size() != element_types.size())
      throw TypeMismatch("set element arity " + std::to_string(item.size()) + ", expected " +
                         std::to_string(element_types.size()));
    for (std::size_t i = 0; i < item.size(); ++i)
      if (item[i].type() != element_types[i])
        throw TypeMismatch("set element of type " + item[i].type().name() + ", expected " +
                           element_types[i].name());
    if (std::find(unique.begin(), unique.end(), item) == unique.end())
      unique.push_back(std::move(item));
  }
  Value v;
  v.type_ = DataType::set_of(std::move(element_types));
  v.payload_ = std::make_shared<const std::vector<Tuple>>(std::move(unique));
  return v;
}

Value Value::media(std::string format, SyntheticImage image,
                   std::optional<std::string> address) {
  Value v;
  v.type_ = DataType::media(std::move(format));
  v.payload_ = MediaRef{std::make_shared<const SyntheticImage>(std::move(image)),
                        std::move(address)};
  return v;
}

const std::string& Value::text() const {
  if (auto* s = std::get_if<std::string>(&payload_)) return *s;
  throw TypeMismatch("value of type " + type_.name() + " has no text payload");
}

std::int64_t Value::as_int() const {
  if (auto* n = std::get_if<std::int64_t>(&payload_)) return *n;
  throw TypeMismatch("expected int, got " + type_.name());
}

const Rect& Value::as_rect() const {
  if (auto* r = std::get_if<Rect>(&payload_)) return *r;
  throw TypeMismatch("expected rect, got " + type_.name());
}

const std::vector<Tuple>& Value::items() const {
  if (auto* s = std::get_if<SetItems>(&payload_)) return **s;
  throw TypeMismatch("expected a set, got " + type_.name());
}

const MediaRef& Value::as_media() const {
  if (auto* m = std::get_if<MediaRef>(&payload_)) return *m;
  throw TypeMismatch("expected a media value, got " + type_.name());
}

namespace {

std::string set_item_string(const Tuple& t) {
  if (t.size() == 1) return t[0].to_string();
  return tuple_to_string(t);
}

}  // namespace

std::string Value::to_string() const {
  switch (kind()) {
    case Kind::String: return quote(text());
    case Kind::Int: return std::to_string(as_int());
    case Kind::Literal: return quote(text()) + "^^L";
    case Kind::Iri: return "<" + text() + ">";
    case Kind::Oid: return "@" + text();
    case Kind::Rect: return as_rect().to_string();
    case Kind::Set: {
      std::string out = "{";
      const auto& its = items();
      for (std::size_t i = 0; i < its.size(); ++i) {
        if (i) out += ", ";
        out += set_item_string(its[i]);
      }
      return out + "}";
    }
    case Kind::Media: {
      const auto& m = as_media();
      if (m.address) return "<" + type_.format() + " @" + *m.address + ">";
      return "<" + type_.format() + " " + std::to_string(m.image->width) + "x" +
             std::to_string(m.image->height) + ">";
    }
  }
  return "?";
}

std::string Value::plain_text() const {
  switch (kind()) {
    case Kind::String:
    case Kind::Literal:
    case Kind::Iri:
    case Kind::Oid:
      return text();
    case Kind::Int: return std::to_string(as_int());
    case Kind::Rect: return as_rect().to_string();
    case Kind::Set: return to_string();
    case Kind::Media: return as_media().address.value_or("");
  }
  return "";
}

int Value::compare(const Value& a, const Value& b) {
  if (auto c = a.type_ <=> b.type_; c != 0) return c < 0 ? -1 : 1;
  auto sign = [](auto c) { return c < 0 ? -1 : c > 0 ? 1 : 0; };
  // Default-constructed values carry no payload and sort first.
  bool ea = std::holds_alternative<std::monostate>(a.payload_);
  bool eb = std::holds_alternative<std::monostate>(b.payload_);
  if (ea || eb) return ea == eb ? 0 : ea ? -1 : 1;
  switch (a.kind()) {
    case Kind::String:
    case Kind::Literal:
    case Kind::Iri:
    case Kind::Oid:
      return sign(a.text().compare(b.text()));
    case Kind::Int: return sign(a.as_int() <=> b.as_int());
    case Kind::Rect: return sign(a.as_rect() <=> b.as_rect());
    case Kind::Set: {
      const auto& x = a.items();
      const auto& y = b.items();
      if (&x == &y) return 0;
      return sign(std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(),
                                                         y.end()));
    }
    case Kind::Media: {
      const auto& x = a.as_media();
      const auto& y = b.as_media();
      if (x.address && y.address) return sign(x.address->compare(*y.address));
      if (x.address) return -1;
      if (y.address) return 1;
      return sign(*x.image <=> *y.image);
    }
  }
  return 0;
}

std::string tuple_to_string(const Tuple& t) {
  return "[" + values_to_string(t) + "]";
}

std::string values_to_string(const std::vector<Value>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += values[i].to_string();
  }
  return out;
}

namespace {

bool text_kind_pair(Kind a, Kind b) {
  // str <-> I is not among the literal conversions but is needed to compare
  // IRI-valued view columns with string tokens.
  return (a == Kind::String && b == Kind::Iri) || (a == Kind::Iri && b == Kind::String);
}

}  // namespace

bool castable(const DataType& from, const DataType& to) {
  if (from == to) return true;
  Kind f = from.kind();
  Kind t = to.kind();
  auto lit_side = [](Kind k) {
    return k == Kind::String || k == Kind::Oid || k == Kind::Int || k == Kind::Rect ||
           k == Kind::Iri;
  };
  if (f == Kind::Literal && lit_side(t)) return true;
  if (t == Kind::Literal && lit_side(f)) return true;
  return text_kind_pair(f, t);
}

Value cast(const Value& v, const DataType& target) {
  if (v.type() == target) return v;
  if (!castable(v.type(), target))
    throw NoCastRule("no conversion from " + v.type().name() + " to " + target.name());
  if (target.kind() == Kind::Literal) return Value::literal(v.plain_text());
  const std::string& s = v.text();
  switch (target.kind()) {
    case Kind::String: return Value::str(s);
    case Kind::Iri:
      if (s.empty()) throw CastFailure("empty text is not an IRI");
      return Value::iri(s);
    case Kind::Oid:
      if (s.empty()) throw CastFailure("empty text is not an address");
      return Value::oid(s);
    case Kind::Int: {
      std::int64_t n = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
      if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw CastFailure("\"" + s + "\" is not an integer");
      return Value::integer(n);
    }
    case Kind::Rect: {
      auto r = Rect::parse(s);
      if (!r) throw CastFailure("\"" + s + "\" is not a rectangle");
      return Value::rect(*r);
    }
    default:
      break;
  }
  throw NoCastRule("no conversion from " + v.type().name() + " to " + target.name());
}

namespace {

[[noreturn]] void literal_error(const Token& tok, const std::string& message) {
  throw LiteralSyntax(message + " at " + std::to_string(tok.line) + ":" +
                      std::to_string(tok.column));
}

Rect parse_rect_tokens(TokenStream& ts) {
  auto number = [&]() {
    const Token& t = ts.peek();
    if (t.kind != TokenKind::Int) literal_error(t, "expected a coordinate");
    return ts.next().number;
  };
  const Token start = ts.peek();
  Rect r;
  ts.expect_punct("(");
  r.x1 = number();
  ts.expect_punct(",");
  r.y1 = number();
  ts.expect_punct(")");
  ts.expect_punct("..");
  ts.expect_punct("(");
  r.x2 = number();
  ts.expect_punct(",");
  r.y2 = number();
  ts.expect_punct(")");
  if (r.x1 > r.x2 || r.y1 > r.y2) literal_error(start, "inverted rectangle " + r.to_string());
  return r;
}

Value text_as(const Token& tok, std::string text, const DataType& expected) {
  switch (expected.kind()) {
    case Kind::String: return Value::str(std::move(text));
    case Kind::Literal: return Value::literal(std::move(text));
    case Kind::Iri: return Value::iri(std::move(text));
    case Kind::Rect: {
      auto r = Rect::parse(text);
      if (!r) literal_error(tok, "\"" + text + "\" is not a rectangle");
      return Value::rect(*r);
    }
    default:
      literal_error(tok, "a quoted string is not a " + expected.name());
  }
}

}  // namespace

Value parse_value(TokenStream& ts, const DataType& expected, const PrefixMap& prefixes) {
  const Token tok = ts.peek();
  Value v;
  switch (tok.kind) {
    case TokenKind::String: {
      ts.next();
      if (ts.accept_punct("^^")) {
        const Token& tag = ts.peek();
        std::string name = ts.expect_ident();
        if (name == "L")
          v = Value::literal(tok.text);
        else if (name == "I")
          v = Value::iri(tok.text);
        else
          literal_error(tag, "unknown literal tag " + name);
      } else {
        v = text_as(tok, tok.text, expected);
      }
      break;
    }
    case TokenKind::Int:
      ts.next();
      if (expected.kind() == Kind::Literal)
        v = Value::literal(tok.text);
      else
        v = Value::integer(tok.number);
      break;
    case TokenKind::Oid:
      ts.next();
      v = Value::oid(tok.text);
      break;
    case TokenKind::Iri:
      ts.next();
      v = Value::iri(tok.text);
      break;
    case TokenKind::PName: {
      ts.next();
      auto full = prefixes.expand(tok.text);
      if (!full) literal_error(tok, "undeclared prefix in " + tok.text);
      v = Value::iri(*full);
      break;
    }
    case TokenKind::Punct:
      if (tok.text == "(") {
        v = Value::rect(parse_rect_tokens(ts));
        break;
      }
      if (tok.text == "{") {
        if (expected.kind() != Kind::Set) literal_error(tok, "a set is not a " + expected.name());
        ts.next();
        std::vector<Tuple> items;
        if (!ts.accept_punct("}")) {
          do {
            items.push_back(parse_tuple(ts, expected.elements(), prefixes));
          } while (ts.accept_punct(","));
          ts.expect_punct("}");
        }
        v = Value::set(expected.elements(), std::move(items));
        break;
      }
      literal_error(tok, "unexpected '" + tok.text + "' in value");
    default:
      literal_error(tok, "expected a value");
  }
  if (v.type() != expected)
    literal_error(tok, "value " + v.to_string() + " is not a " + expected.name());
  return v;
}

Value parse_value(std::string_view text, const DataType& expected, const PrefixMap& prefixes) {
  try {
    TokenStream ts(tokenize(text));
    Value v = parse_value(ts, expected, prefixes);
    if (!ts.at_end()) literal_error(ts.peek(), "trailing input after value");
    return v;
  } catch (const SyntaxError& e) {
    throw LiteralSyntax(e.what());
  }
}

Tuple parse_tuple(TokenStream& ts, const TypeTuple& expected, const PrefixMap& prefixes) {
  Tuple out;
  if (!ts.is_punct("[")) {
    if (expected.size() != 1) literal_error(ts.peek(), "expected '[' opening a tuple");
    out.push_back(parse_value(ts, expected[0], prefixes));
    return out;
  }
  const Token open = ts.next();
  if (!ts.is_punct("]")) {
    do {
      if (out.size() >= expected.size())
        literal_error(open, "tuple has more than " + std::to_string(expected.size()) +
                                " components");
      out.push_back(parse_value(ts, expected[out.size()], prefixes));
    } while (ts.accept_punct(","));
  }
  ts.expect_punct("]");
  if (out.size() != expected.size())
    literal_error(open, "tuple has " + std::to_string(out.size()) + " components, expected " +
                            std::to_string(expected.size()));
  return out;
}

}  // namespace mmnet
