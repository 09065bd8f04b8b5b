#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mmnet/image.hpp"
#include "mmnet/prefixes.hpp"
#include "mmnet/rect.hpp"

namespace mmnet {

enum class Kind { String, Int, Literal, Iri, Oid, Rect, Set, Media };

class DataType {
 public:
  DataType() = default;

  static DataType str() { return DataType(Kind::String); }
  static DataType integer() { return DataType(Kind::Int); }
  static DataType literal() { return DataType(Kind::Literal); }
  static DataType iri() { return DataType(Kind::Iri); }
  static DataType oid() { return DataType(Kind::Oid); }
  static DataType rect() { return DataType(Kind::Rect); }
  static DataType set_of(std::vector<DataType> elements);
  static DataType media(std::string format);

  Kind kind() const { return kind_; }
  bool is_media() const { return kind_ == Kind::Media; }
  const std::vector<DataType>& elements() const { return elements_; }
  const std::string& format() const { return format_; }

  /// Surface name: str, int, L, I, oid, rect, Set<str*oid>, or the media format.
  std::string name() const;

  /// Parses a surface name. Unknown bare names are media formats only when
  /// listed in `media`.
  static std::optional<DataType> parse(std::string_view text,
                                       const std::set<std::string>& media = {"jpg"});

  friend bool operator==(const DataType&, const DataType&) = default;
  friend std::strong_ordering operator<=>(const DataType& a, const DataType& b);

 private:
  explicit DataType(Kind k) : kind_(k) {}

  Kind kind_ = Kind::String;
  std::vector<DataType> elements_;
  std::string format_;
};

using TypeTuple = std::vector<DataType>;
std::string type_tuple_name(const TypeTuple& types);

class Value;
using Tuple = std::vector<Value>;

struct MediaRef {
  std::shared_ptr<const SyntheticImage> image;
  std::optional<std::string> address;
};

/// Typed constant. Cheap to copy: sets and media share their payload.
class Value {
 public:
  Value() = default;

  static Value str(std::string text);
  static Value integer(std::int64_t n);
  static Value literal(std::string text);
  static Value iri(std::string text);
  static Value oid(std::string address);
  static Value rect(const Rect& r);
  /// Builds a set, dropping duplicate tuples while keeping first-insertion order.
  static Value set(std::vector<DataType> element_types, std::vector<Tuple> items);
  static Value media(std::string format, SyntheticImage image,
                     std::optional<std::string> address = std::nullopt);

  const DataType& type() const { return type_; }
  Kind kind() const { return type_.kind(); }

  /// Text payload of str, L, I and oid values.
  const std::string& text() const;
  std::int64_t as_int() const;
  const Rect& as_rect() const;
  const std::vector<Tuple>& items() const;
  const MediaRef& as_media() const;

  /// Textual literal form as accepted by parse_value.
  std::string to_string() const;

  /// Text used for fresh-name collision checks and for casts to L.
  std::string plain_text() const;

  friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    int c = compare(a, b);
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

 private:
  static int compare(const Value& a, const Value& b);

  using SetItems = std::shared_ptr<const std::vector<Tuple>>;
  DataType type_;
  std::variant<std::monostate, std::string, std::int64_t, Rect, SetItems, MediaRef> payload_;
};

std::string tuple_to_string(const Tuple& t);
std::string values_to_string(const std::vector<Value>& values);

/// Whether `cast` has a rule from `from` to `to`.
bool castable(const DataType& from, const DataType& to);

/// The `::` function. Throws NoCastRule when no rule exists and CastFailure
/// when the payload does not convert (for example L "abc" to int).
Value cast(const Value& v, const DataType& target);

class TokenStream;

/// Reads one value literal from a token stream, shaped by `expected`.
Value parse_value(TokenStream& ts, const DataType& expected,
                  const PrefixMap& prefixes = PrefixMap());
Value parse_value(std::string_view text, const DataType& expected,
                  const PrefixMap& prefixes = PrefixMap());
/// Reads `[v1, v2, ...]`; a bare value is accepted for 1-tuples.
Tuple parse_tuple(TokenStream& ts, const TypeTuple& expected,
                  const PrefixMap& prefixes = PrefixMap());

}  // namespace mmnet
