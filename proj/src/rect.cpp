#include "mmnet/rect.hpp"

#include <charconv>

namespace mmnet {

std::string Rect::to_string() const {
  return "(" + std::to_string(x1) + "," + std::to_string(y1) + ").." + "(" +
         std::to_string(x2) + "," + std::to_string(y2) + ")";
}

namespace {

struct Cursor {
  std::string_view s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool eat(std::string_view lit) {
    skip_ws();
    if (s.substr(i, lit.size()) != lit) return false;
    i += lit.size();
    return true;
  }
  bool number(std::int64_t& out) {
    skip_ws();
    const char* first = s.data() + i;
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr == first) return false;
    i += static_cast<std::size_t>(ptr - first);
    return true;
  }
};

}  // namespace

std::optional<Rect> Rect::parse(std::string_view text) {
  Cursor c{text};
  Rect r;
  if (!(c.eat("(") && c.number(r.x1) && c.eat(",") && c.number(r.y1) && c.eat(")") &&
        c.eat("..") && c.eat("(") && c.number(r.x2) && c.eat(",") && c.number(r.y2) &&
        c.eat(")")))
    return std::nullopt;
  c.skip_ws();
  if (c.i != text.size()) return std::nullopt;
  if (r.x1 > r.x2 || r.y1 > r.y2) return std::nullopt;
  return r;
}

}  // namespace mmnet
