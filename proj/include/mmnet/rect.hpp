#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mmnet {

/// Axis-aligned rectangle `(x1,y1)..(x2,y2)` with x1 <= x2 and y1 <= y2.
struct Rect {
  std::int64_t x1 = 0;
  std::int64_t y1 = 0;
  std::int64_t x2 = 0;
  std::int64_t y2 = 0;

  std::int64_t width() const { return x2 - x1; }
  std::int64_t height() const { return y2 - y1; }

  bool contains(const Rect& other) const {
    return x1 <= other.x1 && y1 <= other.y1 && other.x2 <= x2 && other.y2 <= y2;
  }

  Rect translated(std::int64_t dx, std::int64_t dy) const {
    return {x1 + dx, y1 + dy, x2 + dx, y2 + dy};
  }

  std::string to_string() const;

  /// Parses the textual form; nullopt on malformed text or inverted corners.
  static std::optional<Rect> parse(std::string_view text);

  auto operator<=>(const Rect&) const = default;
};

}  // namespace mmnet
