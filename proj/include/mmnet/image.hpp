#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmnet/rect.hpp"

namespace mmnet {

struct Region {
  std::string tag;
  Rect box;
  auto operator<=>(const Region&) const = default;
};

struct Decoration {
  std::string shape;
  std::string color;
  Rect box;
  auto operator<=>(const Decoration&) const = default;
};

/// Labeled-region stand-in for a decoded image. Detection, cropping and
/// subtraction are exact over the declared regions.
struct SyntheticImage {
  std::int64_t width = 0;
  std::int64_t height = 0;
  std::vector<Region> regions;
  std::vector<Decoration> decorations;
  // Origin of this image inside the image it was extracted from.
  std::optional<std::pair<std::int64_t, std::int64_t>> source_offset;

  Rect canvas() const { return {0, 0, width, height}; }
  bool within_bounds(const Rect& box) const { return canvas().contains(box); }

  auto operator<=>(const SyntheticImage&) const = default;
};

}  // namespace mmnet
