#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mmnet/image.hpp"
#include "mmnet/rect.hpp"

namespace mmnet {

/// Address-keyed multimedia objects.
class ObjectStore {
 public:
  using Map = std::map<std::string, SyntheticImage>;

  /// The object at `address`; throws DanglingAddress when absent.
  const SyntheticImage& src(const std::string& address) const;
  bool contains(const std::string& address) const { return objects_.count(address) > 0; }

  void put_or_update(const std::string& address, SyntheticImage image);
  /// Removing an absent address is a no-op.
  void remove(const std::string& address);

  std::size_t size() const { return objects_.size(); }
  const Map& objects() const { return objects_; }

  friend bool operator==(const ObjectStore&, const ObjectStore&) = default;

 private:
  Map objects_;
};

ObjectStore put_or_update(ObjectStore store, const std::string& address, SyntheticImage image);
ObjectStore remove(ObjectStore store, const std::string& address);

// Image functions over the region model.

std::int64_t count_imgs(const SyntheticImage& img, std::string_view feature);
/// Boxes of the regions tagged `feature`, in region order without repeats.
std::vector<Rect> detect_img(const SyntheticImage& img, std::string_view feature);
/// Crops to `seg`; throws OutOfBounds when `seg` leaves the canvas.
SyntheticImage extract_img(const SyntheticImage& img, const Rect& seg);
SyntheticImage sub_img(const SyntheticImage& img, const SyntheticImage& part);
/// Throws OutOfBounds, UnknownShape or UnknownColor.
SyntheticImage mark_img(const SyntheticImage& img, const Rect& seg, std::string_view shape,
                        std::string_view color);

const std::set<std::string>& known_shapes();
const std::set<std::string>& known_colors();

/// Checks the image invariants (boxes inside the canvas); returns a message
/// naming the first violation, or an empty string.
std::string check_image(const SyntheticImage& img);

// Structured-text form: {addr: {width, height, regions:[{tag,box}],
// decorations:[{shape,color,box}], sourceOffset}}.
std::string image_to_json(const SyntheticImage& img);
SyntheticImage image_from_json(std::string_view text);
std::string store_to_json(const ObjectStore& store);
ObjectStore store_from_json(std::string_view text);

}  // namespace mmnet
