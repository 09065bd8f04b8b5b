#include "mmnet/object_store.hpp"

#include <algorithm>

#include "json.hpp"

#include "mmnet/error.hpp"

namespace mmnet {

using nlohmann::json;

const SyntheticImage& ObjectStore::src(const std::string& address) const {
  auto it = objects_.find(address);
  if (it == objects_.end()) throw DanglingAddress("no object at @" + address);
  return it->second;
}

void ObjectStore::put_or_update(const std::string& address, SyntheticImage image) {
  objects_[address] = std::move(image);
}

void ObjectStore::remove(const std::string& address) { objects_.erase(address); }

ObjectStore put_or_update(ObjectStore store, const std::string& address, SyntheticImage image) {
  store.put_or_update(address, std::move(image));
  return store;
}

ObjectStore remove(ObjectStore store, const std::string& address) {
  store.remove(address);
  return store;
}

std::int64_t count_imgs(const SyntheticImage& img, std::string_view feature) {
  return std::count_if(img.regions.begin(), img.regions.end(),
                       [&](const Region& r) { return r.tag == feature; });
}

std::vector<Rect> detect_img(const SyntheticImage& img, std::string_view feature) {
  std::vector<Rect> out;
  for (const auto& r : img.regions)
    if (r.tag == feature && std::find(out.begin(), out.end(), r.box) == out.end())
      out.push_back(r.box);
  return out;
}

SyntheticImage extract_img(const SyntheticImage& img, const Rect& seg) {
  if (!img.within_bounds(seg))
    throw OutOfBounds("segment " + seg.to_string() + " outside " + std::to_string(img.width) +
                      "x" + std::to_string(img.height) + " canvas");
  if (seg == img.canvas()) return img;
  SyntheticImage out;
  out.width = seg.width();
  out.height = seg.height();
  for (const auto& r : img.regions)
    if (seg.contains(r.box)) out.regions.push_back({r.tag, r.box.translated(-seg.x1, -seg.y1)});
  for (const auto& d : img.decorations)
    if (seg.contains(d.box))
      out.decorations.push_back({d.shape, d.color, d.box.translated(-seg.x1, -seg.y1)});
  out.source_offset = std::make_pair(seg.x1, seg.y1);
  return out;
}

SyntheticImage sub_img(const SyntheticImage& img, const SyntheticImage& part) {
  auto [dx, dy] = part.source_offset.value_or(std::make_pair<std::int64_t, std::int64_t>(0, 0));
  std::vector<Region> removed;
  for (const auto& r : part.regions) removed.push_back({r.tag, r.box.translated(dx, dy)});
  SyntheticImage out = img;
  out.regions.clear();
  for (const auto& r : img.regions)
    if (std::find(removed.begin(), removed.end(), r) == removed.end()) out.regions.push_back(r);
  // Decorations inside the cut-out area go with it.
  Rect area = part.canvas().translated(dx, dy);
  if (part.width > 0 && part.height > 0) {
    out.decorations.clear();
    for (const auto& d : img.decorations)
      if (!area.contains(d.box)) out.decorations.push_back(d);
  }
  return out;
}

const std::set<std::string>& known_shapes() {
  static const std::set<std::string> shapes{"oval", "rect"};
  return shapes;
}

const std::set<std::string>& known_colors() {
  static const std::set<std::string> colors{"black", "blue",   "green", "orange",
                                            "purple", "red", "white", "yellow"};
  return colors;
}

SyntheticImage mark_img(const SyntheticImage& img, const Rect& seg, std::string_view shape,
                        std::string_view color) {
  if (!img.within_bounds(seg))
    throw OutOfBounds("segment " + seg.to_string() + " outside the canvas");
  if (!known_shapes().count(std::string(shape)))
    throw UnknownShape("\"" + std::string(shape) + "\"");
  if (!known_colors().count(std::string(color)))
    throw UnknownColor("\"" + std::string(color) + "\"");
  SyntheticImage out = img;
  out.decorations.push_back({std::string(shape), std::string(color), seg});
  return out;
}

std::string check_image(const SyntheticImage& img) {
  if (img.width < 0 || img.height < 0) return "negative canvas size";
  for (const auto& r : img.regions)
    if (!img.within_bounds(r.box)) return "region " + r.box.to_string() + " outside the canvas";
  for (const auto& d : img.decorations)
    if (!img.within_bounds(d.box))
      return "decoration " + d.box.to_string() + " outside the canvas";
  return {};
}

namespace {

json image_json(const SyntheticImage& img) {
  json j;
  j["width"] = img.width;
  j["height"] = img.height;
  j["regions"] = json::array();
  for (const auto& r : img.regions)
    j["regions"].push_back({{"tag", r.tag}, {"box", r.box.to_string()}});
  j["decorations"] = json::array();
  for (const auto& d : img.decorations)
    j["decorations"].push_back(
        {{"shape", d.shape}, {"color", d.color}, {"box", d.box.to_string()}});
  if (img.source_offset)
    j["sourceOffset"] = json::array({img.source_offset->first, img.source_offset->second});
  return j;
}

Rect box_of(const json& j) {
  auto r = Rect::parse(j.get<std::string>());
  if (!r) throw LiteralSyntax("bad box " + j.dump());
  return *r;
}

SyntheticImage image_of(const json& j) {
  SyntheticImage img;
  img.width = j.at("width").get<std::int64_t>();
  img.height = j.at("height").get<std::int64_t>();
  if (j.contains("regions"))
    for (const auto& r : j["regions"])
      img.regions.push_back({r.at("tag").get<std::string>(), box_of(r.at("box"))});
  if (j.contains("decorations"))
    for (const auto& d : j["decorations"])
      img.decorations.push_back(
          {d.at("shape").get<std::string>(), d.at("color").get<std::string>(), box_of(d.at("box"))});
  if (j.contains("sourceOffset") && !j["sourceOffset"].is_null()) {
    const auto& o = j["sourceOffset"];
    img.source_offset = std::make_pair(o.at(0).get<std::int64_t>(), o.at(1).get<std::int64_t>());
  }
  std::string problem = check_image(img);
  if (!problem.empty()) throw OutOfBounds(problem);
  return img;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw LiteralSyntax(std::string("object document: ") + e.what());
  }
}

}  // namespace

std::string image_to_json(const SyntheticImage& img) { return image_json(img).dump(); }

SyntheticImage image_from_json(std::string_view text) {
  return guarded([&] { return image_of(json::parse(text)); });
}

std::string store_to_json(const ObjectStore& store) {
  json j = json::object();
  for (const auto& [addr, img] : store.objects()) j[addr] = image_json(img);
  return j.dump(2);
}

ObjectStore store_from_json(std::string_view text) {
  return guarded([&] {
    json j = json::parse(text);
    if (!j.is_object()) throw LiteralSyntax("object store document must be a JSON object");
    ObjectStore store;
    for (const auto& [addr, img] : j.items()) store.put_or_update(addr, image_of(img));
    return store;
  });
}

}  // namespace mmnet
