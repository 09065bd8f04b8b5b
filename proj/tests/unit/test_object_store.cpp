#include "doctest.h"
#include "gen.hpp"
#include "mmnet/error.hpp"
#include "mmnet/object_store.hpp"
#include "seed.hpp"

using namespace mmnet;

namespace {

SyntheticImage sample() {
  SyntheticImage img;
  img.width = 100;
  img.height = 100;
  img.regions = {{"human face", {10, 10, 20, 20}},
                 {"human face", {30, 30, 40, 40}},
                 {"product", {60, 60, 90, 90}}};
  return img;
}

SyntheticImage blank(std::int64_t w = 100, std::int64_t h = 100) {
  SyntheticImage img;
  img.width = w;
  img.height = h;
  return img;
}

bool overlaps_inside(const SyntheticImage& img, const Rect& seg) {
  for (const auto& r : img.regions)
    if (seg.contains(r.box)) return true;
  return false;
}

}  // namespace

TEST_SUITE("object_store") {
  TEST_CASE("src, put and remove") {
    ObjectStore st;
    CHECK_THROWS_AS(st.src("a1"), DanglingAddress);
    st = put_or_update(st, "a1", sample());
    CHECK(st.src("a1") == sample());
    CHECK(st.size() == 1);
    ObjectStore st2 = put_or_update(st, "a2", blank());
    CHECK(st2.size() == 2);
    CHECK(st2.src("a2") == blank());
    ObjectStore st3 = put_or_update(st2, "a2", sample());
    CHECK(st3.size() == 2);
    CHECK(st3.src("a2") == sample());
    CHECK(remove(st3, "a2").size() == 1);
    CHECK(remove(st3, "zz") == st3);
    CHECK_THROWS_AS(remove(st3, "a2").src("a2"), DanglingAddress);
  }

  TEST_CASE("count and detect") {
    CHECK(count_imgs(sample(), "human face") == 2);
    CHECK(count_imgs(blank(), "human face") == 0);
    CHECK(count_imgs(sample(), "product") == 1);
    CHECK(detect_img(sample(), "human face") == std::vector<Rect>{{10, 10, 20, 20}, {30, 30, 40, 40}});
    CHECK(detect_img(blank(), "human face").empty());
    CHECK(detect_img(sample(), "product") == std::vector<Rect>{{60, 60, 90, 90}});
  }

  TEST_CASE("extract") {
    SyntheticImage img = blank();
    img.regions = {{"human face", {10, 10, 20, 20}}};
    SyntheticImage part = extract_img(img, {0, 0, 50, 50});
    CHECK(part.width == 50);
    CHECK(part.height == 50);
    CHECK(part.regions == std::vector<Region>{{"human face", {10, 10, 20, 20}}});
    SyntheticImage whole = extract_img(sample(), sample().canvas());
    CHECK(whole.regions == sample().regions);
    CHECK(whole.width == 100);
    CHECK(extract_img(sample(), {0, 0, 5, 5}).regions.empty());
    CHECK_THROWS_AS(extract_img(sample(), {50, 50, 150, 150}), OutOfBounds);
  }

  TEST_CASE("sub") {
    for (const Rect& seg : {Rect{0, 0, 25, 25}, Rect{25, 25, 45, 45}, Rect{0, 0, 100, 100}}) {
      SyntheticImage cut = sub_img(sample(), extract_img(sample(), seg));
      CHECK_FALSE(overlaps_inside(cut, seg));
      CHECK(cut.canvas() == sample().canvas());
      CHECK(sub_img(cut, extract_img(sample(), seg)) == cut);
    }
    CHECK(sub_img(sample(), blank(0, 0)) == sample());
  }

  TEST_CASE("sub removes exactly the contained regions") {
    test::Rng rng(test::seed() + 30);
    for (int trial = 0; trial < 200; ++trial) {
      SyntheticImage img = blank(60, 60);
      for (int i = 0; i < 5; ++i) {
        std::int64_t x = static_cast<std::int64_t>(test::pick(rng, 50));
        std::int64_t y = static_cast<std::int64_t>(test::pick(rng, 50));
        img.regions.push_back({test::coin(rng) ? "human face" : "product", {x, y, x + 10, y + 10}});
      }
      std::int64_t x1 = static_cast<std::int64_t>(test::pick(rng, 30));
      std::int64_t y1 = static_cast<std::int64_t>(test::pick(rng, 30));
      Rect seg{x1, y1, x1 + static_cast<std::int64_t>(test::pick(rng, 30)),
               y1 + static_cast<std::int64_t>(test::pick(rng, 30))};
      std::vector<Region> kept;
      for (const auto& r : img.regions)
        if (!seg.contains(r.box)) kept.push_back(r);
      CHECK(sub_img(img, extract_img(img, seg)).regions == kept);
    }
  }

  TEST_CASE("markIMG") {
    SyntheticImage out = mark_img(sample(), {1, 1, 5, 5}, "oval", "red");
    CHECK(out.decorations.size() == sample().decorations.size() + 1);
    CHECK(out.decorations.back() == Decoration{"oval", "red", {1, 1, 5, 5}});
    CHECK(out.regions == sample().regions);
    CHECK_THROWS_AS(mark_img(sample(), {1, 1, 5, 5}, "blob", "red"), UnknownShape);
    CHECK_THROWS_AS(mark_img(sample(), {1, 1, 5, 5}, "oval", "mauve"), UnknownColor);
    CHECK_THROWS_AS(mark_img(sample(), {90, 90, 120, 120}, "oval", "red"), OutOfBounds);
  }

  TEST_CASE("JSON round trip") {
    ObjectStore st;
    st.put_or_update("img1", sample());
    st.put_or_update("part", extract_img(mark_img(sample(), {0, 0, 9, 9}, "rect", "blue"),
                                         {5, 5, 50, 50}));
    CHECK(store_from_json(store_to_json(st)) == st);
    CHECK(image_from_json(image_to_json(sample())) == sample());
    CHECK(check_image(sample()).empty());
    SyntheticImage bad = blank(10, 10);
    bad.regions.push_back({"x", {5, 5, 20, 20}});
    CHECK_FALSE(check_image(bad).empty());
  }
}
