#include <doctest.h>

#include <random>

#include "butler/common/base64.hpp"
#include "butler/perception/detect.hpp"
#include "butler/perception/errors.hpp"
#include "butler/perception/frame.hpp"
#include "butler/perception/grounding.hpp"
#include "butler/perception/png.hpp"
#include "butler/world/effects.hpp"
#include "support/test_world.hpp"

using namespace butler;
using namespace butler::perception;
using butler::testing::small_world;

namespace {

std::vector<world::ObjectId> ids(const std::vector<DetectionResult>& r) {
  std::vector<world::ObjectId> out;
  for (const auto& d : r) out.push_back(d.object_id);
  return out;
}

}  // namespace

TEST_SUITE("perception") {

TEST_CASE("detect matches names, synonyms and categories") {
  auto w = small_world();
  CHECK(ids(detect(w, "apple")) == std::vector<world::ObjectId>{"apple"});
  CHECK(ids(detect(w, "mug")) == std::vector<world::ObjectId>{"cup"});
  CHECK(ids(detect(w, "mugs")) == std::vector<world::ObjectId>{"cup"});
  CHECK(ids(detect(w, "fruit")) == std::vector<world::ObjectId>{"apple"});
  CHECK(detect(w, "banana").empty());
}

TEST_CASE("detect skips objects inside closed containers") {
  auto w = small_world();
  CHECK(detect(w, "tea").empty());
  w = world::apply_effect(w, world::SetOpenEffect{"box", true});
  CHECK(ids(detect(w, "tea")) == std::vector<world::ObjectId>{"tea"});
}

TEST_CASE("attribute words filter and rank") {
  auto w = small_world();
  auto red = butler::testing::make_object("cup2", "cup", {0.6, 0.3}, world::ParentRef::surface("table"));
  red.attributes["color"] = "red";
  w.objects.emplace(red.id, red);
  CHECK(ids(detect(w, "red cup")) == std::vector<world::ObjectId>{"cup2"});
  CHECK(ids(detect(w, "blue cup")) == std::vector<world::ObjectId>{"cup"});
  auto both = detect(w, "cup");
  CHECK(top_candidates(both).size() == 2);
  // A missing attribute does not reject, it only scores lower.
  w.objects.at("cup2").attributes.erase("color");
  auto r = detect(w, "blue cup");
  REQUIRE(r.size() == 2);
  CHECK(r[0].object_id == "cup");
  CHECK(r[0].score > r[1].score);
  CHECK(top_candidates(r) == std::vector<world::ObjectId>{"cup"});
}

TEST_CASE("detection noise swaps within a category") {
  auto w = small_world();
  auto pear = butler::testing::make_object("pear", "pear", {0.6, 0.7}, world::ParentRef::surface("table"), 0.8, "fruit");
  w.objects.emplace(pear.id, pear);
  std::mt19937_64 rng(7);
  int swapped = 0;
  for (int i = 0; i < 200; ++i) {
    auto r = detect(w, "apple", {1.0, &rng});
    REQUIRE(r.size() == 1);
    swapped += r[0].object_id == "pear";
  }
  CHECK(swapped == 200);
  CHECK(ids(detect(w, "apple", {0.0, &rng})) == std::vector<world::ObjectId>{"apple"});
}

TEST_CASE("view transform round-trips within a pixel") {
  auto w = small_world();
  auto view = full_map_view(w, 50.0);
  CHECK(frame_width(w, view) == 200);
  CHECK(frame_height(w, view) == 150);
  for (double x = 0.1; x < 4.0; x += 0.37) {
    for (double y = 0.1; y < 3.0; y += 0.41) {
      auto back = view.to_world(view.to_pixel({x, y}));
      CHECK(std::abs(back.x - x) <= 1.0 / view.scale);
      CHECK(std::abs(back.y - y) <= 1.0 / view.scale);
    }
  }
}

TEST_CASE("frames are deterministic and PNG survives a round trip") {
  auto w = small_world();
  auto view = full_map_view(w);
  Frame a = render_frame(w, view, 1, 0);
  Frame b = render_frame(w, view, 2, 100);
  CHECK(a.image == b.image);
  auto png = encode_png(a.image);
  CHECK(decode_png(png) == a.image);
  CHECK(decode_png(base64_decode(base64_encode(png))) == a.image);
  CHECK_THROWS(decode_png(std::vector<std::uint8_t>{1, 2, 3}));
}

TEST_CASE("marks are drawn and bounded") {
  auto w = small_world();
  Frame f = render_frame(w, full_map_view(w), 1, 0);
  Frame m = annotate_mark(f, {50, 50});
  CHECK(m.image.at({50 + kMarkOuterRadius - 1, 50}) == kMarkColor);
  CHECK(m.image.at({50, 50}) == f.image.at({50, 50}));  // ring, not a disc
  CHECK_THROWS_AS(annotate_mark(f, {-1, 10}), OutOfBounds);
}

TEST_CASE("registry evicts the oldest frames") {
  auto w = small_world();
  auto view = full_map_view(w);
  FrameRegistry reg;
  for (FrameId id = 1; id <= FrameRegistry::kCapacity + 3; ++id) reg.add(render_frame(w, view, id, 0));
  CHECK(reg.size() == FrameRegistry::kCapacity);
  CHECK_FALSE(reg.contains(3));
  CHECK(reg.contains(4));
  CHECK_THROWS_AS(reg.get(1), StaleFrame);
  CHECK(reg.latest()->frame_id == FrameRegistry::kCapacity + 3);
}

TEST_CASE("points snap to nearby objects") {
  auto w = small_world();
  CHECK(object_at_point(w, {0.4, 0.5}) == "apple");
  CHECK(object_at_point(w, {0.4, 0.5 + 0.05 + 0.1}) == "apple");   // within snap distance of the edge
  CHECK_FALSE(object_at_point(w, {0.4, 0.5 + 0.05 + 0.2}));
  CHECK_FALSE(object_at_point(w, {3.3, 0.5}) == std::optional<world::ObjectId>{"tea"});  // hidden
}

TEST_CASE("resolve_point by purpose") {
  auto w = small_world();
  auto view = full_map_view(w);
  FrameRegistry reg;
  reg.add(render_frame(w, view, 7, 0));
  auto hit = resolve_point(w, reg, 7, view.to_pixel({0.8, 0.5}), PointPurpose::object);
  CHECK(std::get<world::ObjectId>(hit) == "cup");
  auto spot = resolve_point(w, reg, 7, view.to_pixel({2.0, 2.0}), PointPurpose::location);
  CHECK(std::get<world::Vec2>(spot).x == doctest::Approx(2.0).epsilon(0.02));
  CHECK_THROWS_AS(resolve_point(w, reg, 7, view.to_pixel({2.0, 2.0}), PointPurpose::object), NoTarget);
  CHECK_THROWS_AS(resolve_point(w, reg, 8, {1, 1}, PointPurpose::object), StaleFrame);
}

TEST_CASE("place pose adds the clearance to the support top") {
  auto w = small_world();
  auto on_cup = place_pose(w, world::ObjectId("cup"));
  CHECK(on_cup.x == 0.8);
  CHECK(on_cup.y == 0.5);
  CHECK((on_cup.z - w.objects.at("cup").top_height) == kPlaceClearance);
  auto on_table = place_pose(w, ZoneRef{"table"});
  CHECK(on_table.z == world::Height::from_meters(0.95));
  CHECK(on_table.x == doctest::Approx(0.6));
  CHECK_THROWS_AS(place_pose(w, ZoneRef{"hall"}), NotASurface);
  CHECK_THROWS_AS(place_pose(w, ZoneRef{"attic"}), NoTarget);
}

}  // TEST_SUITE
