#include <doctest.h>

#include <cmath>

#include "butler/perception/frame.hpp"
#include "butler/skills/skills.hpp"
#include "butler/world/effects.hpp"
#include "support/dijkstra.hpp"
#include "support/test_world.hpp"

using namespace butler;
using namespace butler::skills;
using butler::testing::small_world;
using world::ParentRef;

namespace {

PrimitiveAction act(SkillKind k, std::vector<ActionArg> args) { return {k, std::move(args)}; }
ActionArg text(std::string s) { return TextArg{std::move(s)}; }

struct Runner {
  SkillExecutor ex;
  ExecutionContext ctx;
  world::WorldModel w = small_world();

  SkillOutcome run(SkillKind k, std::vector<ActionArg> args) {
    auto r = ex.execute(w, act(k, std::move(args)), ctx);
    w = r.world;
    return r.outcome;
  }
};

void at_table(Runner& r) { REQUIRE(r.run(SkillKind::move, {text("table")}).ok()); }

}  // namespace

TEST_SUITE("skills") {

TEST_CASE("stars never reach a skill") {
  Runner r;
  for (auto k : all_skills()) {
    std::vector<ActionArg> args{Star{}};
    if (k == SkillKind::vqa) args = {text("what is this"), Star{}};
    auto o = r.run(k, args);
    CHECK(o.error == ErrorCode::invalid_argument);
  }
  CHECK(r.w.clock.ms == 0);
}

TEST_CASE("move to a zone drives to its waypoint") {
  Runner r;
  const auto& g = *r.w.grid;
  auto cells = butler::testing::dijkstra_cells(g, g.cell_of(r.w.robot.base.position()), g.cell_of({0.6, 1.3}));
  REQUIRE(cells);
  auto o = r.run(SkillKind::move, {text("table")});
  CHECK(o.ok());
  CHECK(o.duration_ms == (*cells - 1) * 500);
  CHECK(r.w.clock.ms == o.duration_ms);
  CHECK(r.w.robot.base.position() == world::Vec2{0.6, 1.3});
}

TEST_CASE("move to an object stops within reach and faces it") {
  Runner r;
  auto o = r.run(SkillKind::move, {text("cup")});
  REQUIRE(o.ok());
  const auto& cup = r.w.objects.at("cup");
  auto base = r.w.robot.base;
  CHECK(world::distance(base.position(), cup.pose) <= r.w.robot.reach_radius);
  double want = std::atan2(cup.pose.y - base.y, cup.pose.x - base.x);
  CHECK(std::abs(std::remainder(base.heading - want, 2 * M_PI)) < 1e-6);
  CHECK(r.ctx.focus == "cup");
}

TEST_CASE("move to nowhere") {
  Runner r;
  CHECK(r.run(SkillKind::move, {text("garage")}).error == ErrorCode::unknown_location);
}

TEST_CASE("pick checks gripper, reach and graspability") {
  Runner r;
  CHECK(r.run(SkillKind::pick, {text("apple")}).error == ErrorCode::out_of_reach);
  CHECK(r.run(SkillKind::pick, {text("banana")}).error == ErrorCode::no_target);
  r.run(SkillKind::move, {text("cupboard")});
  CHECK(r.run(SkillKind::pick, {text("box")}).error == ErrorCode::not_graspable);
  at_table(r);
  auto o = r.run(SkillKind::pick, {text("apple")});
  CHECK(o.ok());
  CHECK(o.duration_ms == 8000);
  CHECK(r.w.robot.holding == "apple");
  CHECK(r.run(SkillKind::pick, {text("cup")}).error == ErrorCode::gripper_occupied);
}

TEST_CASE("pick reports every equally good candidate") {
  Runner r;
  auto cup2 = butler::testing::make_object("cup2", "cup", {0.5, 0.4}, ParentRef::surface("table"));
  r.w.objects.emplace(cup2.id, cup2);
  at_table(r);
  auto o = r.run(SkillKind::pick, {text("cup")});
  CHECK(o.error == ErrorCode::ambiguous_target);
  CHECK(o.candidates == std::vector<world::ObjectId>{"cup", "cup2"});
  CHECK(o.duration_ms == 0);
  CHECK(r.run(SkillKind::pick, {ObjectArg{"cup2"}}).ok());
}

TEST_CASE("pick by point uses the object under it") {
  Runner r;
  at_table(r);
  auto o = r.run(SkillKind::pick, {PointArg{{0.81, 0.52}, std::nullopt, std::nullopt}});
  CHECK(o.ok());
  CHECK(r.w.robot.holding == "cup");
  CHECK(r.run(SkillKind::placeon, {PointArg{{2.0, 2.0}, std::nullopt, std::nullopt}}).ok() == false);
}

TEST_CASE("place on surfaces, objects and the floor") {
  Runner r;
  at_table(r);
  CHECK(r.run(SkillKind::placeon, {text("table")}).error == ErrorCode::nothing_held);
  REQUIRE(r.run(SkillKind::pick, {text("apple")}).ok());
  auto o = r.run(SkillKind::placeon, {text("cup")});
  CHECK(o.ok());
  CHECK(o.duration_ms == 6000);
  CHECK(r.w.objects.at("apple").parent == ParentRef::surface("cup"));
  CHECK(r.w.objects.at("apple").pose == r.w.objects.at("cup").pose);

  REQUIRE(r.run(SkillKind::pick, {text("apple")}).ok());
  CHECK(r.run(SkillKind::placeon, {text("table")}).ok());
  CHECK(r.w.objects.at("apple").parent == ParentRef::surface("table"));

  REQUIRE(r.run(SkillKind::pick, {text("apple")}).ok());
  REQUIRE(r.run(SkillKind::move, {text("hall")}).ok());
  CHECK(r.run(SkillKind::placeon, {text("table")}).error == ErrorCode::out_of_reach);
  auto floor = r.run(SkillKind::placeon, {PointArg{{2.0, 1.9}, std::nullopt, std::nullopt}});
  CHECK(floor.ok());
  CHECK(r.w.objects.at("apple").parent == ParentRef::floor());
}

TEST_CASE("regions are not surfaces") {
  Runner r;
  at_table(r);
  REQUIRE(r.run(SkillKind::pick, {text("apple")}).ok());
  REQUIRE(r.run(SkillKind::move, {text("hall")}).ok());
  CHECK(r.run(SkillKind::placeon, {text("hall")}).error == ErrorCode::not_a_surface);
}

TEST_CASE("containers must be open to receive") {
  Runner r;
  at_table(r);
  REQUIRE(r.run(SkillKind::pick, {text("cup")}).ok());
  r.run(SkillKind::move, {text("cupboard")});
  CHECK(r.run(SkillKind::placeon, {text("cupboard")}).error == ErrorCode::container_closed);
  auto open = r.run(SkillKind::open, {text("cupboard")});
  CHECK(open.ok());
  CHECK(open.duration_ms == 12000);
  CHECK(r.run(SkillKind::placeon, {text("cupboard")}).ok());
  CHECK(r.w.objects.at("cup").parent == ParentRef::container("box"));
}

TEST_CASE("open and close are idempotent and need reach") {
  Runner r;
  CHECK(r.run(SkillKind::open, {text("box")}).error == ErrorCode::out_of_reach);
  CHECK(r.run(SkillKind::open, {text("table")}).error == ErrorCode::unknown_container);
  CHECK(r.run(SkillKind::open, {PointArg{{3.4, 0.5}, std::nullopt, std::nullopt}}).error == ErrorCode::invalid_argument);
  r.run(SkillKind::move, {text("cupboard")});
  auto again = r.run(SkillKind::close, {text("box")});
  CHECK(again.ok());
  CHECK(again.duration_ms == 0);
  CHECK(again.reason.value_or("").find("already") != std::string::npos);
  CHECK(r.run(SkillKind::open, {ObjectArg{"box"}}).ok());
  CHECK(*r.w.objects.at("box").is_open);
  CHECK(r.run(SkillKind::close, {text("cupboard")}).ok());
  CHECK_FALSE(*r.w.objects.at("box").is_open);
}

TEST_CASE("injected failures cost time but change nothing else") {
  SkillConfig cfg;
  cfg.failure_probability[SkillKind::pick] = 1.0;
  Runner r{SkillExecutor(cfg), {}};
  at_table(r);
  auto before = r.w;
  auto o = r.run(SkillKind::pick, {text("apple")});
  CHECK(o.error == ErrorCode::execution_failure);
  CHECK(o.duration_ms == 8000);
  auto expect = before;
  expect.clock.ms += 8000;
  CHECK(r.w == expect);
}

TEST_CASE("guard failures are free") {
  Runner r;
  auto o = r.run(SkillKind::pick, {text("apple")});
  CHECK_FALSE(o.ok());
  CHECK(o.duration_ms == 0);
  CHECK(r.w.clock.ms == 0);
}

TEST_CASE("vqa answers from the oracle and sets focus") {
  Runner r;
  auto o = r.run(SkillKind::vqa, {text("how many cups are on the table")});
  CHECK(o.ok());
  CHECK(o.answer == "There is 1.");
  CHECK(o.duration_ms == 2000);
  auto p = r.run(SkillKind::vqa, {text("what is this"), PointArg{{0.4, 0.5}, std::nullopt, std::nullopt}});
  CHECK(p.answer == "It is an apple.");
  CHECK(r.ctx.focus == "apple");
  CHECK(r.run(SkillKind::vqa, {text("is it clean")}).error == ErrorCode::unresolvable_question);
}

namespace {
struct CannedVqa : VqaBackend {
  std::optional<perception::PixelPoint> seen;
  bool fail = false;
  std::string ask(const std::string&, const perception::Frame& f, std::optional<perception::PixelPoint> mark) override {
    if (fail) throw std::runtime_error("down");
    seen = mark;
    CHECK(f.width() > 0);
    return "a red fruit";
  }
};
}  // namespace

TEST_CASE("external vqa gets the marked frame and falls back when down") {
  Runner r;
  auto b = std::make_shared<CannedVqa>();
  r.ex.set_vqa_backend(b);
  auto o = r.run(SkillKind::vqa, {text("what is this"), PointArg{{0.4, 0.5}, std::nullopt, std::nullopt}});
  CHECK(o.answer == "a red fruit");
  REQUIRE(b->seen);
  b->fail = true;
  CHECK(r.run(SkillKind::vqa, {text("what is this"), ObjectArg{"apple"}}).answer == "It is an apple.");
}

}  // TEST_SUITE
