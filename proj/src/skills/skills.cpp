#include "butler/skills/skills.hpp"

#include <cmath>
#include <limits>

#include "butler/common/text.hpp"
#include "butler/perception/detect.hpp"
#include "butler/perception/errors.hpp"
#include "butler/perception/grounding.hpp"
#include "butler/skills/path_planner.hpp"
#include "butler/skills/vqa_oracle.hpp"
#include "butler/world/effects.hpp"
#include "butler/world/queries.hpp"

namespace butler::skills {

using world::ObjectId;
using world::ObjectRecord;
using world::ParentRef;
using world::Vec2;
using world::WorldModel;

namespace {

StepResult failed(const WorldModel& w, ErrorCode e, std::string reason, std::int64_t duration_ms = 0) {
  StepResult r{w, SkillOutcome::failure(e, std::move(reason), duration_ms)};
  r.world.clock.ms += duration_ms;
  return r;
}

StepResult ambiguous(const WorldModel& w, std::vector<ObjectId> candidates) {
  StepResult r = failed(w, ErrorCode::ambiguous_target, "more than one object matches");
  r.outcome.candidates = std::move(candidates);
  return r;
}

/// Applies the effect and advances the clock by the skill's duration.
StepResult succeed(const WorldModel& w, const world::Effect& e, std::int64_t duration_ms) {
  WorldModel next = world::apply_effect(w, e);
  next.clock.ms += duration_ms;
  return {std::move(next), SkillOutcome::success(duration_ms)};
}

/// Object reference resolved from an argument, or the failure explaining why not.
struct ObjectLookup {
  std::optional<ObjectId> id;
  std::optional<ErrorCode> error;
  std::string reason;
  std::vector<ObjectId> candidates;
};

ObjectLookup lookup_text(const WorldModel& w, const std::string& query, perception::DetectionNoise noise) {
  if (text::trim(query).empty()) return {{}, ErrorCode::invalid_argument, "empty target", {}};
  auto hits = perception::detect(w, query, noise);
  if (hits.empty()) return {{}, ErrorCode::no_target, "I can't find " + query, {}};
  auto top = perception::top_candidates(hits);
  if (top.size() > 1) return {{}, ErrorCode::ambiguous_target, "more than one " + query, top};
  return {top.front(), {}, {}, {}};
}

ObjectLookup lookup_object(const WorldModel& w, const ObjectId& id) {
  const ObjectRecord* o = w.find_object(id);
  if (!o || !world::is_visible(w, id)) return {{}, ErrorCode::no_target, "object '" + id + "' is not visible", {}};
  return {id, {}, {}, {}};
}

ObjectLookup lookup_point(const WorldModel& w, Vec2 p) {
  if (auto id = perception::object_at_point(w, p)) return {*id, {}, {}, {}};
  return {{}, ErrorCode::no_target, "there is no object at the selected point", {}};
}

StepResult from_lookup(const WorldModel& w, const ObjectLookup& l) {
  if (l.error == ErrorCode::ambiguous_target) return ambiguous(w, l.candidates);
  return failed(w, l.error.value_or(ErrorCode::no_target), l.reason);
}

double reach_distance(const WorldModel& w, const ObjectRecord& o) {
  return world::distance(w.robot.base.position(), o.pose);
}

/// Containers are reached at their zone (a fridge door is anywhere on its front).
double container_reach_distance(const WorldModel& w, const ObjectRecord& c) {
  if (const world::Zone* z = world::zone_of_object(w, c.id)) return z->footprint.distance_to(w.robot.base.position());
  return reach_distance(w, c);
}

struct NavGoal {
  world::Cell cell;
  Vec2 target;
};

/// Reachable free cell within reach_radius of target, closest to the target.
/// Cells inside `keep_out` of the target are skipped (the object's own footprint).
std::optional<NavGoal> approach_cell(const WorldModel& w, Vec2 target, double keep_out) {
  const auto& grid = *w.grid;
  world::Cell start = grid.cell_of(w.robot.base.position());
  auto steps = reachable_steps(grid, start);
  std::optional<world::Cell> best;
  double best_d = std::numeric_limits<double>::infinity();
  int best_steps = 0;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      int s = steps[static_cast<std::size_t>(y) * grid.width() + x];
      if (s < 0) continue;
      double d = world::distance(grid.center_of({x, y}), target);
      if (d > w.robot.reach_radius || d < keep_out) continue;
      if (!best || d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && s < best_steps)) {
        best = world::Cell{x, y};
        best_d = d;
        best_steps = s;
      }
    }
  }
  if (!best) return std::nullopt;
  return NavGoal{*best, target};
}

}  // namespace

SkillExecutor::SkillExecutor(SkillConfig config) : config_(std::move(config)), rng_(config_.seed) {}

bool SkillExecutor::inject_failure(SkillKind k) {
  auto it = config_.failure_probability.find(k);
  if (it == config_.failure_probability.end() || it->second <= 0.0) return false;
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < it->second;
}

StepResult SkillExecutor::execute(const WorldModel& w, const PrimitiveAction& action, ExecutionContext& ctx) {
  if (has_star(action)) return failed(w, ErrorCode::invalid_argument, "unresolved '*' argument");
  try {
    switch (action.skill) {
      case SkillKind::move: return move(w, action, ctx);
      case SkillKind::pick: return pick(w, action, ctx);
      case SkillKind::placeon: return placeon(w, action, ctx);
      case SkillKind::open: return set_open(w, action, ctx, true);
      case SkillKind::close: return set_open(w, action, ctx, false);
      case SkillKind::vqa: return vqa(w, action, ctx);
    }
  } catch (const world::PreconditionViolated& e) {
    // Guards above should have caught this; report it as a typed failure anyway.
    return failed(w, ErrorCode::invalid_argument, e.what());
  } catch (const perception::PerceptionError& e) {
    return failed(w, ErrorCode::no_target, e.what());
  } catch (const std::invalid_argument& e) {
    return failed(w, ErrorCode::invalid_argument, e.what());
  }
  return failed(w, ErrorCode::invalid_argument, "unknown skill");
}

StepResult SkillExecutor::move(const WorldModel& w, const PrimitiveAction& a, ExecutionContext& ctx) {
  if (a.args.size() != 1) return failed(w, ErrorCode::invalid_argument, "move takes one target");
  const auto& grid = *w.grid;
  world::Cell start = grid.cell_of(w.robot.base.position());

  world::BasePose pose;
  world::Cell goal{};
  std::optional<ObjectId> target_object;

  const ActionArg& arg = a.args.front();
  const world::Zone* zone = nullptr;
  if (const auto* t = std::get_if<TextArg>(&arg)) zone = w.find_zone(t->text);

  if (zone) {
    pose = zone->waypoint;
    goal = grid.cell_of(pose.position());
  } else {
    Vec2 target;
    double keep_out = 0.0;
    if (const auto* p = std::get_if<PointArg>(&arg)) {
      target = p->world;
      if (!grid.bounds().contains(target)) return failed(w, ErrorCode::no_target, "the selected point is off the map");
      if (auto id = perception::object_at_point(w, target)) target_object = *id;
    } else {
      ObjectLookup l;
      if (const auto* t = std::get_if<TextArg>(&arg)) {
        l = lookup_text(w, t->text, {config_.detection_noise, &rng_});
        if (!l.id && l.error == ErrorCode::no_target) {
          return failed(w, ErrorCode::unknown_location, "I don't know where '" + t->text + "' is");
        }
      } else {
        l = lookup_object(w, std::get<ObjectArg>(arg).id);
      }
      if (!l.id) return from_lookup(w, l);
      target_object = *l.id;
      const ObjectRecord& o = w.objects.at(*l.id);
      target = o.pose;
      keep_out = o.footprint_radius;
    }
    auto approach = approach_cell(w, target, keep_out);
    if (!approach) return failed(w, ErrorCode::no_path, "no free spot within reach of the target");
    goal = approach->cell;
    Vec2 c = grid.center_of(goal);
    pose = {c.x, c.y, std::atan2(target.y - c.y, target.x - c.x)};
  }

  if (!grid.free(start) || !grid.free(goal)) return failed(w, ErrorCode::no_path, "no free path to the target");
  PathPlan path;
  try {
    path = plan_path(grid, start, goal);
  } catch (const NoPath&) {
    return failed(w, ErrorCode::no_path, "no free path to the target");
  }

  std::int64_t duration = static_cast<std::int64_t>(path.steps()) * config_.timings.move_per_cell_ms;
  if (inject_failure(SkillKind::move)) {
    return failed(w, ErrorCode::execution_failure, "navigation failed", duration);
  }
  StepResult r = succeed(w, world::MoveBaseEffect{pose}, duration);
  r.outcome.path = std::move(path);
  if (target_object) {
    r.outcome.target = target_object;
    ctx.focus = target_object;
  }
  return r;
}

StepResult SkillExecutor::pick(const WorldModel& w, const PrimitiveAction& a, ExecutionContext& ctx) {
  if (a.args.size() != 1) return failed(w, ErrorCode::invalid_argument, "pick takes one target");
  if (w.robot.holding) return failed(w, ErrorCode::gripper_occupied, "I am already holding something");

  ObjectLookup l;
  const ActionArg& arg = a.args.front();
  if (const auto* t = std::get_if<TextArg>(&arg)) l = lookup_text(w, t->text, {config_.detection_noise, &rng_});
  else if (const auto* p = std::get_if<PointArg>(&arg)) l = lookup_point(w, p->world);
  else l = lookup_object(w, std::get<ObjectArg>(arg).id);
  if (!l.id) return from_lookup(w, l);

  const ObjectRecord& o = w.objects.at(*l.id);
  if (o.is_container) return failed(w, ErrorCode::not_graspable, "the " + o.name + " cannot be picked up");
  if (!world::children_of(w, o.id).empty()) {
    return failed(w, ErrorCode::not_graspable, "something is resting on the " + o.name);
  }
  if (reach_distance(w, o) > w.robot.reach_radius) return failed(w, ErrorCode::out_of_reach, "the " + o.name + " is out of reach");

  if (inject_failure(SkillKind::pick)) {
    StepResult r = failed(w, ErrorCode::execution_failure, "I failed to grasp the " + o.name, config_.timings.pick_ms);
    r.outcome.target = o.id;
    return r;
  }
  StepResult r = succeed(w, world::PickEffect{o.id}, config_.timings.pick_ms);
  r.outcome.target = o.id;
  ctx.focus = o.id;
  return r;
}

StepResult SkillExecutor::placeon(const WorldModel& w, const PrimitiveAction& a, ExecutionContext& ctx) {
  if (a.args.size() != 1) return failed(w, ErrorCode::invalid_argument, "placeon takes one target");
  if (!w.robot.holding) return failed(w, ErrorCode::nothing_held, "I am not holding anything");
  const ObjectId held = *w.robot.holding;

  ParentRef parent;
  perception::PlacePose pose;
  double reach = 0.0;

  auto onto_object = [&](const ObjectRecord& o) -> std::optional<StepResult> {
    if (o.id == held || world::has_ancestor(w, o.id, held)) {
      return failed(w, ErrorCode::not_a_surface, "I cannot place the object on itself");
    }
    if (o.is_container) {
      if (!o.is_open.value_or(false)) return failed(w, ErrorCode::container_closed, "the " + o.name + " is closed");
      parent = ParentRef::container(o.id);
      reach = container_reach_distance(w, o);
    } else {
      parent = ParentRef::surface(o.id);
      reach = reach_distance(w, o);
    }
    pose = perception::place_pose(w, o.id);
    return std::nullopt;
  };

  const ActionArg& arg = a.args.front();
  std::optional<StepResult> early;
  const world::Zone* zone = nullptr;
  if (const auto* t = std::get_if<TextArg>(&arg)) zone = w.find_zone(t->text);

  if (zone) {
    const ObjectRecord* c = world::find_container(w, zone->name);
    if (c && world::is_visible(w, c->id)) {
      early = onto_object(*c);
    } else if (zone->kind != world::ZoneKind::surface) {
      return failed(w, ErrorCode::not_a_surface, "I cannot put things on the " + zone->name);
    } else {
      parent = ParentRef::surface(zone->name);
      pose = perception::place_pose(w, perception::ZoneRef{zone->name});
      reach = zone->footprint.distance_to(w.robot.base.position());
    }
  } else if (const auto* p = std::get_if<PointArg>(&arg)) {
    if (!w.grid->bounds().contains(p->world)) return failed(w, ErrorCode::no_target, "the selected point is off the map");
    if (auto id = perception::object_at_point(w, p->world)) {
      early = onto_object(w.objects.at(*id));
    } else if (const world::Zone* z = w.zone_at(p->world)) {
      const ObjectRecord* c = world::find_container(w, z->name);
      if (c && world::is_visible(w, c->id)) {
        early = onto_object(*c);
      } else if (z->kind == world::ZoneKind::surface) {
        parent = ParentRef::surface(z->name);
        pose = {p->world.x, p->world.y, z->height + perception::kPlaceClearance};
        reach = world::distance(w.robot.base.position(), p->world);
      } else {
        return failed(w, ErrorCode::not_a_surface, "I cannot put things on the " + z->name);
      }
    } else {
      if (w.grid->occupied(w.grid->cell_of(p->world))) {
        return failed(w, ErrorCode::not_a_surface, "there is no free floor at the selected point");
      }
      parent = ParentRef::floor();
      pose = {p->world.x, p->world.y, world::Height{0} + perception::kPlaceClearance};
      reach = world::distance(w.robot.base.position(), p->world);
    }
  } else {
    ObjectLookup l;
    if (const auto* t = std::get_if<TextArg>(&arg)) l = lookup_text(w, t->text, {config_.detection_noise, &rng_});
    else l = lookup_object(w, std::get<ObjectArg>(arg).id);
    if (!l.id) return from_lookup(w, l);
    early = onto_object(w.objects.at(*l.id));
  }
  if (early) return *early;

  const std::string& name = w.objects.at(held).name;
  if (reach > w.robot.reach_radius) return failed(w, ErrorCode::out_of_reach, "the target is out of reach");
  if (inject_failure(SkillKind::placeon)) {
    return failed(w, ErrorCode::execution_failure, "I failed to place the " + name, config_.timings.place_ms);
  }
  StepResult r = succeed(w, world::PlaceEffect{held, parent, {pose.x, pose.y}}, config_.timings.place_ms);
  r.outcome.target = held;
  ctx.focus = held;
  return r;
}

StepResult SkillExecutor::set_open(const WorldModel& w, const PrimitiveAction& a, ExecutionContext& ctx, bool open) {
  const char* verb = open ? "open" : "close";
  if (a.args.size() != 1) return failed(w, ErrorCode::invalid_argument, std::string(verb) + " takes one container");
  const ObjectRecord* c = nullptr;
  if (const auto* t = std::get_if<TextArg>(&a.args.front())) {
    c = world::find_container(w, t->text);
    if (!c) return failed(w, ErrorCode::unknown_container, "I don't know a container called '" + t->text + "'");
  } else if (const auto* o = std::get_if<ObjectArg>(&a.args.front())) {
    c = w.find_object(o->id);
    if (!c || !c->is_container) return failed(w, ErrorCode::unknown_container, "'" + o->id + "' is not a container");
  } else {
    return failed(w, ErrorCode::invalid_argument, std::string(verb) + " needs a named container");
  }
  if (!world::is_visible(w, c->id)) return failed(w, ErrorCode::unknown_container, "the " + c->name + " is not reachable");
  if (container_reach_distance(w, *c) > w.robot.reach_radius) {
    return failed(w, ErrorCode::out_of_reach, "the " + c->name + " is out of reach");
  }

  ctx.focus = c->id;
  if (c->is_open.value_or(false) == open) {
    StepResult r{w, SkillOutcome::success(0)};
    r.outcome.reason = "already";
    r.outcome.target = c->id;
    return r;
  }
  SkillKind kind = open ? SkillKind::open : SkillKind::close;
  if (inject_failure(kind)) {
    return failed(w, ErrorCode::execution_failure, std::string("I failed to ") + verb + " the " + c->name,
                  config_.timings.open_close_ms);
  }
  StepResult r = succeed(w, world::SetOpenEffect{c->id, open}, config_.timings.open_close_ms);
  r.outcome.target = c->id;
  return r;
}

StepResult SkillExecutor::vqa(const WorldModel& w, const PrimitiveAction& a, ExecutionContext& ctx) {
  if (a.args.empty() || a.args.size() > 2) return failed(w, ErrorCode::invalid_argument, "vqa takes a question and an optional target");
  const auto* question = std::get_if<TextArg>(&a.args.front());
  if (!question || question->text.empty()) return failed(w, ErrorCode::invalid_argument, "vqa needs a question");

  VqaQuery q{question->text, {}, ctx.focus};
  std::optional<Vec2> mark_world;
  if (a.args.size() == 2) {
    const ActionArg& target = a.args[1];
    ObjectLookup l;
    if (const auto* p = std::get_if<PointArg>(&target)) {
      l = lookup_point(w, p->world);
      mark_world = p->world;
    } else if (const auto* o = std::get_if<ObjectArg>(&target)) {
      l = lookup_object(w, o->id);
    } else {
      l = lookup_text(w, std::get<TextArg>(target).text, {config_.detection_noise, &rng_});
    }
    if (!l.id) return from_lookup(w, l);
    q.pointed = *l.id;
    if (!mark_world) mark_world = w.objects.at(*l.id).pose;
  }

  std::optional<std::string> answer;
  std::optional<ObjectId> subject = q.pointed;
  if (vqa_backend_) {
    auto view = perception::full_map_view(w);
    perception::Frame frame = perception::render_frame(w, view, 0, w.clock.ms);
    std::optional<perception::PixelPoint> mark;
    if (mark_world) {
      mark = view.to_pixel(*mark_world);
      frame = perception::annotate_mark(frame, *mark);
    }
    try {
      answer = vqa_backend_->ask(q.question, frame, mark);
    } catch (const std::exception&) {
      // Backend unavailable: the oracle still answers the forms it knows.
    }
  }
  if (!answer) {
    VqaResult res = answer_question(w, q);
    if (!res.answer) {
      StepResult r = failed(w, res.error.value_or(ErrorCode::unresolvable_question), res.reason);
      r.outcome.candidates = res.candidates;
      return r;
    }
    answer = res.answer;
    subject = res.subject;
  }

  if (inject_failure(SkillKind::vqa)) {
    return failed(w, ErrorCode::execution_failure, "I could not get a clear view", config_.timings.vqa_ms);
  }
  StepResult r = succeed(w, world::TickEffect{0}, config_.timings.vqa_ms);
  r.outcome.answer = answer;
  r.outcome.target = subject;
  if (subject) ctx.focus = subject;
  return r;
}

}  // namespace butler::skills
