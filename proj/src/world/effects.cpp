#include "butler/world/effects.hpp"

#include "butler/world/queries.hpp"

namespace butler::world {

namespace {

void require(bool ok, const std::string& reason) {
  if (!ok) throw PreconditionViolated(reason);
}

WorldModel apply(const WorldModel& w, const PickEffect& e) {
  require(!w.robot.holding, "gripper occupied");
  const ObjectRecord* obj = w.find_object(e.id);
  require(obj != nullptr, "unknown object '" + e.id + "'");
  require(is_visible(w, e.id), "object '" + e.id + "' is not detectable");
  require(distance(w.robot.base.position(), obj->pose) <= w.robot.reach_radius, "object '" + e.id + "' out of reach");
  require(!obj->is_container, "object '" + e.id + "' is a fixed container");
  require(children_of(w, e.id).empty(), "object '" + e.id + "' supports other objects");

  WorldModel next = w;
  next.objects.at(e.id).parent = ParentRef::gripper();
  next.robot.holding = e.id;
  return next;
}

WorldModel apply(const WorldModel& w, const PlaceEffect& e) {
  require(w.robot.holding == e.id, "object '" + e.id + "' is not held");
  require(w.grid->bounds().contains(e.pose), "place pose outside the map");
  switch (e.parent.kind) {
    case ParentRef::Kind::gripper:
      throw PreconditionViolated("cannot place into the gripper");
    case ParentRef::Kind::floor:
      break;
    case ParentRef::Kind::container: {
      const ObjectRecord* c = w.find_object(e.parent.ref);
      require(c && c->is_container, "'" + e.parent.ref + "' is not a container");
      require(c->is_open.value_or(false), "container '" + e.parent.ref + "' is closed");
      require(c->id != e.id && !has_ancestor(w, c->id, e.id), "cannot place an object inside itself");
      require(is_visible(w, c->id), "container '" + e.parent.ref + "' is not reachable");
      break;
    }
    case ParentRef::Kind::surface: {
      if (const ObjectRecord* s = w.find_object(e.parent.ref)) {
        require(s->id != e.id && !has_ancestor(w, s->id, e.id), "cannot place an object on itself");
        require(s->parent.kind != ParentRef::Kind::gripper, "cannot place on a held object");
        require(is_visible(w, s->id), "surface '" + e.parent.ref + "' is not reachable");
      } else {
        require(w.find_zone(e.parent.ref) != nullptr, "unknown surface '" + e.parent.ref + "'");
      }
      break;
    }
  }

  WorldModel next = w;
  auto& obj = next.objects.at(e.id);
  obj.parent = e.parent;
  obj.pose = e.pose;
  next.robot.holding.reset();
  return next;
}

WorldModel apply(const WorldModel& w, const SetOpenEffect& e) {
  const ObjectRecord* c = find_container(w, e.name);
  require(c != nullptr, "unknown container '" + e.name + "'");
  WorldModel next = w;
  next.objects.at(c->id).is_open = e.open;
  return next;
}

WorldModel apply(const WorldModel& w, const MoveBaseEffect& e) {
  require(w.grid->free(w.grid->cell_of(e.pose.position())), "target base cell is not free");
  WorldModel next = w;
  next.robot.base = e.pose;
  return next;
}

WorldModel apply(const WorldModel& w, const TickEffect& e) {
  require(e.ms >= 0, "clock cannot run backwards");
  WorldModel next = w;
  next.clock.ms += e.ms;
  return next;
}

}  // namespace

WorldModel apply_effect(const WorldModel& w, const Effect& e) {
  return std::visit([&](const auto& effect) { return apply(w, effect); }, e);
}

}  // namespace butler::world
