#include "butler/world/goals.hpp"

#include "butler/common/text.hpp"
#include "butler/world/queries.hpp"

namespace butler::world {

namespace {

const ObjectRecord& object_or_throw(const WorldModel& w, const ObjectId& id) {
  const ObjectRecord* o = w.find_object(id);
  if (!o) throw UnknownReference("goal names unknown object '" + id + "'");
  return *o;
}

}  // namespace

bool goal_satisfied(const WorldModel& w, const std::vector<std::string>& responses, const GoalPredicate& g) {
  return std::visit(
      [&](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ObjectAt>) {
          const ObjectRecord& o = object_or_throw(w, p.id);
          const Zone* z = w.find_zone(p.zone);
          if (!z) throw UnknownReference("goal names unknown zone '" + p.zone + "'");
          if (o.parent.kind == ParentRef::Kind::gripper) return false;
          return z->footprint.contains(o.pose);
        } else if constexpr (std::is_same_v<T, ParentIs>) {
          return object_or_throw(w, p.id).parent == p.parent;
        } else if constexpr (std::is_same_v<T, ContainerOpen>) {
          const ObjectRecord* c = find_container(w, p.name);
          if (!c) throw UnknownReference("goal names unknown container '" + p.name + "'");
          return c->is_open.value_or(false) == p.open;
        } else {
          for (const auto& r : responses) {
            if (text::contains_case_insensitive(r, p.substring)) return true;
          }
          return false;
        }
      },
      g);
}

bool all_goals_satisfied(const WorldModel& w, const std::vector<std::string>& responses,
                         const std::vector<GoalPredicate>& goals) {
  for (const auto& g : goals) {
    if (!goal_satisfied(w, responses, g)) return false;
  }
  return true;
}

}  // namespace butler::world
