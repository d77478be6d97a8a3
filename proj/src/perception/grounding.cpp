#include "butler/perception/grounding.hpp"

#include <algorithm>
#include <limits>

#include "butler/perception/errors.hpp"
#include "butler/world/queries.hpp"

namespace butler::perception {

using world::ObjectRecord;
using world::ParentRef;
using world::Vec2;
using world::WorldModel;

std::optional<world::ObjectId> object_at_point(const WorldModel& w, Vec2 p) {
  std::optional<world::ObjectId> inside;
  double inside_d = std::numeric_limits<double>::infinity();
  std::optional<world::ObjectId> near;
  double near_d = std::numeric_limits<double>::infinity();

  for (const auto& [id, o] : w.objects) {
    if (o.parent.kind == ParentRef::Kind::gripper || !world::is_visible(w, id)) continue;
    double center_d = world::distance(p, o.pose);
    double edge_d = std::max(0.0, center_d - o.footprint_radius);
    // std::map iterates ids in ascending order, so strict comparisons keep the smaller id on ties.
    if (center_d <= o.footprint_radius) {
      if (center_d < inside_d) {
        inside = id;
        inside_d = center_d;
      }
    } else if (edge_d <= kPointSnapMeters && edge_d < near_d) {
      near = id;
      near_d = edge_d;
    }
  }
  return inside ? inside : near;
}

ResolvedPoint resolve_point(const WorldModel& w, const FrameRegistry& frames, FrameId frame_id, PixelPoint px,
                            PointPurpose purpose) {
  const Frame& f = frames.get(frame_id);
  Vec2 p = f.view.to_world(px);
  if (purpose == PointPurpose::location) return p;
  if (auto id = object_at_point(w, p)) return *id;
  throw NoTarget("no object near the selected point");
}

PlacePose place_pose(const WorldModel& w, const PlaceTarget& target) {
  if (const auto* id = std::get_if<world::ObjectId>(&target)) {
    const ObjectRecord* o = w.find_object(*id);
    if (!o || !world::is_visible(w, *id)) throw NoTarget("place target '" + *id + "' is not visible");
    if (o->parent.kind == ParentRef::Kind::gripper ||
        (w.robot.holding && (*w.robot.holding == *id || world::has_ancestor(w, *id, *w.robot.holding)))) {
      throw NotASurface("cannot place onto the held object '" + *id + "'");
    }
    return {o->pose.x, o->pose.y, o->top_height + kPlaceClearance};
  }

  const auto& name = std::get<ZoneRef>(target).name;
  const world::Zone* z = w.find_zone(name);
  if (!z) throw NoTarget("unknown location '" + name + "'");
  if (z->kind != world::ZoneKind::surface) throw NotASurface("location '" + name + "' cannot support placement");
  if (z->placement) return {z->placement->xy.x, z->placement->xy.y, z->placement->height + kPlaceClearance};
  Vec2 c = z->footprint.center();
  return {c.x, c.y, z->height + kPlaceClearance};
}

}  // namespace butler::perception
