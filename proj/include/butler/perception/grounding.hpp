#pragma once

#include <optional>
#include <string>
#include <variant>

#include "butler/perception/frame.hpp"
#include "butler/world/world_model.hpp"

namespace butler::perception {

/// Click-to-object snap distance, measured from the footprint edge.
inline constexpr double kPointSnapMeters = 0.15;

/// Height added to the supporting top when placing.
inline constexpr world::Height kPlaceClearance{200};

enum class PointPurpose { object, location };

using ResolvedPoint = std::variant<world::ObjectId, world::Vec2>;

/// Visible, non-held object whose footprint contains p; otherwise the nearest
/// one within kPointSnapMeters of its footprint. Ties go to the smaller id.
std::optional<world::ObjectId> object_at_point(const world::WorldModel& w, world::Vec2 p);

/// Maps a click on a registered frame back into the world.
/// Throws StaleFrame, or NoTarget when purpose is object and nothing is near.
ResolvedPoint resolve_point(const world::WorldModel& w, const FrameRegistry& frames, FrameId frame_id, PixelPoint px,
                            PointPurpose purpose);

struct ZoneRef {
  std::string name;
};
using PlaceTarget = std::variant<world::ObjectId, ZoneRef>;

struct PlacePose {
  double x = 0.0;
  double y = 0.0;
  world::Height z;
};

/// Object targets: footprint center, top + clearance. Surface zones: the
/// predefined placement point when present, else footprint center at the
/// zone's height, plus clearance. Throws NotASurface or NoTarget.
PlacePose place_pose(const world::WorldModel& w, const PlaceTarget& target);

}  // namespace butler::perception
