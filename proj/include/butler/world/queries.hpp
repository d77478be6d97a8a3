#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "butler/world/world_model.hpp"

namespace butler::world {

/// True when no ancestor of the object is a closed container.
bool is_visible(const WorldModel& w, const ObjectId& id);

/// True when `ancestor` appears on the parent chain of `id` (not counting id itself).
bool has_ancestor(const WorldModel& w, const ObjectId& id, const ObjectId& ancestor);

/// Objects whose parent directly names `id` (as surface or container).
std::vector<ObjectId> children_of(const WorldModel& w, const ObjectId& id);

/// Zone the object is considered to be in: the zone under its pose, or the
/// zone of the outermost object it rests on or in.
const Zone* zone_of_object(const WorldModel& w, const ObjectId& id);

/// Container matching a name: container object id or name, or the container
/// that sits inside a zone with that name.
const ObjectRecord* find_container(const WorldModel& w, std::string_view name);

/// Zone whose waypoint is within `tolerance` of the robot base, nearest first.
const Zone* robot_zone(const WorldModel& w, double tolerance = 0.3);

/// name/category/synonyms -> zones, computed from a snapshot. Objects that
/// are not inside any zone (chairs on the floor) map to an empty list.
std::map<std::string, std::vector<std::string>> build_location_directory(const WorldModel& w);

}  // namespace butler::world
