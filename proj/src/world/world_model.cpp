#include "butler/world/world_model.hpp"

#include <algorithm>
#include <cmath>

namespace butler::world {

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool Rect::contains(Vec2 p, double eps) const {
  return p.x >= min_x - eps && p.x <= max_x + eps && p.y >= min_y - eps && p.y <= max_y + eps;
}

double Rect::distance_to(Vec2 p) const {
  double dx = std::max({min_x - p.x, 0.0, p.x - max_x});
  double dy = std::max({min_y - p.y, 0.0, p.y - max_y});
  return std::hypot(dx, dy);
}

Height Height::from_meters(double m) { return Height{std::llround(m * 1000.0)}; }

std::string_view to_string(ZoneKind k) {
  switch (k) {
    case ZoneKind::surface: return "surface";
    case ZoneKind::appliance: return "appliance";
    case ZoneKind::region: return "region";
  }
  return "region";
}

std::optional<ZoneKind> zone_kind_from_string(std::string_view s) {
  if (s == "surface") return ZoneKind::surface;
  if (s == "appliance") return ZoneKind::appliance;
  if (s == "region") return ZoneKind::region;
  return std::nullopt;
}

std::string ParentRef::to_string() const {
  switch (kind) {
    case Kind::floor: return "floor";
    case Kind::gripper: return "gripper";
    case Kind::surface: return "surface:" + ref;
    case Kind::container: return "container:" + ref;
  }
  return "floor";
}

std::optional<ParentRef> ParentRef::parse(std::string_view s) {
  if (s == "floor") return floor();
  if (s == "gripper") return gripper();
  auto colon = s.find(':');
  if (colon == std::string_view::npos || colon + 1 >= s.size()) return std::nullopt;
  auto head = s.substr(0, colon);
  std::string ref(s.substr(colon + 1));
  if (head == "surface") return surface(std::move(ref));
  if (head == "container") return container(std::move(ref));
  return std::nullopt;
}

OccupancyGrid::OccupancyGrid(double resolution, int width, int height)
    : resolution_(resolution),
      width_(width),
      height_(height),
      cells_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0) {}

bool OccupancyGrid::occupied(Cell c) const {
  if (!in_bounds(c)) return true;
  return cells_[static_cast<std::size_t>(c.y) * width_ + c.x] != 0;
}

void OccupancyGrid::set_occupied(Cell c, bool value) {
  if (!in_bounds(c)) return;
  cells_[static_cast<std::size_t>(c.y) * width_ + c.x] = value ? 1 : 0;
}

void OccupancyGrid::fill_rect(const Rect& r) {
  Cell lo = cell_of({r.min_x, r.min_y});
  Cell hi = cell_of({r.max_x, r.max_y});
  for (int y = std::max(lo.y, 0); y <= std::min(hi.y, height_ - 1); ++y) {
    for (int x = std::max(lo.x, 0); x <= std::min(hi.x, width_ - 1); ++x) {
      if (r.contains(center_of({x, y}), 0.0)) set_occupied({x, y});
    }
  }
}

Cell OccupancyGrid::cell_of(Vec2 p) const {
  return {static_cast<int>(std::floor(p.x / resolution_)), static_cast<int>(std::floor(p.y / resolution_))};
}

Vec2 OccupancyGrid::center_of(Cell c) const {
  return {(c.x + 0.5) * resolution_, (c.y + 0.5) * resolution_};
}

const Zone* WorldModel::find_zone(std::string_view name) const {
  for (const auto& z : zones) {
    if (z.name == name) return &z;
  }
  return nullptr;
}

const ObjectRecord* WorldModel::find_object(std::string_view id) const {
  auto it = objects.find(std::string(id));
  return it == objects.end() ? nullptr : &it->second;
}

ObjectRecord* WorldModel::find_object(std::string_view id) {
  auto it = objects.find(std::string(id));
  return it == objects.end() ? nullptr : &it->second;
}

const Zone* WorldModel::zone_at(Vec2 p) const {
  for (const auto& z : zones) {
    if (z.footprint.contains(p)) return &z;
  }
  return nullptr;
}

bool WorldModel::operator==(const WorldModel& o) const {
  bool grids_equal = (grid == o.grid) || (grid && o.grid && *grid == *o.grid);
  return grids_equal && zones == o.zones && objects == o.objects && robot == o.robot && clock == o.clock;
}

}  // namespace butler::world
