#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace butler::world {

using ObjectId = std::string;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2&) const = default;
};

double distance(Vec2 a, Vec2 b);

struct BasePose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians
  Vec2 position() const { return {x, y}; }
  bool operator==(const BasePose&) const = default;
};

/// Axis-aligned rectangle in meters.
struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool contains(Vec2 p, double eps = 1e-9) const;
  Vec2 center() const { return {(min_x + max_x) / 2.0, (min_y + max_y) / 2.0}; }
  /// Euclidean distance from p to the closest point of the rectangle (0 inside).
  double distance_to(Vec2 p) const;
  bool operator==(const Rect&) const = default;
};

/// Heights are kept in integer millimetres so that clearance arithmetic
/// (top + 200 mm) is exact.
struct Height {
  std::int64_t mm = 0;

  static Height from_meters(double m);
  double meters() const { return static_cast<double>(mm) / 1000.0; }
  Height operator+(Height o) const { return Height{mm + o.mm}; }
  Height operator-(Height o) const { return Height{mm - o.mm}; }
  auto operator<=>(const Height&) const = default;
};

enum class ZoneKind { surface, appliance, region };

std::string_view to_string(ZoneKind k);
std::optional<ZoneKind> zone_kind_from_string(std::string_view s);

struct PlacementPoint {
  Vec2 xy;
  Height height;
  bool operator==(const PlacementPoint&) const = default;
};

struct Zone {
  std::string name;
  Rect footprint;
  BasePose waypoint;
  ZoneKind kind = ZoneKind::region;
  Height height;                           // support surface height (surfaces)
  std::optional<PlacementPoint> placement; // predefined drop point for fixed locations
  bool operator==(const Zone&) const = default;
};

/// Exclusive parent of an object. A surface parent names either a zone or a
/// supporting object (a plate); a container parent names a container object.
struct ParentRef {
  enum class Kind { surface, container, gripper, floor };

  Kind kind = Kind::floor;
  std::string ref;

  static ParentRef floor() { return {Kind::floor, {}}; }
  static ParentRef gripper() { return {Kind::gripper, {}}; }
  static ParentRef surface(std::string name) { return {Kind::surface, std::move(name)}; }
  static ParentRef container(ObjectId id) { return {Kind::container, std::move(id)}; }

  /// "floor", "gripper", "surface:<name>", "container:<id>"
  std::string to_string() const;
  static std::optional<ParentRef> parse(std::string_view s);

  bool operator==(const ParentRef&) const = default;
};

struct ObjectRecord {
  ObjectId id;
  std::string name;
  std::string category;
  std::vector<std::string> synonyms;
  std::map<std::string, std::string> attributes;
  Vec2 pose;
  double footprint_radius = 0.05;
  Height top_height;
  bool is_container = false;
  std::optional<bool> is_open;  // containers only
  ParentRef parent;
  bool operator==(const ObjectRecord&) const = default;
};

struct RobotState {
  BasePose base;
  std::optional<ObjectId> holding;
  double reach_radius = 1.0;
  bool operator==(const RobotState&) const = default;
};

struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(double resolution, int width, int height);

  double resolution() const { return resolution_; }
  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  bool occupied(Cell c) const;
  bool free(Cell c) const { return in_bounds(c) && !occupied(c); }
  void set_occupied(Cell c, bool value = true);
  /// Marks every cell whose center lies inside r.
  void fill_rect(const Rect& r);

  Cell cell_of(Vec2 p) const;
  Vec2 center_of(Cell c) const;
  Rect bounds() const { return {0.0, 0.0, width_ * resolution_, height_ * resolution_}; }

  bool operator==(const OccupancyGrid&) const = default;

 private:
  double resolution_ = 0.05;
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> cells_;
};

struct SimClock {
  std::int64_t ms = 0;
  bool operator==(const SimClock&) const = default;
};

/// Ground-truth household state. The grid is immutable after load and shared
/// between snapshots.
struct WorldModel {
  std::vector<Zone> zones;
  std::map<ObjectId, ObjectRecord> objects;
  RobotState robot;
  std::shared_ptr<const OccupancyGrid> grid;
  SimClock clock;

  const Zone* find_zone(std::string_view name) const;
  const ObjectRecord* find_object(std::string_view id) const;
  ObjectRecord* find_object(std::string_view id);
  /// First zone (in declaration order) whose footprint contains p.
  const Zone* zone_at(Vec2 p) const;

  bool operator==(const WorldModel& o) const;
};

// Goal predicates evaluated by the benchmark harness.
struct ObjectAt {
  ObjectId id;
  std::string zone;
  bool operator==(const ObjectAt&) const = default;
};
struct ParentIs {
  ObjectId id;
  ParentRef parent;
  bool operator==(const ParentIs&) const = default;
};
struct ContainerOpen {
  std::string name;
  bool open = true;
  bool operator==(const ContainerOpen&) const = default;
};
struct AnsweredContains {
  std::string substring;
  bool operator==(const AnsweredContains&) const = default;
};
using GoalPredicate = std::variant<ObjectAt, ParentIs, ContainerOpen, AnsweredContains>;

}  // namespace butler::world
