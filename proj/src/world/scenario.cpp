#include "butler/world/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "butler/world/queries.hpp"

namespace butler::world {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key + ": missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path + ": expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path + ": expected an integer");
  return j.get<int>();
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path + ": expected a string");
  return j.get<std::string>();
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw SchemaError(path + ": expected a boolean");
  return j.get<bool>();
}

const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path + ": expected an array");
  return j;
}

std::vector<double> numbers(const json& j, std::size_t n, const std::string& path) {
  array(j, path);
  if (j.size() != n) throw SchemaError(path + ": expected " + std::to_string(n) + " numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Rect rect_from(const json& j, const std::string& path) {
  auto v = numbers(j, 4, path);
  if (v[0] > v[2] || v[1] > v[3]) throw SchemaError(path + ": expected [min_x, min_y, max_x, max_y]");
  return {v[0], v[1], v[2], v[3]};
}

BasePose pose3_from(const json& j, const std::string& path) {
  auto v = numbers(j, 3, path);
  return {v[0], v[1], v[2]};
}

Vec2 vec2_from(const json& j, const std::string& path) {
  auto v = numbers(j, 2, path);
  return {v[0], v[1]};
}

json rect_json(const Rect& r) { return json::array({r.min_x, r.min_y, r.max_x, r.max_y}); }

void check(bool ok, const std::string& what) {
  if (!ok) throw ConsistencyError(what);
}

OccupancyGrid build_grid(double resolution, int width, int height, const std::vector<Cell>& occupied,
                         const std::vector<Zone>& zones) {
  OccupancyGrid grid(resolution, width, height);
  for (Cell c : occupied) grid.set_occupied(c);
  for (const auto& z : zones) {
    if (z.kind != ZoneKind::region) grid.fill_rect(z.footprint);
  }
  return grid;
}

}  // namespace

json goal_to_json(const GoalPredicate& g) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ObjectAt>) {
          return {{"type", "object_at"}, {"object", p.id}, {"zone", p.zone}};
        } else if constexpr (std::is_same_v<T, ParentIs>) {
          return {{"type", "parent_is"}, {"object", p.id}, {"parent", p.parent.to_string()}};
        } else if constexpr (std::is_same_v<T, ContainerOpen>) {
          return {{"type", "container_open"}, {"name", p.name}, {"open", p.open}};
        } else {
          return {{"type", "answered_contains"}, {"substring", p.substring}};
        }
      },
      g);
}

GoalPredicate goal_from_json(const json& j, const std::string& path) {
  auto type = string(require(j, "type", path), path + ".type");
  if (type == "object_at") {
    return ObjectAt{string(require(j, "object", path), path + ".object"),
                    string(require(j, "zone", path), path + ".zone")};
  }
  if (type == "parent_is") {
    auto text = string(require(j, "parent", path), path + ".parent");
    auto parent = ParentRef::parse(text);
    if (!parent) throw SchemaError(path + ".parent: malformed parent reference '" + text + "'");
    return ParentIs{string(require(j, "object", path), path + ".object"), *parent};
  }
  if (type == "container_open") {
    return ContainerOpen{string(require(j, "name", path), path + ".name"),
                         boolean(require(j, "open", path), path + ".open")};
  }
  if (type == "answered_contains") {
    return AnsweredContains{string(require(j, "substring", path), path + ".substring")};
  }
  throw SchemaError(path + ".type: unknown goal type '" + type + "'");
}

void validate_world(const WorldModel& w) {
  check(w.grid != nullptr, "world has no occupancy grid");
  const OccupancyGrid& grid = *w.grid;
  const Rect bounds = grid.bounds();

  std::set<std::string> names;
  for (const auto& z : w.zones) {
    check(!z.name.empty(), "zone with empty name");
    check(names.insert(z.name).second, "duplicate zone name '" + z.name + "'");
    check(bounds.contains(Vec2{z.footprint.min_x, z.footprint.min_y}) &&
              bounds.contains(Vec2{z.footprint.max_x, z.footprint.max_y}),
          "zone '" + z.name + "' footprint outside the grid");
    check(grid.free(grid.cell_of(z.waypoint.position())),
          "waypoint of zone '" + z.name + "' lies on an occupied or out-of-bounds cell");
    if (z.placement) {
      check(z.footprint.contains(z.placement->xy), "placement point of zone '" + z.name + "' outside its footprint");
    }
  }

  int in_gripper = 0;
  for (const auto& [id, obj] : w.objects) {
    check(id == obj.id, "object key '" + id + "' does not match its id");
    check(obj.top_height.mm > 0, "object '" + id + "' must have top_height > 0");
    check(obj.footprint_radius >= 0.0, "object '" + id + "' has negative footprint radius");
    check(obj.is_container == obj.is_open.has_value(),
          "object '" + id + "': is_open must be present exactly for containers");
    Rect fp{obj.pose.x - obj.footprint_radius, obj.pose.y - obj.footprint_radius,
            obj.pose.x + obj.footprint_radius, obj.pose.y + obj.footprint_radius};
    check(bounds.contains(Vec2{fp.min_x, fp.min_y}) && bounds.contains(Vec2{fp.max_x, fp.max_y}),
          "object '" + id + "' footprint outside the grid");

    switch (obj.parent.kind) {
      case ParentRef::Kind::floor:
        break;
      case ParentRef::Kind::gripper:
        ++in_gripper;
        check(w.robot.holding == id, "object '" + id + "' is in the gripper but the robot is not holding it");
        break;
      case ParentRef::Kind::surface: {
        const ObjectRecord* support = w.find_object(obj.parent.ref);
        check(support != nullptr || w.find_zone(obj.parent.ref) != nullptr,
              "object '" + id + "' rests on unknown surface '" + obj.parent.ref + "'");
        check(obj.parent.ref != id, "object '" + id + "' rests on itself");
        break;
      }
      case ParentRef::Kind::container: {
        const ObjectRecord* c = w.find_object(obj.parent.ref);
        check(c != nullptr && c->is_container,
              "object '" + id + "' is inside '" + obj.parent.ref + "', which is not a container");
        check(obj.parent.ref != id, "object '" + id + "' contains itself");
        if (const Zone* cz = w.zone_at(c->pose)) {
          check(cz->footprint.contains(obj.pose),
                "object '" + id + "' lies outside the zone of its container '" + c->id + "'");
        } else {
          check(distance(obj.pose, c->pose) <= c->footprint_radius + 1e-9,
                "object '" + id + "' lies outside its container '" + c->id + "'");
        }
        break;
      }
    }
    check(!has_ancestor(w, id, id), "object '" + id + "' is part of a containment cycle");
  }
  check(in_gripper <= 1, "more than one object in the gripper");
  if (w.robot.holding) {
    const ObjectRecord* held = w.find_object(*w.robot.holding);
    check(held && held->parent.kind == ParentRef::Kind::gripper, "robot holds an object whose parent is not the gripper");
  }
  check(grid.free(grid.cell_of(w.robot.base.position())), "robot base lies on an occupied cell");
  check(w.robot.reach_radius > 0.0, "reach_radius must be positive");
}

Scenario load_scenario(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("$: expected an object");

  Scenario out;
  WorldModel& w = out.world;

  const json& g = require(doc, "grid", "$");
  double resolution = number(require(g, "resolution", "$.grid"), "$.grid.resolution");
  int width = integer(require(g, "width", "$.grid"), "$.grid.width");
  int height = integer(require(g, "height", "$.grid"), "$.grid.height");
  if (resolution <= 0 || width <= 0 || height <= 0) throw SchemaError("$.grid: dimensions must be positive");
  std::vector<Cell> occupied;
  if (auto it = g.find("occupied"); it != g.end()) {
    array(*it, "$.grid.occupied");
    for (std::size_t i = 0; i < it->size(); ++i) {
      std::string p = "$.grid.occupied[" + std::to_string(i) + "]";
      const json& c = (*it)[i];
      if (!c.is_array() || c.size() != 2) throw SchemaError(p + ": expected [x, y]");
      occupied.push_back({integer(c[0], p + "[0]"), integer(c[1], p + "[1]")});
    }
  }

  const json& zones = array(require(doc, "zones", "$"), "$.zones");
  for (std::size_t i = 0; i < zones.size(); ++i) {
    std::string p = "$.zones[" + std::to_string(i) + "]";
    const json& zj = zones[i];
    Zone z;
    z.name = string(require(zj, "name", p), p + ".name");
    z.footprint = rect_from(require(zj, "footprint", p), p + ".footprint");
    z.waypoint = pose3_from(require(zj, "waypoint", p), p + ".waypoint");
    auto kind = string(require(zj, "kind", p), p + ".kind");
    auto parsed = zone_kind_from_string(kind);
    if (!parsed) throw SchemaError(p + ".kind: unknown zone kind '" + kind + "'");
    z.kind = *parsed;
    if (auto it = zj.find("height"); it != zj.end()) z.height = Height::from_meters(number(*it, p + ".height"));
    if (auto it = zj.find("placement"); it != zj.end()) {
      auto v = numbers(*it, 3, p + ".placement");
      z.placement = PlacementPoint{{v[0], v[1]}, Height::from_meters(v[2])};
    }
    w.zones.push_back(std::move(z));
  }

  w.grid = std::make_shared<const OccupancyGrid>(build_grid(resolution, width, height, occupied, w.zones));

  const json& objects = array(require(doc, "objects", "$"), "$.objects");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    std::string p = "$.objects[" + std::to_string(i) + "]";
    const json& oj = objects[i];
    ObjectRecord o;
    o.id = string(require(oj, "id", p), p + ".id");
    o.name = string(require(oj, "name", p), p + ".name");
    o.category = string(require(oj, "category", p), p + ".category");
    const json& syn = array(require(oj, "synonyms", p), p + ".synonyms");
    for (std::size_t k = 0; k < syn.size(); ++k) o.synonyms.push_back(string(syn[k], p + ".synonyms[" + std::to_string(k) + "]"));
    const json& attrs = require(oj, "attributes", p);
    if (!attrs.is_object()) throw SchemaError(p + ".attributes: expected an object");
    for (auto it = attrs.begin(); it != attrs.end(); ++it) o.attributes[it.key()] = string(it.value(), p + ".attributes." + it.key());
    o.pose = vec2_from(require(oj, "pose", p), p + ".pose");
    o.footprint_radius = number(require(oj, "footprint_radius", p), p + ".footprint_radius");
    o.top_height = Height::from_meters(number(require(oj, "top_height", p), p + ".top_height"));
    o.is_container = boolean(require(oj, "is_container", p), p + ".is_container");
    if (auto it = oj.find("is_open"); it != oj.end() && !it->is_null()) o.is_open = boolean(*it, p + ".is_open");
    auto parent_text = string(require(oj, "parent", p), p + ".parent");
    auto parent = ParentRef::parse(parent_text);
    if (!parent) throw SchemaError(p + ".parent: malformed parent reference '" + parent_text + "'");
    o.parent = *parent;
    if (!w.objects.emplace(o.id, o).second) throw ConsistencyError("duplicate object id '" + o.id + "'");
  }

  if (auto it = doc.find("robot"); it != doc.end()) {
    const json& rj = *it;
    w.robot.base = pose3_from(require(rj, "pose", "$.robot"), "$.robot.pose");
    if (auto r = rj.find("reach_radius"); r != rj.end()) w.robot.reach_radius = number(*r, "$.robot.reach_radius");
    if (auto h = rj.find("holding"); h != rj.end() && !h->is_null()) w.robot.holding = string(*h, "$.robot.holding");
  } else {
    w.robot.base = {resolution / 2.0, resolution / 2.0, 0.0};
  }

  if (auto it = doc.find("goals"); it != doc.end()) {
    array(*it, "$.goals");
    for (std::size_t i = 0; i < it->size(); ++i) out.goals.push_back(goal_from_json((*it)[i], "$.goals[" + std::to_string(i) + "]"));
  }

  w.clock = SimClock{0};
  validate_world(w);
  return out;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

json scenario_to_json(const Scenario& s) {
  const WorldModel& w = s.world;
  const OccupancyGrid& grid = *w.grid;

  // Only obstacles not implied by zone footprints are written out.
  OccupancyGrid implied(grid.resolution(), grid.width(), grid.height());
  for (const auto& z : w.zones) {
    if (z.kind != ZoneKind::region) implied.fill_rect(z.footprint);
  }
  json occupied = json::array();
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.occupied({x, y}) && !implied.occupied({x, y})) occupied.push_back({x, y});
    }
  }

  json zones = json::array();
  for (const auto& z : w.zones) {
    json zj = {{"name", z.name},
               {"footprint", rect_json(z.footprint)},
               {"waypoint", {z.waypoint.x, z.waypoint.y, z.waypoint.heading}},
               {"kind", std::string(to_string(z.kind))},
               {"height", z.height.meters()}};
    if (z.placement) zj["placement"] = {z.placement->xy.x, z.placement->xy.y, z.placement->height.meters()};
    zones.push_back(std::move(zj));
  }

  json objects = json::array();
  for (const auto& [id, o] : w.objects) {
    json attrs = json::object();
    for (const auto& [k, v] : o.attributes) attrs[k] = v;
    json oj = {{"id", o.id},
               {"name", o.name},
               {"category", o.category},
               {"synonyms", o.synonyms},
               {"attributes", attrs},
               {"pose", {o.pose.x, o.pose.y}},
               {"footprint_radius", o.footprint_radius},
               {"top_height", o.top_height.meters()},
               {"is_container", o.is_container},
               {"parent", o.parent.to_string()}};
    oj["is_open"] = o.is_open ? json(*o.is_open) : json(nullptr);
    objects.push_back(std::move(oj));
  }

  json goals = json::array();
  for (const auto& g : s.goals) goals.push_back(goal_to_json(g));

  json robot = {{"pose", {w.robot.base.x, w.robot.base.y, w.robot.base.heading}},
                {"reach_radius", w.robot.reach_radius},
                {"holding", w.robot.holding ? json(*w.robot.holding) : json(nullptr)}};

  return {{"grid", {{"resolution", grid.resolution()}, {"width", grid.width()}, {"height", grid.height()}, {"occupied", occupied}}},
          {"zones", zones},
          {"objects", objects},
          {"robot", robot},
          {"goals", goals}};
}

std::string serialize_scenario(const Scenario& s) { return scenario_to_json(s).dump(2); }

}  // namespace butler::world
