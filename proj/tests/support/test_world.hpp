#pragma once

// Small hand-built worlds for unit tests.

#include <filesystem>
#include <string>

#include "butler/behavior/patterns.hpp"
#include "butler/behavior/planner.hpp"
#include "butler/world/scenario.hpp"
#include "butler/world/world_model.hpp"

namespace butler::testing {

inline std::filesystem::path data_dir() { return BUTLER_DATA_DIR; }

inline world::Scenario fixture(const std::string& task) {
  return world::load_scenario_file(data_dir() / "scenarios" / (task + ".json"));
}

inline std::shared_ptr<behavior::RulePlanner> rule_planner() {
  return std::make_shared<behavior::RulePlanner>(behavior::load_pattern_table(data_dir() / "patterns.json"));
}

inline world::ObjectRecord make_object(std::string id, std::string name, world::Vec2 pose, world::ParentRef parent,
                                       double top = 0.85, std::string category = "thing") {
  world::ObjectRecord o;
  o.id = std::move(id);
  o.name = std::move(name);
  o.category = std::move(category);
  o.pose = pose;
  o.top_height = world::Height::from_meters(top);
  o.parent = std::move(parent);
  return o;
}

/// 4 x 3 m room: a table (surface, 0.75 m) on the left, a box-shaped cupboard
/// (appliance with a closed container) on the right, robot in the middle.
inline world::WorldModel small_world() {
  using namespace world;
  WorldModel w;
  Zone table;
  table.name = "table";
  table.footprint = {0.2, 0.2, 1.0, 0.8};
  table.waypoint = {0.6, 1.3, 0.0};
  table.kind = ZoneKind::surface;
  table.height = Height::from_meters(0.75);
  Zone cupboard;
  cupboard.name = "cupboard";
  cupboard.footprint = {3.0, 0.2, 3.8, 0.8};
  cupboard.waypoint = {3.4, 1.3, 0.0};
  cupboard.kind = ZoneKind::appliance;
  Zone hall;
  hall.name = "hall";
  hall.footprint = {1.6, 2.0, 2.4, 2.8};
  hall.waypoint = {2.0, 2.4, 0.0};
  hall.kind = ZoneKind::region;
  w.zones = {table, cupboard, hall};

  auto grid = std::make_shared<OccupancyGrid>(0.05, 80, 60);
  grid->fill_rect(table.footprint);
  grid->fill_rect(cupboard.footprint);
  w.grid = grid;

  auto box = make_object("box", "box", {3.4, 0.5}, ParentRef::floor(), 1.0, "furniture");
  box.is_container = true;
  box.is_open = false;
  box.footprint_radius = 0.3;
  w.objects.emplace(box.id, box);
  auto apple = make_object("apple", "apple", {0.4, 0.5}, ParentRef::surface("table"), 0.83, "fruit");
  apple.attributes["color"] = "red";
  w.objects.emplace(apple.id, apple);
  auto cup = make_object("cup", "cup", {0.8, 0.5}, ParentRef::surface("table"), 0.85, "dishware");
  cup.synonyms = {"mug"};
  cup.attributes = {{"color", "blue"}, {"clean", "yes"}};
  w.objects.emplace(cup.id, cup);
  auto tea = make_object("tea", "tea box", {3.3, 0.5}, ParentRef::container("box"), 0.2, "box");
  tea.attributes = {{"color", "green"}, {"description", "A box of green tea"}};
  w.objects.emplace(tea.id, tea);

  w.robot.base = {2.0, 1.5, 0.0};
  return w;
}

}  // namespace butler::testing
