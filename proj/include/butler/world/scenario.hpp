#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "butler/world/world_model.hpp"

namespace butler::world {

/// A field is missing or has the wrong JSON type. The message carries the path.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The document parses but violates a world invariant.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Scenario {
  WorldModel world;
  std::vector<GoalPredicate> goals;
  bool operator==(const Scenario&) const = default;
};

Scenario load_scenario(std::string_view document);
Scenario load_scenario_file(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const Scenario& s);
std::string serialize_scenario(const Scenario& s);

nlohmann::json goal_to_json(const GoalPredicate& g);
GoalPredicate goal_from_json(const nlohmann::json& j, const std::string& path = "goal");

/// Checks every world invariant; throws ConsistencyError naming the first violation.
void validate_world(const WorldModel& w);

}  // namespace butler::world
