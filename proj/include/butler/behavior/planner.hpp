#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <vector>

#include <json.hpp>

#include "butler/behavior/instruction.hpp"
#include "butler/common/json_backend.hpp"
#include "butler/behavior/patterns.hpp"
#include "butler/behavior/plan.hpp"
#include "butler/behavior/response.hpp"
#include "butler/world/world_model.hpp"

namespace butler::behavior {

struct HistoryEntry {
  std::string instruction;
  std::string plan;
  std::vector<std::string> outcomes;
};

struct PlannerContext {
  std::vector<std::string> known_locations;  // zone names
  std::vector<std::string> skills;           // signatures, e.g. "vqa(question, target?)"
  std::vector<HistoryEntry> history;
  /// object name/category/synonym -> zones it was last seen in
  std::map<std::string, std::vector<std::string>> location_directory;
  /// names open()/close() accept: container names and the zones holding them
  std::set<std::string> containers;
  /// zone whose waypoint the robot stands at, if any
  std::optional<std::string> current_zone;
  bool close_after_check = true;
};

const std::vector<std::string>& skill_signatures();

PlannerContext make_planner_context(const world::WorldModel& w, std::vector<HistoryEntry> history = {},
                                    bool close_after_check = true);

enum class PlanError { empty_instruction, unparseable_instruction, unknown_location };

struct PlanResult {
  std::optional<Plan> plan;
  Response response;
  std::optional<PlanError> error;
  int retries = 0;        // external planner re-prompts
  bool fallback = false;  // external planner fell back to rules
};

class Planner {
 public:
  virtual ~Planner() = default;
  virtual PlanResult generate(const Instruction& i, const PlannerContext& ctx, std::stop_token stop = {}) = 0;
};

/// Deterministic planner driven by a pattern table. Splits the instruction
/// into clauses on "and"/"then", matches each clause, then inserts move()
/// wherever the next target lives in a different zone than the robot.
class RulePlanner : public Planner {
 public:
  explicit RulePlanner(PatternTable table) : table_(std::move(table)) {}
  PlanResult generate(const Instruction& i, const PlannerContext& ctx, std::stop_token stop = {}) override;
  const PatternTable& table() const { return table_; }

 private:
  PatternTable table_;
};

/// One-line ack describing what the plan will do.
std::string describe_plan(const std::vector<skills::PrimitiveAction>& steps);

using butler::BackendUnreachable;
using butler::JsonBackend;

struct PromptTemplate {
  std::string version;
  std::string text;
};

/// Loads a prompt file whose first line is "version: <v>".
PromptTemplate load_prompt(const std::filesystem::path& path);

class ExternalPlanner : public Planner {
 public:
  static constexpr int kMaxRetries = 2;

  ExternalPlanner(std::shared_ptr<JsonBackend> backend, std::shared_ptr<RulePlanner> fallback, PromptTemplate prompt = {});
  PlanResult generate(const Instruction& i, const PlannerContext& ctx, std::stop_token stop = {}) override;

  static nlohmann::json make_request(const Instruction& i, const PlannerContext& ctx, const PromptTemplate& prompt);

 private:
  PlanResult fall_back(const Instruction& i, const PlannerContext& ctx, int retries, const std::string& why);

  std::shared_ptr<JsonBackend> backend_;
  std::shared_ptr<RulePlanner> fallback_;
  PromptTemplate prompt_;
};

}  // namespace butler::behavior
