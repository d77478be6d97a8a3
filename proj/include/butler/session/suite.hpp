#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "butler/session/script.hpp"
#include "butler/world/scenario.hpp"

namespace butler::session {

struct SuiteTask {
  std::string task_id;
  world::Scenario scenario;
  Script script;
};

/// Pairs <dir>/scenarios/<id>.json with <dir>/scripts/<id>.json, sorted by id.
/// A scenario without a script (or the reverse) is an error.
std::vector<SuiteTask> load_suite(const std::filesystem::path& scenario_dir, const std::filesystem::path& script_dir);

struct SuiteOptions {
  int repeat = 1;
  ReplayConfig replay;
  /// Failure probabilities for selected tasks only, keyed by task id.
  std::map<std::string, std::map<skills::SkillKind, double>> task_failures;
};

/// Replays every task `repeat` times. Run r uses seed replay.session.skills.seed + r.
std::vector<ReplayResult> run_suite(const std::vector<SuiteTask>& tasks, const SuiteOptions& opts);

}  // namespace butler::session
