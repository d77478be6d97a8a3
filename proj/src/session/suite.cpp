#include "butler/session/suite.hpp"

#include <algorithm>
#include <set>

namespace butler::session {

namespace fs = std::filesystem;

namespace {

std::set<std::string> json_stems(const fs::path& dir) {
  std::set<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") out.insert(e.path().stem().string());
  }
  return out;
}

}  // namespace

std::vector<SuiteTask> load_suite(const fs::path& scenario_dir, const fs::path& script_dir) {
  auto scenarios = json_stems(scenario_dir);
  auto scripts = json_stems(script_dir);
  for (const auto& s : scenarios)
    if (!scripts.contains(s)) throw ScriptError("scenario " + s + " has no script");
  for (const auto& s : scripts)
    if (!scenarios.contains(s)) throw ScriptError("script " + s + " has no scenario");

  std::vector<SuiteTask> out;
  for (const auto& id : scenarios) {
    SuiteTask t;
    t.scenario = world::load_scenario_file(scenario_dir / (id + ".json"));
    t.script = load_script_file(script_dir / (id + ".json"));
    t.task_id = t.script.task_id.empty() ? id : t.script.task_id;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<ReplayResult> run_suite(const std::vector<SuiteTask>& tasks, const SuiteOptions& opts) {
  std::vector<ReplayResult> out;
  for (int r = 0; r < opts.repeat; ++r) {
    for (const auto& t : tasks) {
      ReplayConfig cfg = opts.replay;
      cfg.session.skills.seed += static_cast<std::uint64_t>(r);
      if (auto it = opts.task_failures.find(t.task_id); it != opts.task_failures.end()) {
        for (const auto& [k, p] : it->second) cfg.session.skills.failure_probability[k] = p;
      }
      out.push_back(run_script(t.scenario, t.script, cfg));
    }
  }
  // Group runs of the same task together, keeping task order.
  std::stable_sort(out.begin(), out.end(),
                   [](const ReplayResult& a, const ReplayResult& b) { return a.record.task_id < b.record.task_id; });
  return out;
}

}  // namespace butler::session
