// butler: serve a live session, replay scripted tasks, or run the benchmark.
#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "butler/behavior/plan.hpp"
#include "butler/behavior/planner.hpp"
#include "butler/net/backends.hpp"
#include "butler/session/metrics.hpp"
#include "butler/session/script.hpp"
#include "butler/session/server.hpp"
#include "butler/session/suite.hpp"
#include "butler/skills/json_vqa_backend.hpp"
#include "butler/world/scenario.hpp"

namespace fs = std::filesystem;
using namespace butler;

namespace {

std::atomic<bool> g_stop{false};

struct Common {
  std::string data_dir = BUTLER_DATA_DIR;
  std::string planner = "rule";
  std::string vqa;
  std::string mode = "combined";
  std::vector<std::string> pfail;  // skill=p
  double noise = 0.0;
  std::uint64_t seed = 0;
  bool close_after_check = true;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--data-dir", c.data_dir, "Pattern table and prompt directory");
  cmd->add_option("--planner", c.planner, "\"rule\", or tcp://host:port / http://host:port/path")
      ->envname("BUTLER_PLANNER_URL");
  cmd->add_option("--vqa", c.vqa, "External VQA endpoint (default: built-in oracle)");
  cmd->add_option("--mode", c.mode, "combined | voice_only | gesture_only");
  cmd->add_option("--pfail", c.pfail, "Injected failure, e.g. pick=1.0 (repeatable)");
  cmd->add_option("--noise", c.noise, "Detection noise epsilon");
  cmd->add_option("--seed", c.seed, "RNG seed")->envname("BUTLER_SEED");
  cmd->add_flag("!--keep-open", c.close_after_check, "Do not close containers after checking inside");
}

std::map<skills::SkillKind, double> parse_failures(const std::vector<std::string>& specs) {
  std::map<skills::SkillKind, double> out;
  for (const auto& s : specs) {
    auto eq = s.find('=');
    auto kind = skills::skill_from_string(s.substr(0, eq));
    if (!kind || eq == std::string::npos) throw CLI::ValidationError("--pfail", "expected skill=probability, got " + s);
    out[*kind] = std::stod(s.substr(eq + 1));
  }
  return out;
}

std::shared_ptr<behavior::RulePlanner> rule_planner(const Common& c) {
  return std::make_shared<behavior::RulePlanner>(behavior::load_pattern_table(fs::path(c.data_dir) / "patterns.json"));
}

std::shared_ptr<behavior::Planner> make_planner(const Common& c) {
  auto rule = rule_planner(c);
  if (c.planner == "rule") return rule;
  auto backend = net::make_json_backend(c.planner);
  auto prompt = behavior::load_prompt(fs::path(c.data_dir) / "planner_prompt.txt");
  return std::make_shared<behavior::ExternalPlanner>(backend, rule, prompt);
}

session::SessionConfig session_config(const Common& c) {
  session::SessionConfig cfg;
  auto mode = session::mode_from_string(c.mode);
  if (!mode) throw CLI::ValidationError("--mode", "unknown mode " + c.mode);
  cfg.mode = *mode;
  cfg.close_after_check = c.close_after_check;
  cfg.skills.failure_probability = parse_failures(c.pfail);
  cfg.skills.detection_noise = c.noise;
  cfg.skills.seed = c.seed;
  return cfg;
}

int cmd_serve(const Common& c, const std::string& scenario, const std::string& host, std::uint16_t port) {
  session::ServerConfig cfg;
  cfg.host = host;
  cfg.port = port;
  cfg.world = world::load_scenario_file(scenario).world;
  cfg.session = session_config(c);
  cfg.make_planner = [c] { return make_planner(c); };
  if (!c.vqa.empty()) cfg.vqa_backend = std::make_shared<skills::JsonVqaBackend>(net::make_json_backend(c.vqa));
  session::LiveServer server(std::move(cfg));
  server.start();
  std::cout << "listening on " << host << ":" << server.port() << " (ws path /session)" << std::endl;
  std::signal(SIGINT, [](int) { g_stop = true; });
  std::signal(SIGTERM, [](int) { g_stop = true; });
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return 0;
}

int cmd_replay(const Common& c, const std::string& scenario, const std::string& script, bool transcript) {
  session::ReplayConfig cfg;
  cfg.session = session_config(c);
  cfg.planner = make_planner(c);
  auto result = session::run_script(world::load_scenario_file(scenario), session::load_script_file(script), cfg);
  if (transcript)
    for (const auto& line : result.transcript) std::cout << line << "\n";
  std::cout << session::record_to_json(result.record).dump() << "\n";
  return result.record.task_success ? 0 : 1;
}

int cmd_bench(const Common& c, const std::string& dir, int repeat, const std::string& out,
              const std::vector<std::string>& fail_tasks) {
  auto tasks = session::load_suite(fs::path(dir) / "scenarios", fs::path(dir) / "scripts");
  session::SuiteOptions opts;
  opts.repeat = repeat;
  opts.replay.session = session_config(c);
  opts.replay.planner = make_planner(c);
  if (!fail_tasks.empty()) {
    // --pfail applies to the named tasks only.
    auto failures = opts.replay.session.skills.failure_probability;
    opts.replay.session.skills.failure_probability.clear();
    for (const auto& t : fail_tasks) opts.task_failures[t] = failures;
  }
  auto results = session::run_suite(tasks, opts);
  std::vector<session::MetricsRecord> records;
  for (const auto& r : results) records.push_back(r.record);
  auto report = session::report_metrics(records);
  std::cout << report.table;
  if (!out.empty()) {
    std::ofstream f(out);
    f << report.summary.dump(2) << "\n";
  }
  return 0;
}

int cmd_plan(const Common& c, const std::string& scenario, const std::string& text) {
  auto w = world::load_scenario_file(scenario).world;
  auto ctx = behavior::make_planner_context(w, {}, c.close_after_check);
  auto r = make_planner(c)->generate({text, 0, behavior::Modality::text}, ctx);
  if (r.plan) std::cout << behavior::serialize_plan(r.plan->steps) << "\n";
  std::cout << r.response.text << "\n";
  return r.plan ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Remote household robot assistant: live sessions and scripted benchmarks"};
  app.require_subcommand(1);
  Common common;

  auto* serve = app.add_subcommand("serve", "Serve sessions over TCP/WebSocket");
  add_common(serve, common);
  std::string scenario, host = "127.0.0.1";
  std::uint16_t port = 8765;
  serve->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks one)");

  auto* replay = app.add_subcommand("replay", "Replay one script on the simulated clock");
  add_common(replay, common);
  std::string script;
  bool transcript = false;
  replay->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  replay->add_option("--script", script, "Script JSON")->required()->check(CLI::ExistingFile);
  replay->add_flag("--transcript", transcript, "Print every server message");

  auto* bench = app.add_subcommand("bench", "Run the scripted task suite and print the metrics table");
  add_common(bench, common);
  std::string suite_dir = BUTLER_DATA_DIR, out;
  int repeat = 3;
  std::vector<std::string> fail_tasks;
  bench->add_option("--suite", suite_dir, "Directory with scenarios/ and scripts/");
  bench->add_option("--repeat", repeat, "Runs per task")->check(CLI::PositiveNumber);
  bench->add_option("--out", out, "Write the JSON summary here");
  bench->add_option("--fail-task", fail_tasks, "Apply --pfail only to these task ids");

  auto* plan = app.add_subcommand("plan", "Print the plan for one instruction");
  add_common(plan, common);
  std::string text;
  plan->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  plan->add_option("text", text, "Instruction")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*serve) return cmd_serve(common, scenario, host, port);
    if (*replay) return cmd_replay(common, scenario, script, transcript);
    if (*bench) return cmd_bench(common, suite_dir, repeat, out, fail_tasks);
    if (*plan) return cmd_plan(common, scenario, text);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
