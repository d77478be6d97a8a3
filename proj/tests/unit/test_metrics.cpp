#include <doctest.h>

#include <random>

#include "butler/session/metrics.hpp"
#include "butler/session/script.hpp"
#include "butler/session/suite.hpp"
#include "support/test_world.hpp"

using namespace butler;
using namespace butler::session;
using butler::testing::data_dir;
using butler::testing::fixture;

namespace {

ReplayConfig replay_config() {
  ReplayConfig cfg;
  cfg.planner = butler::testing::rule_planner();
  return cfg;
}

Script script_for(const std::string& task) { return load_script_file(data_dir() / "scripts" / (task + ".json")); }

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("interaction formatting") {
  CHECK(format_interactions(2, 1) == "3 (2+1)");
  CHECK(format_interactions(1, 0) == "1 (1+0)");
  CHECK(format_interactions(1.5, 0.8) == "2.3 (1.5+0.8)");
}

TEST_CASE("three identical runs aggregate to one row") {
  MetricsRecord r{"t01", true, true, 119700, 2, 1};
  auto rep = report_metrics({r, r, r});
  CHECK(rep.table.find("3/3") != std::string::npos);
  CHECK(rep.table.find("119.7s") != std::string::npos);
  CHECK(rep.table.find("3 (2+1)") != std::string::npos);
  auto rows = aggregate({r, r, r});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].runs == 3);
}

TEST_CASE("no successes gives zero percent and no time") {
  MetricsRecord r{"t04", false, true, 0, 2, 1};
  auto rep = report_metrics({r});
  CHECK(rep.summary.at("mean").at("task_sr") == 0.0);
  CHECK(rep.table.find("0.0%") != std::string::npos);
  CHECK(rep.table.find("100.0%") != std::string::npos);
  CHECK_THROWS_AS(report_metrics({}), std::invalid_argument);
}

TEST_CASE("summary json gives back the records") {
  std::vector<MetricsRecord> recs = {{"t01", true, true, 1000, 2, 1}, {"t02", false, false, 0, 1, 0},
                                     {"t01", false, true, 0, 3, 2}};
  auto rep = report_metrics(recs);
  auto back = records_from_summary(nlohmann::json::parse(rep.summary.dump()));
  CHECK(back == recs);
  CHECK(record_from_json(record_to_json(recs[0])) == recs[0]);
}

TEST_CASE("script parsing") {
  auto s = parse_script(nlohmann::json::parse(R"([{"at_ms":0,"chat":"hi"},{"at_ms":5,"point":{"xy":[1,2]}}])"));
  CHECK(s.events.size() == 2);
  CHECK_THROWS_AS(parse_script(nlohmann::json::parse(R"([{"at_ms":5,"chat":"a"},{"at_ms":4,"chat":"b"}])")), ScriptError);
  CHECK_THROWS_AS(parse_script(nlohmann::json::parse(R"([{"at_ms":0,"dance":1}])")), ScriptError);
  CHECK(script_for("t01").expected_voice == 2);
}

TEST_CASE("replay is deterministic") {
  auto a = run_script(fixture("t03"), script_for("t03"), replay_config());
  auto b = run_script(fixture("t03"), script_for("t03"), replay_config());
  CHECK(a.record == b.record);
  CHECK(a.transcript == b.transcript);
  CHECK(a.record.task_success);
  CHECK(a.record.voice == 2);
  CHECK(a.record.gesture == 1);
}

TEST_CASE("a failed grasp still counts as a correct plan") {
  auto cfg = replay_config();
  cfg.session.skills.failure_probability[skills::SkillKind::pick] = 1.0;
  auto r = run_script(fixture("t01"), script_for("t01"), cfg);
  CHECK(r.record.planning_success);
  CHECK_FALSE(r.record.task_success);
}

TEST_CASE("a wrong expectation without a fault is a script error") {
  auto s = script_for("t09");
  s.events.push_back({5000, ExpectEvent{"answer", "Yes."}});
  CHECK_THROWS_AS(run_script(fixture("t09"), s, replay_config()), ScriptError);
}

TEST_CASE("slow episodes miss the budget") {
  auto cfg = replay_config();
  cfg.budget_ms = 10000;
  auto r = run_script(fixture("t01"), script_for("t01"), cfg);
  CHECK_FALSE(r.record.task_success);
}

TEST_CASE("planning success never trails task success") {
  auto tasks = load_suite(data_dir() / "scenarios", data_dir() / "scripts");
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    SuiteOptions opts;
    opts.replay = replay_config();
    opts.replay.session.skills.seed = rng();
    for (auto k : skills::all_skills()) opts.replay.session.skills.failure_probability[k] = 0.1;
    opts.replay.session.skills.detection_noise = 0.1;
    for (const auto& r : run_suite(tasks, opts)) CHECK(r.record.planning_success >= r.record.task_success);
  }
}

TEST_CASE("random scripts count every message") {
  std::mt19937_64 rng(31);
  const std::vector<std::string> chats = {"go to the desk", "pick this", "bring the tool to the table", "what is this"};
  const std::vector<std::string> objects = {"hammer", "screwdriver", "lamp", "plate"};
  for (int trial = 0; trial < 30; ++trial) {
    Script s;
    s.task_id = "rand";
    std::int64_t t = 0;
    int v = 0, g = 0;
    for (int i = 0; i < 8; ++i) {
      t += static_cast<std::int64_t>(rng() % 3000);
      if (rng() % 2) {
        s.events.push_back({t, ChatEvent{chats[rng() % chats.size()]}});
        ++v;
      } else {
        s.events.push_back({t, PointEvent{objects[rng() % objects.size()], std::nullopt}});
        ++g;
      }
    }
    auto r = run_script(fixture("t10"), s, replay_config());
    CHECK(r.record.voice == v);
    CHECK(r.record.gesture == g);
  }
}

}  // TEST_SUITE
