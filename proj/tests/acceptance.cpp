// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "butler/behavior/plan.hpp"
#include "butler/perception/grounding.hpp"
#include "butler/session/server.hpp"
#include "butler/session/suite.hpp"
#include "butler/skills/path_planner.hpp"
#include "support/dijkstra.hpp"
#include "support/grammar_corpus.hpp"
#include "support/live_probe.hpp"
#include "support/random_grid.hpp"
#include "support/session_harness.hpp"
#include "support/star_property.hpp"
#include "support/test_world.hpp"
#include "support/world_fuzz.hpp"

using namespace butler;
using namespace std::chrono_literals;
using session::wire::Message;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

Verdict ok(std::string d) { return {true, std::move(d)}; }
Verdict fail(std::string d) { return {false, std::move(d)}; }

std::vector<session::SuiteTask> suite() {
  return session::load_suite(testing::data_dir() / "scenarios", testing::data_dir() / "scripts");
}

session::SuiteOptions suite_options() {
  session::SuiteOptions o;
  o.repeat = 3;
  o.replay.planner = testing::rule_planner();
  return o;
}

std::string pct(int num, int den) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", den ? 100.0 * num / den : 0.0);
  return buf;
}

Verdict benchmark() {
  auto tasks = suite();
  if (tasks.size() != 10) return fail(std::to_string(tasks.size()) + " tasks bundled, want 10");
  auto t0 = std::chrono::steady_clock::now();
  auto results = session::run_suite(tasks, suite_options());
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  int task_ok = 0, plan_ok = 0;
  std::string mismatch;
  for (const auto& r : results) {
    task_ok += r.record.task_success;
    plan_ok += r.record.planning_success;
    for (const auto& t : tasks) {
      if (t.task_id != r.record.task_id) continue;
      if (r.record.voice != t.script.expected_voice.value_or(-1) ||
          r.record.gesture != t.script.expected_gesture.value_or(-1)) {
        mismatch = t.task_id + " used " + std::to_string(r.record.voice) + "+" + std::to_string(r.record.gesture);
      }
    }
  }
  const int n = static_cast<int>(results.size());
  std::ostringstream d;
  d << "Task SR " << pct(task_ok, n) << ", Planning SR " << pct(plan_ok, n) << ", " << n << " runs in " << wall << " s";
  if (!mismatch.empty()) return fail(d.str() + "; interaction count off: " + mismatch);
  if (task_ok != n || plan_ok != n || wall >= 10.0) return fail(d.str());
  return ok(d.str() + ", V+G as scripted");
}

Verdict failure_mode() {
  auto opts = suite_options();
  opts.task_failures["t01"][skills::SkillKind::pick] = 1.0;
  auto results = session::run_suite(suite(), opts);
  int task_ok = 0, plan_ok = 0;
  for (const auto& r : results) {
    task_ok += r.record.task_success;
    plan_ok += r.record.planning_success;
  }
  const int n = static_cast<int>(results.size());
  std::string d = "pick p_fail=1.0 on t01: Task SR " + pct(task_ok, n) + ", Planning SR " + pct(plan_ok, n);
  bool good = n > 0 && plan_ok == n && task_ok * 10 == n * 9;
  return {good, d};
}

Verdict star_property() {
  auto rep = testing::run_star_property(1000, 99);
  std::string d = std::to_string(rep.cases) + " cases, " + std::to_string(rep.failures) + " failures";
  if (rep.failures || rep.cases != 1000) return fail(d + ": " + rep.first_failure);
  return ok(d);
}

Verdict grammar() {
  const std::string example = "[pick(*), placeon(\"plate\")]";
  auto p = behavior::parse_plan(example);
  using skills::PrimitiveAction;
  using skills::SkillKind;
  std::vector<PrimitiveAction> want = {{SkillKind::pick, {skills::Star{}}},
                                       {SkillKind::placeon, {skills::TextArg{"plate"}}}};
  if (p.steps != want || behavior::serialize_plan(p.steps) != example) return fail("example does not round-trip");

  testing::PlanGen gen(1234);
  for (int i = 0; i < 1000; ++i) {
    auto steps = gen.plan();
    auto text = behavior::serialize_plan(steps);
    if (behavior::parse_plan(text).steps != steps) return fail("round-trip broke on " + text);
  }

  const auto& corpus = testing::invalid_plan_corpus();
  int positioned = 0;
  for (const auto& s : corpus) {
    try {
      behavior::parse_plan(s);
      return fail("accepted invalid input " + s);
    } catch (const behavior::ParseError& e) {
      if (e.position() <= s.size()) ++positioned;
    }
  }
  if (corpus.size() != 50 || positioned != 50) return fail(std::to_string(positioned) + "/50 invalid inputs positioned");
  return ok("example byte-exact, 1000 round-trips, 50/50 invalid inputs positioned");
}

Verdict navigation() {
  std::mt19937_64 rng(20240513);
  int solvable = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto g = testing::random_grid(rng, 20, 20, 0.3);
    auto s = testing::random_free(rng, g), t = testing::random_free(rng, g);
    auto expected = testing::dijkstra_cells(g, s, t);
    if (!expected) {
      try {
        skills::plan_path(g, s, t);
        return fail("A* found a path Dijkstra could not");
      } catch (const skills::NoPath&) {
      }
      continue;
    }
    ++solvable;
    auto p = skills::plan_path(g, s, t);
    if (static_cast<int>(p.length()) != *expected) {
      return fail("trial " + std::to_string(trial) + ": A* " + std::to_string(p.length()) + " vs Dijkstra " +
                  std::to_string(*expected));
    }
  }
  return ok(std::to_string(solvable) + "/100 solvable grids, every length equal");
}

Verdict place_formula() {
  int checked = 0;
  for (const auto& task : suite()) {
    auto w = task.scenario.world;
    // Look inside closed containers too: the formula holds for every object.
    for (auto& [id, o] : w.objects)
      if (o.is_container) o.is_open = true;
    for (const auto& [id, o] : w.objects) {
      auto pose = perception::place_pose(w, perception::PlaceTarget{id});
      if ((pose.z - o.top_height).mm != 200) {
        return fail(task.task_id + "/" + id + ": clearance " + std::to_string((pose.z - o.top_height).mm) + " mm");
      }
      if (pose.x != o.pose.x || pose.y != o.pose.y) return fail(task.task_id + "/" + id + ": not centred");
      ++checked;
    }
  }
  return ok(std::to_string(checked) + " objects, clearance exactly 200 mm");
}

Verdict disambiguation() {
  using session::Phase;
  namespace wire = session::wire;
  testing::Harness h("t06");
  h.s.chat("move the cup to the kitchen counter");
  auto d = h.all<wire::Disambiguation>();
  if (h.s.phase() != Phase::awaiting_disambiguation || d.size() != 1) return fail("no disambiguation on two cups");
  if (d[0].prompt != "Which one are you referring to?") return fail("prompt was '" + d[0].prompt + "'");
  h.point_at("apple");
  if (h.s.phase() != Phase::awaiting_disambiguation) return fail("a non-candidate point was accepted");
  h.point_at("cup_blue");
  if (h.s.phase() != Phase::idle ||
      h.s.world().objects.at("cup_blue").parent != world::ParentRef::surface("kitchen counter")) {
    return fail("did not resume on the candidate");
  }

  testing::Harness t("t06");
  t.s.chat("move the cup to the kitchen counter");
  auto start = t.s.now();
  t.s.advance_to(start + 59999);
  if (t.s.phase() != Phase::awaiting_disambiguation) return fail("gave up before 60 s");
  t.s.advance_to(start + 60000);
  if (t.s.phase() != Phase::idle) return fail("still waiting at 60 s");
  return ok("exact prompt, stranger rejected, candidate resumes, 60 s timeout");
}

std::vector<Message> one_of_each() {
  namespace wire = session::wire;
  perception::ViewTransform view;
  return {
      {1, 10, wire::Chat{"throw \"this\" away"}},
      {2, 11, wire::Point{7, 120.5, 33.25}},
      {3, 12, wire::SetMode{session::Mode::gesture_only}},
      {4, 13, wire::FrameMsg{9, 400, 300, "iVBORw0KGgo=", view}},
      {5, 14, wire::ResponseMsg{"Done.", behavior::ResponseKind::ack}},
      {6, 15, wire::Status{"[pick(*)]", 0, "pick(*)", {"failure", "NoTarget", "nothing there", std::nullopt, 8000}}},
      {7, 16, wire::Disambiguation{"Which one are you referring to?", {"cup_blue", "cup_red"}, 9}},
      {8, 17, wire::ProtocolError{"seq must increase", 3}},
  };
}

Verdict protocol() {
  auto msgs = one_of_each();
  if (msgs.size() != std::variant_size_v<session::wire::Payload>) return fail("not every variant covered");
  for (const auto& m : msgs) {
    if (session::wire::decode(session::wire::encode(m)) != m) {
      return fail(std::string(session::wire::type_name(m.payload)) + " does not round-trip");
    }
  }

  session::ServerConfig cfg;
  cfg.world = testing::fixture("t01").world;
  cfg.make_planner = [] { return testing::rule_planner(); };
  session::LiveServer server(std::move(cfg));
  server.start();
  auto client = session::Client::connect("127.0.0.1", server.port(), true);
  testing::LiveProbe probe(client);
  auto t0 = testing::SteadyClock::now();
  std::this_thread::sleep_for(10500ms);
  auto t1 = testing::SteadyClock::now();
  client.send(session::wire::Chat{"Go to the table"});
  auto reply = probe.wait_reply(t1, 2s);
  double hz = testing::frame_rate(probe.snapshot(), t0 + 250ms, t0 + 10250ms);

  std::ostringstream d;
  d << msgs.size() << " variants round-trip, " << hz << " Hz over 10 s";
  if (!reply) return fail(d.str() + ", no reply to chat");
  auto ms = std::chrono::duration<double, std::milli>(reply->at - t1).count();
  d << ", chat reply in " << ms << " ms";
  bool good = hz >= 4.75 && hz <= 5.25 && ms < 100.0;
  return {good, d.str()};
}

Verdict fuzz() {
  auto rep = testing::run_world_fuzz(100000, 7);
  std::string d = std::to_string(rep.invocations) + " calls, " + std::to_string(rep.successes) + " succeeded, " +
                  std::to_string(rep.violations) + " violations, " + std::to_string(rep.escaped_exceptions) +
                  " escaped exceptions";
  if (rep.violations || rep.escaped_exceptions) return fail(d + ": " + rep.first_problem);
  return ok(d);
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"scripted benchmark", benchmark},
      {"failure mode", failure_mode},
      {"star alignment", star_property},
      {"plan grammar", grammar},
      {"navigation oracle", navigation},
      {"place formula", place_formula},
      {"disambiguation", disambiguation},
      {"protocol", protocol},
      {"world safety fuzz", fuzz},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = fail(std::string("threw: ") + e.what());
    }
    failed += !v.pass;
    std::printf("%s  %-20s %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
