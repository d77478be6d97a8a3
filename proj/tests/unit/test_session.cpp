#include <doctest.h>

#include <random>

#include "butler/session/session.hpp"
#include "support/session_harness.hpp"

using namespace butler;
using namespace butler::session;
using butler::testing::fixture;
using butler::testing::rule_planner;
using butler::testing::Harness;

TEST_SUITE("session") {

TEST_CASE("single step instruction") {
  Harness h("t01");
  h.s.chat("go to the table");
  auto st = h.all<wire::Status>();
  REQUIRE(st.size() == 1);
  CHECK(st[0].action == "move(\"table\")");
  CHECK(st[0].outcome.status == "success");
  CHECK(h.responses().front().kind == behavior::ResponseKind::ack);
  CHECK(h.last_response() == "Done.");
  CHECK(h.s.phase() == Phase::idle);
  CHECK(h.s.stats().voice == 1);
}

TEST_CASE("pointing while idle only buffers") {
  Harness h("t01");
  auto before = h.s.world();
  h.point_at("avocado");
  CHECK(h.s.gestures().size() == 1);
  CHECK(h.all<wire::Status>().empty());
  CHECK(h.last_response() == "Noted the selection.");
  CHECK(h.s.world().objects == before.objects);
  CHECK(h.s.stats().gesture == 1);
}

TEST_CASE("missing gesture pauses until the user points") {
  Harness h("t01");
  h.s.chat("go to the table");
  h.clear();
  h.s.chat("throw this into the trash can");
  CHECK(h.s.phase() == Phase::awaiting_gesture);
  auto d = h.all<wire::Disambiguation>();
  REQUIRE(d.size() == 1);
  CHECK(d[0].prompt == "Please point at the target.");
  CHECK(d[0].candidates.empty());
  h.point_at("avocado");
  CHECK(h.s.phase() == Phase::idle);
  CHECK(h.s.world().objects.at("avocado").parent == world::ParentRef::container("trash_can"));
  CHECK(h.s.stats().goals_met_ms.has_value());
}

TEST_CASE("pointing first, then talking") {
  Harness h("t01");
  h.s.chat("go to the table");
  h.point_at("avocado");
  h.s.advance_to(h.s.now() + 1000);
  h.s.chat("throw this into the trash can");
  CHECK(h.all<wire::Disambiguation>().empty());
  CHECK(h.s.world().objects.at("avocado").parent == world::ParentRef::container("trash_can"));
}

TEST_CASE("ambiguity asks, rejects strangers and resumes on a candidate") {
  Harness h("t06");
  h.s.chat("move the cup to the kitchen counter");
  REQUIRE(h.s.phase() == Phase::awaiting_disambiguation);
  auto d = h.all<wire::Disambiguation>();
  REQUIRE(d.size() == 1);
  CHECK(d[0].prompt == "Which one are you referring to?");
  CHECK(d[0].candidates == std::vector<std::string>{"cup_blue", "cup_red"});
  CHECK(h.s.frames().contains(d[0].frame_id));
  auto st = h.all<wire::Status>();
  REQUIRE_FALSE(st.empty());
  CHECK(st.back().outcome.error == "AmbiguousTarget");

  h.clear();
  h.point_at("apple");
  CHECK(h.s.phase() == Phase::awaiting_disambiguation);
  CHECK(h.all<wire::Disambiguation>().size() == 1);

  h.point_at("cup_blue");
  CHECK(h.s.phase() == Phase::idle);
  CHECK(h.s.world().objects.at("cup_blue").parent == world::ParentRef::surface("kitchen counter"));
  CHECK(h.s.world().objects.at("cup_red").parent == world::ParentRef::surface("table"));
}

TEST_CASE("disambiguation times out after a simulated minute") {
  Harness h("t06");
  h.s.chat("move the cup to the kitchen counter");
  auto start = h.s.now();
  h.s.advance_to(start + 59999);
  CHECK(h.s.phase() == Phase::awaiting_disambiguation);
  h.s.advance_to(start + 60000);
  CHECK(h.s.phase() == Phase::idle);
  CHECK(h.responses().back().kind == behavior::ResponseKind::error);
  CHECK(h.s.stats().plans_aborted == 1);
}

TEST_CASE("a new chat abandons the paused plan") {
  Harness h("t06");
  h.s.chat("move the cup to the kitchen counter");
  h.s.chat("go to the sofa");
  CHECK(h.s.phase() == Phase::idle);
  CHECK(h.s.stats().plans_aborted == 1);
  CHECK(h.s.stats().plans_completed == 1);
  CHECK(h.last_response() == "Done.");
}

TEST_CASE("async planning drops stale results") {
  Harness h("t01");
  auto first = h.s.on_chat("go to the table");
  REQUIRE(first);
  CHECK(h.s.phase() == Phase::planning);
  auto second = h.s.on_chat("go to the sofa");
  REQUIRE(second);
  CHECK(second->generation > first->generation);
  auto planner = rule_planner();
  h.s.on_plan_ready(first->generation, planner->generate(first->instruction, first->context));
  CHECK(h.all<wire::Status>().empty());
  h.s.on_plan_ready(second->generation, planner->generate(second->instruction, second->context));
  auto st = h.all<wire::Status>();
  REQUIRE(st.size() == 1);
  CHECK(st[0].action == "move(\"sofa\")");
}

TEST_CASE("voice-only refuses gestures and aborts stars") {
  SessionConfig cfg;
  cfg.mode = Mode::voice_only;
  Harness h("t01", cfg);
  h.point_at("avocado");
  CHECK(h.responses().back().kind == behavior::ResponseKind::error);
  CHECK(h.s.gestures().size() == 0);
  h.s.chat("throw this into the trash can");
  CHECK(h.s.phase() == Phase::idle);
  CHECK(h.responses().back().kind == behavior::ResponseKind::error);
}

TEST_CASE("gesture-only accepts just the button strings") {
  SessionConfig cfg;
  cfg.mode = Mode::gesture_only;
  Harness h("t09", cfg);
  h.s.chat("go to the desk");
  CHECK(h.responses().back().kind == behavior::ResponseKind::error);
  CHECK(h.all<wire::Status>().empty());
  h.point_at(world::Vec2{3.5, 1.3});
  h.s.chat("go here");
  auto st = h.all<wire::Status>();
  REQUIRE(st.size() == 1);
  CHECK(st[0].outcome.status == "success");
}

TEST_CASE("clicks on evicted frames are refused") {
  Harness h("t01");
  h.s.on_point(999, {10, 10});
  CHECK(h.responses().back().kind == behavior::ResponseKind::error);
  CHECK(h.s.gestures().size() == 0);
}

TEST_CASE("server messages from a client are protocol errors") {
  Harness h("t01");
  h.s.handle(wire::ResponseMsg{"hi", behavior::ResponseKind::ack});
  CHECK(h.all<wire::ProtocolError>().size() == 1);
}

TEST_CASE("mode switches are acknowledged") {
  Harness h("t01");
  h.s.on_mode(Mode::voice_only);
  CHECK(h.s.mode() == Mode::voice_only);
  CHECK(h.last_response().find("voice_only") != std::string::npos);
}

TEST_CASE("answers are recorded and frames keep increasing") {
  Harness h("t02");
  h.s.chat("check the beer inside the fridge");
  CHECK(h.s.stats().answers == std::vector<std::string>{"Yes, 2."});
  for (int i = 0; i < 5; ++i) h.s.emit_frame();
  auto frames = h.all<wire::FrameMsg>();
  for (std::size_t i = 1; i < frames.size(); ++i) CHECK(frames[i].frame_id > frames[i - 1].frame_id);
  std::uint64_t last = 0;
  for (const auto& m : h.out) {
    CHECK(m.seq > last);
    last = m.seq;
  }
}

// Random client traffic: every message gets a reply, counters match, and
// AwaitingDisambiguation only follows an AmbiguousTarget status.
TEST_CASE("session properties under random traffic") {
  const std::vector<std::string> chats = {"go to the table", "move the cup to the kitchen counter", "pick this",
                                          "what is this", "put it here", "go to the sofa", "sing a song", "open"};
  const std::vector<std::string> targets = {"cup_red", "cup_blue", "apple", "plate"};
  std::mt19937_64 rng(77);
  for (int run = 0; run < 40; ++run) {
    Harness h("t06");
    int chats_sent = 0, points_sent = 0;
    for (int i = 0; i < 12; ++i) {
      std::size_t before = h.out.size();
      auto phase_before = h.s.phase();
      bool is_chat = rng() % 2;
      if (is_chat) {
        h.s.chat(chats[rng() % chats.size()]);
        ++chats_sent;
      } else {
        const auto& f = h.s.emit_frame();
        before = h.out.size();
        auto id = targets[rng() % targets.size()];
        h.s.on_point(f.frame_id, f.view.to_pixel(h.s.world().objects.at(id).pose));
        ++points_sent;
      }
      CHECK(h.out.size() > before);
      if (h.s.phase() == Phase::awaiting_disambiguation && phase_before != Phase::awaiting_disambiguation) {
        bool saw_ambiguous = false;
        for (std::size_t k = before; k < h.out.size(); ++k)
          if (auto* st = std::get_if<wire::Status>(&h.out[k].payload))
            saw_ambiguous |= st->outcome.error == std::optional<std::string>("AmbiguousTarget");
        CHECK(saw_ambiguous);
      }
      h.s.advance_to(h.s.now() + static_cast<std::int64_t>(rng() % 5000));
    }
    CHECK(h.s.stats().voice == chats_sent);
    CHECK(h.s.stats().gesture == points_sent);
  }
}

}  // TEST_SUITE
