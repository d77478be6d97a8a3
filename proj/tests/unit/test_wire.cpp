#include <doctest.h>

#include "butler/session/wire.hpp"

using namespace butler::session;
using namespace butler::session::wire;
using nlohmann::json;

namespace {

std::vector<Message> one_of_each() {
  return {
      {1, 10, Chat{"go to the table"}},
      {2, 20, Point{7, 12.5, 99.0}},
      {3, 30, SetMode{Mode::gesture_only}},
      {4, 40, FrameMsg{8, 400, 300, "iVBORw0KGgo=", {50.0, 0.0, 0.0}}},
      {5, 50, ResponseMsg{"Done.", butler::behavior::ResponseKind::ack}},
      {6, 60, Status{"[move(\"table\")]", 0, "move(\"table\")", {"failure", "NoPath", "blocked", std::nullopt, 0}}},
      {7, 70, Status{"[vqa(\"q\")]", 0, "vqa(\"q\")", {"success", std::nullopt, std::nullopt, "Yes, 2.", 2000}}},
      {8, 80, Disambiguation{"Which one are you referring to?", {"cup", "cup2"}, 9}},
      {9, 90, ProtocolError{"seq must increase", 3}},
      {10, 100, ProtocolError{"not json", std::nullopt}},
  };
}

}  // namespace

TEST_SUITE("wire") {

TEST_CASE("every message type round-trips") {
  for (const auto& m : one_of_each()) {
    auto text = encode(m);
    CHECK_MESSAGE(decode(text) == m, text);
    CHECK(from_json(to_json(m)) == m);
  }
}

TEST_CASE("flat layout") {
  auto j = to_json({3, 5, Chat{"hi"}});
  CHECK(j == json{{"type", "chat"}, {"seq", 3}, {"timestamp_ms", 5}, {"text", "hi"}});
  auto p = to_json({4, 6, Point{1, 2.0, 3.0}});
  CHECK(p.at("type") == "point");
  CHECK(p.at("x_px") == 2.0);
}

TEST_CASE("client and server types") {
  CHECK(is_client_payload(Chat{}));
  CHECK(is_client_payload(Point{}));
  CHECK(is_client_payload(SetMode{}));
  CHECK_FALSE(is_client_payload(FrameMsg{}));
  CHECK(type_name(Disambiguation{}) == "disambiguation");
  CHECK(type_name(ProtocolError{}) == "protocol_error");
}

TEST_CASE("decode errors keep the seq when there is one") {
  auto err = [](const std::string& s) -> std::optional<std::optional<std::uint64_t>> {
    try {
      decode(s);
    } catch (const DecodeError& e) {
      return e.seq();
    }
    return std::nullopt;
  };
  CHECK(err("not json") == std::optional<std::optional<std::uint64_t>>(std::in_place, std::nullopt));
  CHECK(err(R"({"type":"warp","seq":4,"timestamp_ms":0})") == std::optional<std::optional<std::uint64_t>>(4u));
  CHECK(err(R"({"type":"chat","seq":5,"timestamp_ms":0})") == std::optional<std::optional<std::uint64_t>>(5u));
  CHECK(err(R"({"type":"chat","timestamp_ms":0,"text":"x"})").has_value());
  CHECK(err(R"({"type":"mode","seq":1,"timestamp_ms":0,"mode":"telepathy"})").has_value());
  CHECK(err(R"([1,2])").has_value());
}

TEST_CASE("modes") {
  for (auto m : {Mode::combined, Mode::voice_only, Mode::gesture_only}) CHECK(mode_from_string(to_string(m)) == m);
  CHECK_FALSE(mode_from_string("both"));
  CHECK_FALSE(gesture_only_commands().empty());
}

TEST_CASE("sequence guard") {
  SeqGuard g;
  CHECK(g.accept(1));
  CHECK(g.accept(5));
  CHECK_FALSE(g.accept(5));
  CHECK_FALSE(g.accept(2));
  CHECK(g.accept(6));
}

}  // TEST_SUITE
