#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "butler/behavior/response.hpp"
#include "butler/perception/frame.hpp"

namespace butler::session {

enum class Mode { combined, voice_only, gesture_only };

std::string_view to_string(Mode m);
std::optional<Mode> mode_from_string(std::string_view s);

/// Chat strings the gesture-only buttons send.
const std::vector<std::string>& gesture_only_commands();

namespace wire {

// client -> server
struct Chat {
  std::string text;
  bool operator==(const Chat&) const = default;
};
struct Point {
  perception::FrameId frame_id = 0;
  double x_px = 0.0;
  double y_px = 0.0;
  bool operator==(const Point&) const = default;
};
struct SetMode {
  Mode mode = Mode::combined;
  bool operator==(const SetMode&) const = default;
};

// server -> client
struct FrameMsg {
  perception::FrameId frame_id = 0;
  int width = 0;
  int height = 0;
  std::string png_base64;
  perception::ViewTransform view;
  bool operator==(const FrameMsg&) const = default;
};
struct ResponseMsg {
  std::string text;
  behavior::ResponseKind kind = behavior::ResponseKind::ack;
  bool operator==(const ResponseMsg&) const = default;
};
struct Outcome {
  std::string status;  // "success" | "failure"
  std::optional<std::string> error;
  std::optional<std::string> reason;
  std::optional<std::string> answer;
  std::int64_t duration_ms = 0;
  bool operator==(const Outcome&) const = default;
};
struct Status {
  std::string plan;
  int step_index = 0;
  std::string action;
  Outcome outcome;
  bool operator==(const Status&) const = default;
};
struct Disambiguation {
  std::string prompt;
  std::vector<std::string> candidates;
  perception::FrameId frame_id = 0;
  bool operator==(const Disambiguation&) const = default;
};
struct ProtocolError {
  std::string error;
  std::optional<std::uint64_t> ref_seq;
  bool operator==(const ProtocolError&) const = default;
};

using Payload = std::variant<Chat, Point, SetMode, FrameMsg, ResponseMsg, Status, Disambiguation, ProtocolError>;

struct Message {
  std::uint64_t seq = 0;
  std::int64_t timestamp_ms = 0;
  Payload payload;
  bool operator==(const Message&) const = default;
};

/// Raised for anything that is not a well-formed message.
class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::string what, std::optional<std::uint64_t> seq = std::nullopt)
      : std::runtime_error(std::move(what)), seq_(seq) {}
  std::optional<std::uint64_t> seq() const { return seq_; }

 private:
  std::optional<std::uint64_t> seq_;
};

std::string_view type_name(const Payload& p);
bool is_client_payload(const Payload& p);

/// Flat object: {"type", "seq", "timestamp_ms", ...payload fields}.
nlohmann::json to_json(const Message& m);
Message from_json(const nlohmann::json& j);
std::string encode(const Message& m);
Message decode(std::string_view text);

/// Enforces strictly increasing sequence numbers in one direction.
class SeqGuard {
 public:
  /// False (and no state change) when seq does not exceed the last one.
  bool accept(std::uint64_t seq);

 private:
  std::optional<std::uint64_t> last_;
};

}  // namespace wire
}  // namespace butler::session
