#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "butler/behavior/planner.hpp"
#include "butler/session/metrics.hpp"
#include "butler/session/session.hpp"
#include "butler/world/scenario.hpp"

namespace butler::session {

class ScriptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChatEvent {
  std::string text;
};
/// Pointing target; projected to pixels on a frame rendered at replay time.
struct PointEvent {
  std::optional<world::ObjectId> object;
  std::optional<world::Vec2> xy;
};
/// Some server message after the one the previous expect matched must match:
/// `kind` is a response kind or a message type, `contains` a case-insensitive
/// substring. Expects therefore match in order.
struct ExpectEvent {
  std::string kind;
  std::string contains;
};

struct ScriptEvent {
  std::int64_t at_ms = 0;
  std::variant<ChatEvent, PointEvent, ExpectEvent> what;
};

struct Script {
  std::string task_id;
  std::optional<int> expected_voice;
  std::optional<int> expected_gesture;
  std::vector<ScriptEvent> events;
};

/// Accepts {task_id, interactions: {voice, gesture}, events: [...]} or a bare
/// event list. Throws ScriptError.
Script parse_script(const nlohmann::json& j);
Script load_script_file(const std::filesystem::path& path);

struct ReplayConfig {
  SessionConfig session;
  std::int64_t budget_ms = 300000;  // five simulated minutes
  std::shared_ptr<behavior::Planner> planner;
  /// Re-run without injected failures to decide planning success.
  bool counterfactual = true;
};

struct ReplayResult {
  MetricsRecord record;
  std::vector<std::string> transcript;  // one line per server message
  bool diverged = false;                // an expect failed after an injected fault
};

/// Deterministic replay on the simulated clock. Throws ScriptError when an
/// expect fails without an injected fault (or detection noise) to explain it.
ReplayResult run_script(const world::Scenario& scenario, const Script& script, const ReplayConfig& cfg);

/// Human-readable line for a transcript (frames are summarized, not dumped).
std::string transcript_line(const wire::Message& m);

}  // namespace butler::session
