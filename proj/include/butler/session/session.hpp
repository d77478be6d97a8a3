#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "butler/behavior/disambiguation.hpp"
#include "butler/behavior/gesture.hpp"
#include "butler/behavior/planner.hpp"
#include "butler/perception/frame.hpp"
#include "butler/session/wire.hpp"
#include "butler/skills/skills.hpp"
#include "butler/world/world_model.hpp"

namespace butler::session {

enum class Phase { idle, planning, executing, awaiting_disambiguation, awaiting_gesture };

std::string_view to_string(Phase p);

struct SessionConfig {
  Mode mode = Mode::combined;
  skills::SkillConfig skills;
  bool close_after_check = true;
  std::int64_t disambiguation_timeout_ms = behavior::kDisambiguationTimeoutMs;
  std::int64_t gesture_timeout_ms = behavior::kDisambiguationTimeoutMs;
  double frame_scale = 50.0;
};

/// Planner call the session wants made. Live mode runs it off the event loop
/// and hands the result back through on_plan_ready().
struct PlanJob {
  std::uint64_t generation = 0;
  behavior::Instruction instruction;
  behavior::PlannerContext context;
};

struct EpisodeStats {
  int voice = 0;    // chat messages consumed
  int gesture = 0;  // point messages consumed
  std::vector<std::string> answers;
  bool injected_failure = false;
  int plans_completed = 0;
  int plans_aborted = 0;
  std::optional<std::int64_t> goals_met_ms;
};

/// Transport-independent session state machine. Time is the world's
/// simulated clock; callers move it forward with advance_to().
class Session {
 public:
  using Sink = std::function<void(const wire::Message&)>;

  Session(world::WorldModel w, std::shared_ptr<behavior::Planner> planner, SessionConfig cfg = {});

  void set_sink(Sink sink) { sink_ = std::move(sink); }
  void set_goals(std::vector<world::GoalPredicate> goals);
  void set_vqa_backend(std::shared_ptr<skills::VqaBackend> b) { executor_.set_vqa_backend(std::move(b)); }
  skills::SkillExecutor& executor() { return executor_; }

  /// Dispatches a decoded client message; planning happens inline.
  void handle(const wire::Payload& p);

  /// Accepts a chat. Returns the planner call to make, if any.
  std::optional<PlanJob> on_chat(const std::string& text);
  void on_plan_ready(std::uint64_t generation, behavior::PlanResult result);
  void on_point(perception::FrameId frame_id, perception::PixelPoint px);
  void on_mode(Mode m);
  /// on_chat followed by an inline planner call.
  void chat(const std::string& text);

  /// Emits a protocol_error message (through the same sequence counter).
  void protocol_error(std::string error, std::optional<std::uint64_t> ref_seq);

  /// Renders the current world, registers it and emits a frame message.
  const perception::Frame& emit_frame();

  /// Moves the clock forward (never back) and fires pending timeouts.
  void advance_to(std::int64_t ms);

  Phase phase() const { return phase_; }
  Mode mode() const { return cfg_.mode; }
  std::int64_t now() const { return world_.clock.ms; }
  const world::WorldModel& world() const { return world_; }
  const EpisodeStats& stats() const { return stats_; }
  const perception::FrameRegistry& frames() const { return frames_; }
  const behavior::GestureBuffer& gestures() const { return gestures_; }
  const std::optional<behavior::DisambiguationExchange>& disambiguation() const { return exchange_; }
  const std::optional<behavior::Plan>& plan() const { return plan_; }
  std::size_t cursor() const { return cursor_; }
  std::uint64_t generation() const { return generation_; }
  const perception::ViewTransform& view() const { return view_; }

 private:
  void send(wire::Payload p);
  void respond(std::string text, behavior::ResponseKind kind);
  void start_plan(behavior::Plan plan);
  void run_plan();
  void abort_plan(const std::string& reason);
  void finish_plan();
  void record_history();
  void check_goals();
  perception::FrameId next_frame_id() { return next_frame_id_++; }

  world::WorldModel world_;
  std::shared_ptr<behavior::Planner> planner_;
  SessionConfig cfg_;
  skills::SkillExecutor executor_;
  Sink sink_;
  std::uint64_t out_seq_ = 0;

  Phase phase_ = Phase::idle;
  std::uint64_t generation_ = 0;
  behavior::Instruction instruction_;
  std::optional<behavior::Plan> plan_;
  std::size_t cursor_ = 0;
  skills::ExecutionContext exec_ctx_;
  std::map<std::string, world::ObjectId> bindings_;  // text query -> object picked by the user
  std::vector<std::string> step_log_;
  std::optional<behavior::DisambiguationExchange> exchange_;
  std::int64_t gesture_deadline_ms_ = 0;

  std::vector<behavior::HistoryEntry> history_;
  std::map<std::string, std::vector<std::string>> directory_;  // as loaded, never refreshed
  behavior::GestureBuffer gestures_;
  perception::FrameRegistry frames_;
  perception::ViewTransform view_;
  perception::FrameId next_frame_id_ = 1;

  std::vector<world::GoalPredicate> goals_;
  EpisodeStats stats_;
};

}  // namespace butler::session
