#include "butler/session/session.hpp"

#include <algorithm>

#include "butler/common/base64.hpp"
#include "butler/common/text.hpp"
#include "butler/perception/errors.hpp"
#include "butler/perception/png.hpp"
#include "butler/world/goals.hpp"
#include "butler/world/queries.hpp"

namespace butler::session {

using behavior::ResponseKind;

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::idle: return "Idle";
    case Phase::planning: return "Planning";
    case Phase::executing: return "Executing";
    case Phase::awaiting_disambiguation: return "AwaitingDisambiguation";
    case Phase::awaiting_gesture: return "AwaitingGesture";
  }
  return "Idle";
}

namespace {

wire::Outcome to_wire(const skills::SkillOutcome& o) {
  wire::Outcome out;
  out.status = o.ok() ? "success" : "failure";
  if (o.error) out.error = std::string(skills::to_string(*o.error));
  out.reason = o.reason;
  out.answer = o.answer;
  out.duration_ms = o.duration_ms;
  return out;
}

}  // namespace

Session::Session(world::WorldModel w, std::shared_ptr<behavior::Planner> planner, SessionConfig cfg)
    : world_(std::move(w)), planner_(std::move(planner)), cfg_(cfg), executor_(cfg.skills) {
  directory_ = world::build_location_directory(world_);
  view_ = perception::full_map_view(world_, cfg_.frame_scale);
}

void Session::set_goals(std::vector<world::GoalPredicate> goals) {
  goals_ = std::move(goals);
  stats_.goals_met_ms.reset();
  check_goals();
}

void Session::send(wire::Payload p) {
  if (!sink_) return;
  sink_(wire::Message{++out_seq_, now(), std::move(p)});
}

void Session::respond(std::string text, ResponseKind kind) { send(wire::ResponseMsg{std::move(text), kind}); }

void Session::handle(const wire::Payload& p) {
  if (const auto* c = std::get_if<wire::Chat>(&p)) {
    chat(c->text);
  } else if (const auto* pt = std::get_if<wire::Point>(&p)) {
    on_point(pt->frame_id, {static_cast<int>(std::lround(pt->x_px)), static_cast<int>(std::lround(pt->y_px))});
  } else if (const auto* m = std::get_if<wire::SetMode>(&p)) {
    on_mode(m->mode);
  } else {
    send(wire::ProtocolError{"'" + std::string(wire::type_name(p)) + "' is a server message", std::nullopt});
  }
}

void Session::chat(const std::string& text) {
  if (auto job = on_chat(text)) on_plan_ready(job->generation, planner_->generate(job->instruction, job->context));
}

std::optional<PlanJob> Session::on_chat(const std::string& text) {
  ++stats_.voice;
  std::string t = text::trim(text);
  if (cfg_.mode == Mode::gesture_only) {
    const auto& allowed = gesture_only_commands();
    if (std::find(allowed.begin(), allowed.end(), text::to_lower(t)) == allowed.end()) {
      respond("Only the action buttons are available in gesture-only mode.", ResponseKind::error);
      return std::nullopt;
    }
  }

  if (phase_ == Phase::awaiting_disambiguation || phase_ == Phase::awaiting_gesture) {
    abort_plan("a new instruction arrived");
  } else if (phase_ == Phase::planning) {
    phase_ = Phase::idle;  // the pending planner result becomes stale below
  }

  behavior::Instruction ins{t, now(), behavior::Modality::text};
  try {
    behavior::normalize_instruction(ins);
  } catch (const behavior::EmptyInstruction&) {
    respond("I didn't catch an instruction.", ResponseKind::error);
    return std::nullopt;
  }

  instruction_ = ins;
  phase_ = Phase::planning;
  ++generation_;
  behavior::PlannerContext ctx = behavior::make_planner_context(world_, history_, cfg_.close_after_check);
  ctx.location_directory = directory_;
  return PlanJob{generation_, ins, std::move(ctx)};
}

void Session::on_plan_ready(std::uint64_t generation, behavior::PlanResult result) {
  if (generation != generation_ || phase_ != Phase::planning) return;
  respond(result.response.text, result.response.kind);
  if (!result.plan) {
    phase_ = Phase::idle;
    history_.push_back({instruction_.text, "", {result.response.text}});
    return;
  }
  start_plan(std::move(*result.plan));
}

void Session::start_plan(behavior::Plan plan) {
  plan_ = std::move(plan);
  cursor_ = 0;
  exec_ctx_ = {};
  bindings_.clear();
  step_log_.clear();
  phase_ = Phase::executing;
  run_plan();
}

void Session::run_plan() {
  while (phase_ == Phase::executing && cursor_ < plan_->steps.size()) {
    skills::PrimitiveAction step = plan_->steps[cursor_];
    for (auto& arg : step.args) {
      if (const auto* t = std::get_if<skills::TextArg>(&arg)) {
        if (auto it = bindings_.find(t->text); it != bindings_.end()) arg = skills::ObjectArg{it->second};
      }
    }
    while (skills::has_star(step)) {
      if (cfg_.mode == Mode::voice_only) {
        abort_plan("pointing is disabled in voice-only mode");
        return;
      }
      try {
        step = behavior::resolve_star(step, gestures_, instruction_.timestamp_ms, world_, frames_);
      } catch (const behavior::MissingGesture&) {
        plan_->steps[cursor_] = step;
        phase_ = Phase::awaiting_gesture;
        gesture_deadline_ms_ = now() + cfg_.gesture_timeout_ms;
        const perception::Frame* latest = frames_.latest();
        send(wire::Disambiguation{std::string(behavior::kPointPrompt), {}, latest ? latest->frame_id : 0});
        return;
      } catch (const perception::PerceptionError& e) {
        abort_plan("the selected frame is no longer available");
        return;
      }
    }
    plan_->steps[cursor_] = step;

    auto res = executor_.execute(world_, step, exec_ctx_);
    world_ = std::move(res.world);
    const auto& outcome = res.outcome;
    send(wire::Status{plan_->raw, static_cast<int>(cursor_), behavior::serialize_action(step), to_wire(outcome)});
    step_log_.push_back(behavior::serialize_action(step) + " -> " +
                        (outcome.ok() ? std::string("success") : std::string(skills::to_string(*outcome.error))));
    if (outcome.ok() && outcome.answer) stats_.answers.push_back(*outcome.answer);
    check_goals();

    if (outcome.ok()) {
      if (outcome.answer) respond(*outcome.answer, ResponseKind::answer);
      ++cursor_;
      continue;
    }
    if (outcome.error == skills::ErrorCode::execution_failure) stats_.injected_failure = true;
    if (outcome.error == skills::ErrorCode::ambiguous_target && outcome.candidates.size() >= 2) {
      exchange_ = behavior::begin_disambiguation(outcome.candidates, world_, frames_, next_frame_id(), now(),
                                                 cfg_.disambiguation_timeout_ms);
      const perception::Frame& marked = frames_.get(exchange_->frame_id);
      send(wire::FrameMsg{marked.frame_id, marked.width(), marked.height(),
                          base64_encode(perception::encode_png(marked.image)), marked.view});
      send(wire::Disambiguation{std::string(behavior::kDisambiguationPrompt), exchange_->candidates, exchange_->frame_id});
      phase_ = Phase::awaiting_disambiguation;
      return;
    }
    abort_plan(outcome.reason.value_or(std::string(skills::to_string(*outcome.error))));
    return;
  }
  if (phase_ == Phase::executing) finish_plan();
}

void Session::record_history() {
  history_.push_back({instruction_.text, plan_ ? plan_->raw : std::string(), step_log_});
}

void Session::finish_plan() {
  ++stats_.plans_completed;
  record_history();
  phase_ = Phase::idle;
  respond("Done.", ResponseKind::ack);
}

void Session::abort_plan(const std::string& reason) {
  ++stats_.plans_aborted;
  record_history();
  phase_ = Phase::idle;
  exchange_.reset();
  respond("I could not finish: " + reason + ".", ResponseKind::error);
}

void Session::on_point(perception::FrameId frame_id, perception::PixelPoint px) {
  ++stats_.gesture;
  if (cfg_.mode == Mode::voice_only) {
    respond("Pointing is disabled in voice-only mode.", ResponseKind::error);
    return;
  }
  if (!frames_.contains(frame_id)) {
    respond("That frame is too old; please point again.", ResponseKind::error);
    return;
  }

  switch (phase_) {
    case Phase::awaiting_disambiguation: {
      world::ObjectId id;
      try {
        id = behavior::resolve_disambiguation(*exchange_, world_, frames_, frame_id, px);
      } catch (const behavior::PointNotACandidate&) {
        send(wire::Disambiguation{std::string(behavior::kDisambiguationPrompt), exchange_->candidates, exchange_->frame_id});
        return;
      }
      skills::PrimitiveAction& step = plan_->steps[cursor_];
      int idx = skills::target_arg_index(step);
      if (idx < 0) {
        step.args.push_back(skills::ObjectArg{id});
      } else {
        if (const auto* t = std::get_if<skills::TextArg>(&step.args[static_cast<std::size_t>(idx)])) bindings_[t->text] = id;
        step.args[static_cast<std::size_t>(idx)] = skills::ObjectArg{id};
      }
      exchange_.reset();
      phase_ = Phase::executing;
      run_plan();
      return;
    }
    case Phase::awaiting_gesture:
      gestures_.push({frame_id, px, now(), false});
      phase_ = Phase::executing;
      run_plan();
      return;
    default:
      gestures_.push({frame_id, px, now(), false});
      respond("Noted the selection.", ResponseKind::ack);
      return;
  }
}

void Session::protocol_error(std::string error, std::optional<std::uint64_t> ref_seq) {
  send(wire::ProtocolError{std::move(error), ref_seq});
}

void Session::on_mode(Mode m) {
  cfg_.mode = m;
  respond("Mode set to " + std::string(to_string(m)) + ".", ResponseKind::ack);
}

const perception::Frame& Session::emit_frame() {
  perception::FrameId id = next_frame_id();
  frames_.add(perception::render_frame(world_, view_, id, now()));
  const perception::Frame& f = frames_.get(id);
  send(wire::FrameMsg{f.frame_id, f.width(), f.height(), base64_encode(perception::encode_png(f.image)), f.view});
  return f;
}

void Session::advance_to(std::int64_t ms) {
  if (ms > world_.clock.ms) world_.clock.ms = ms;
  if (phase_ == Phase::awaiting_disambiguation && exchange_ && exchange_->expired(now())) {
    abort_plan("nobody picked one of the candidates in time");
  } else if (phase_ == Phase::awaiting_gesture && now() >= gesture_deadline_ms_) {
    abort_plan("nobody pointed at a target in time");
  }
}

void Session::check_goals() {
  if (goals_.empty() || stats_.goals_met_ms) return;
  if (world::all_goals_satisfied(world_, stats_.answers, goals_)) stats_.goals_met_ms = now();
}

}  // namespace butler::session
