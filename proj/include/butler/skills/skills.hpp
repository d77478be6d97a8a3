#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>

#include "butler/perception/frame.hpp"
#include "butler/skills/action.hpp"
#include "butler/world/world_model.hpp"

namespace butler::skills {

struct SkillTimings {
  std::int64_t move_per_cell_ms = 500;
  std::int64_t pick_ms = 8000;
  std::int64_t place_ms = 6000;
  std::int64_t open_close_ms = 12000;
  std::int64_t vqa_ms = 2000;
};

struct SkillConfig {
  SkillTimings timings;
  /// Injected ExecutionFailure probability per skill (missing = 0).
  std::map<SkillKind, double> failure_probability;
  /// Chance that detect() swaps a hit for a same-category distractor.
  double detection_noise = 0.0;
  std::uint64_t seed = 0;
};

/// Optional free-text VQA backend. Receives the frame annotated with the mark
/// (when a point was given). Throws on transport failure.
class VqaBackend {
 public:
  virtual ~VqaBackend() = default;
  virtual std::string ask(const std::string& question, const perception::Frame& frame,
                          std::optional<perception::PixelPoint> mark) = 0;
};

/// Cross-step state carried through one plan.
struct ExecutionContext {
  /// Last object a step acted on; "it" in a vqa question refers to it.
  std::optional<world::ObjectId> focus;
};

struct StepResult {
  world::WorldModel world;
  SkillOutcome outcome;
};

/// Runs primitive actions against a world snapshot. A failed step returns the
/// input world with only the clock advanced; Star arguments are rejected
/// before anything else happens.
class SkillExecutor {
 public:
  explicit SkillExecutor(SkillConfig config = {});

  StepResult execute(const world::WorldModel& w, const PrimitiveAction& action, ExecutionContext& ctx);

  void set_vqa_backend(std::shared_ptr<VqaBackend> backend) { vqa_backend_ = std::move(backend); }
  const SkillConfig& config() const { return config_; }
  void set_failure_probability(SkillKind k, double p) { config_.failure_probability[k] = p; }

 private:
  StepResult move(const world::WorldModel& w, const PrimitiveAction& a, ExecutionContext& ctx);
  StepResult pick(const world::WorldModel& w, const PrimitiveAction& a, ExecutionContext& ctx);
  StepResult placeon(const world::WorldModel& w, const PrimitiveAction& a, ExecutionContext& ctx);
  StepResult set_open(const world::WorldModel& w, const PrimitiveAction& a, ExecutionContext& ctx, bool open);
  StepResult vqa(const world::WorldModel& w, const PrimitiveAction& a, ExecutionContext& ctx);

  bool inject_failure(SkillKind k);

  SkillConfig config_;
  std::mt19937_64 rng_;
  std::shared_ptr<VqaBackend> vqa_backend_;
};

}  // namespace butler::skills
