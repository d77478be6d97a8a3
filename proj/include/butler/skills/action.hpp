#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "butler/perception/frame.hpp"
#include "butler/skills/path_planner.hpp"
#include "butler/world/world_model.hpp"

namespace butler::skills {

enum class SkillKind { move, pick, placeon, open, close, vqa };

std::string_view to_string(SkillKind k);
std::optional<SkillKind> skill_from_string(std::string_view s);
const std::vector<SkillKind>& all_skills();

/// Placeholder for "whatever the user points at"; resolved before execution.
struct Star {
  bool operator==(const Star&) const = default;
};

/// Quoted argument. Names a known location when it matches a zone name,
/// otherwise it is an open-vocabulary text query.
struct TextArg {
  std::string text;
  bool operator==(const TextArg&) const = default;
};

/// World point produced from a gesture selection.
struct PointArg {
  world::Vec2 world;
  std::optional<perception::FrameId> frame_id;
  std::optional<perception::PixelPoint> px;
  bool operator==(const PointArg&) const = default;
};

/// A specific object, fixed by a disambiguation answer.
struct ObjectArg {
  world::ObjectId id;
  bool operator==(const ObjectArg&) const = default;
};

using ActionArg = std::variant<Star, TextArg, PointArg, ObjectArg>;

/// One skill invocation. vqa takes (question, optional target); every other
/// skill takes exactly one target.
struct PrimitiveAction {
  SkillKind skill = SkillKind::move;
  std::vector<ActionArg> args;
  bool operator==(const PrimitiveAction&) const = default;
};

/// Index of the argument that names the target (-1 when there is none).
int target_arg_index(const PrimitiveAction& a);
bool has_star(const PrimitiveAction& a);

enum class ErrorCode {
  gripper_occupied,
  no_target,
  ambiguous_target,
  out_of_reach,
  execution_failure,
  nothing_held,
  not_a_surface,
  container_closed,
  unknown_container,
  unknown_location,
  no_path,
  unresolvable_question,
  not_graspable,
  invalid_argument,
};

std::string_view to_string(ErrorCode e);

enum class SkillStatus { success, failure };

struct SkillOutcome {
  SkillStatus status = SkillStatus::success;
  std::optional<ErrorCode> error;
  std::optional<std::string> reason;
  std::optional<std::string> answer;  // vqa
  std::int64_t duration_ms = 0;
  /// Object the skill acted on (or looked at), when there is one.
  std::optional<world::ObjectId> target;
  /// AmbiguousTarget candidates.
  std::vector<world::ObjectId> candidates;
  std::optional<PathPlan> path;

  bool ok() const { return status == SkillStatus::success; }
  static SkillOutcome success(std::int64_t duration_ms) { return {SkillStatus::success, {}, {}, {}, duration_ms, {}, {}, {}}; }
  static SkillOutcome failure(ErrorCode e, std::string reason, std::int64_t duration_ms = 0) {
    return {SkillStatus::failure, e, std::move(reason), {}, duration_ms, {}, {}, {}};
  }
};

}  // namespace butler::skills
