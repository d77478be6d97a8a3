#include "butler/skills/action.hpp"

#include <algorithm>

namespace butler::skills {

std::string_view to_string(SkillKind k) {
  switch (k) {
    case SkillKind::move: return "move";
    case SkillKind::pick: return "pick";
    case SkillKind::placeon: return "placeon";
    case SkillKind::open: return "open";
    case SkillKind::close: return "close";
    case SkillKind::vqa: return "vqa";
  }
  return "move";
}

std::optional<SkillKind> skill_from_string(std::string_view s) {
  for (SkillKind k : all_skills()) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

const std::vector<SkillKind>& all_skills() {
  static const std::vector<SkillKind> skills{SkillKind::move, SkillKind::pick,  SkillKind::placeon,
                                             SkillKind::open, SkillKind::close, SkillKind::vqa};
  return skills;
}

int target_arg_index(const PrimitiveAction& a) {
  if (a.skill == SkillKind::vqa) return a.args.size() >= 2 ? 1 : -1;
  return a.args.empty() ? -1 : 0;
}

bool has_star(const PrimitiveAction& a) {
  return std::any_of(a.args.begin(), a.args.end(), [](const ActionArg& x) { return std::holds_alternative<Star>(x); });
}

std::string_view to_string(ErrorCode e) {
  switch (e) {
    case ErrorCode::gripper_occupied: return "GripperOccupied";
    case ErrorCode::no_target: return "NoTarget";
    case ErrorCode::ambiguous_target: return "AmbiguousTarget";
    case ErrorCode::out_of_reach: return "OutOfReach";
    case ErrorCode::execution_failure: return "ExecutionFailure";
    case ErrorCode::nothing_held: return "NothingHeld";
    case ErrorCode::not_a_surface: return "NotASurface";
    case ErrorCode::container_closed: return "ContainerClosed";
    case ErrorCode::unknown_container: return "UnknownContainer";
    case ErrorCode::unknown_location: return "UnknownLocation";
    case ErrorCode::no_path: return "NoPath";
    case ErrorCode::unresolvable_question: return "UnresolvableQuestion";
    case ErrorCode::not_graspable: return "NotGraspable";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "InvalidArgument";
}

}  // namespace butler::skills
