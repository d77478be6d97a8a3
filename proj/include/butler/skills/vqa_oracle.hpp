#pragma once

#include <optional>
#include <string>
#include <vector>

#include "butler/skills/action.hpp"
#include "butler/world/world_model.hpp"

namespace butler::skills {

enum class QuestionForm { existence, count, state, description, identity };

std::optional<QuestionForm> classify_question(const std::string& question);

struct VqaQuery {
  std::string question;
  std::optional<world::ObjectId> pointed;  // object under the mark
  std::optional<world::ObjectId> focus;    // referent of "it"
};

struct VqaResult {
  std::optional<std::string> answer;
  std::optional<ErrorCode> error;
  std::string reason;
  std::vector<world::ObjectId> candidates;  // AmbiguousTarget
  std::optional<world::ObjectId> subject;
};

/// Ground-truth answers over the visible world for four question forms:
/// existence/count ("any beer in the fridge", "how many cups"), state
/// ("is the laptop open"), description ("describe this") and identity
/// ("what is this").
VqaResult answer_question(const world::WorldModel& w, const VqaQuery& q);

}  // namespace butler::skills
