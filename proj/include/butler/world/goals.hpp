#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "butler/world/world_model.hpp"

namespace butler::world {

class UnknownReference : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pure check of one goal against a world and the answers given so far.
bool goal_satisfied(const WorldModel& w, const std::vector<std::string>& responses, const GoalPredicate& g);

bool all_goals_satisfied(const WorldModel& w, const std::vector<std::string>& responses,
                         const std::vector<GoalPredicate>& goals);

}  // namespace butler::world
