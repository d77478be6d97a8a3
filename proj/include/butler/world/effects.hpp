#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include "butler/world/world_model.hpp"

namespace butler::world {

struct PickEffect {
  ObjectId id;
};
struct PlaceEffect {
  ObjectId id;
  ParentRef parent;
  Vec2 pose;
};
struct SetOpenEffect {
  std::string name;
  bool open = true;
};
struct MoveBaseEffect {
  BasePose pose;
};
struct TickEffect {
  std::int64_t ms = 0;
};

using Effect = std::variant<PickEffect, PlaceEffect, SetOpenEffect, MoveBaseEffect, TickEffect>;

/// The effect's precondition does not hold. Skills map this to a failed
/// outcome; it never leaves a partially modified world behind.
class PreconditionViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Returns the successor world. Only the fields named by the effect change;
/// the clock moves only on TickEffect.
WorldModel apply_effect(const WorldModel& w, const Effect& e);

}  // namespace butler::world
