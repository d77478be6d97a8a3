#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>

#include "butler/perception/frame.hpp"
#include "butler/skills/action.hpp"
#include "butler/world/world_model.hpp"

namespace butler::behavior {

struct GestureSelection {
  perception::FrameId frame_id = 0;
  perception::PixelPoint px;
  std::int64_t timestamp_ms = 0;
  bool consumed = false;
};

class NonMonotonicTimestamp : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingGesture : public std::runtime_error {
 public:
  MissingGesture() : std::runtime_error("no unconsumed gesture selection") {}
};

/// The five most recent pointing selections, oldest first.
class GestureBuffer {
 public:
  static constexpr std::size_t kCapacity = 5;

  /// Throws NonMonotonicTimestamp when g is older than the newest entry.
  void push(GestureSelection g);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const GestureSelection& at(std::size_t i) const { return items_.at(i); }
  const std::deque<GestureSelection>& items() const { return items_; }
  std::size_t unconsumed() const;

  /// Marks entry i consumed. Consumption is permanent.
  void consume(std::size_t i) { items_.at(i).consumed = true; }
  void clear() { items_.clear(); }

 private:
  std::deque<GestureSelection> items_;
};

/// Entry a star should bind to: the earliest unconsumed selection made at or
/// after the instruction, otherwise the most recent unconsumed one.
std::optional<std::size_t> select_for_star(const GestureBuffer& buf, std::int64_t instruction_ts);

/// Replaces the first Star of `step` with the world point of the selected
/// click and marks that selection consumed. Throws MissingGesture when nothing
/// is left to bind, StaleFrame when the clicked frame is no longer registered.
skills::PrimitiveAction resolve_star(const skills::PrimitiveAction& step, GestureBuffer& buf, std::int64_t instruction_ts,
                                     const world::WorldModel& w, const perception::FrameRegistry& frames);

}  // namespace butler::behavior
