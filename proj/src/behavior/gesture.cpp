#include "butler/behavior/gesture.hpp"

#include <algorithm>
#include <string>

#include "butler/perception/grounding.hpp"

namespace butler::behavior {

void GestureBuffer::push(GestureSelection g) {
  if (!items_.empty() && g.timestamp_ms < items_.back().timestamp_ms) {
    throw NonMonotonicTimestamp("gesture at " + std::to_string(g.timestamp_ms) + " ms is older than " +
                                std::to_string(items_.back().timestamp_ms) + " ms");
  }
  if (items_.size() == kCapacity) items_.pop_front();
  items_.push_back(g);
}

std::size_t GestureBuffer::unconsumed() const {
  return static_cast<std::size_t>(std::count_if(items_.begin(), items_.end(), [](const GestureSelection& g) { return !g.consumed; }));
}

std::optional<std::size_t> select_for_star(const GestureBuffer& buf, std::int64_t instruction_ts) {
  std::optional<std::size_t> latest;
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const auto& g = buf.at(i);
    if (g.consumed) continue;
    if (g.timestamp_ms >= instruction_ts) return i;
    latest = i;
  }
  return latest;
}

skills::PrimitiveAction resolve_star(const skills::PrimitiveAction& step, GestureBuffer& buf, std::int64_t instruction_ts,
                                     const world::WorldModel& w, const perception::FrameRegistry& frames) {
  auto star = std::find_if(step.args.begin(), step.args.end(),
                           [](const skills::ActionArg& a) { return std::holds_alternative<skills::Star>(a); });
  if (star == step.args.end()) return step;
  auto index = select_for_star(buf, instruction_ts);
  if (!index) throw MissingGesture();

  const GestureSelection& g = buf.at(*index);
  auto p = std::get<world::Vec2>(perception::resolve_point(w, frames, g.frame_id, g.px, perception::PointPurpose::location));
  skills::PointArg arg{p, g.frame_id, g.px};
  buf.consume(*index);  // a stale frame leaves the selection available

  skills::PrimitiveAction out = step;
  out.args[static_cast<std::size_t>(star - step.args.begin())] = arg;
  return out;
}

}  // namespace butler::behavior
