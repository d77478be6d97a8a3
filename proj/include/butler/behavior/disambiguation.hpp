#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "butler/behavior/response.hpp"
#include "butler/perception/frame.hpp"
#include "butler/world/world_model.hpp"

namespace butler::behavior {

inline constexpr std::int64_t kDisambiguationTimeoutMs = 60000;

class PointNotACandidate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A paused "which one?" exchange.
struct DisambiguationExchange {
  std::vector<world::ObjectId> candidates;  // at least two
  perception::FrameId frame_id = 0;         // frame with every candidate marked
  std::int64_t started_ms = 0;
  std::int64_t deadline_ms = 0;

  Response response() const { return {std::string(kDisambiguationPrompt), ResponseKind::disambiguation, candidates}; }
  bool expired(std::int64_t now_ms) const { return now_ms >= deadline_ms; }
};

/// Renders a frame with a mark on each candidate, registers it and opens the
/// exchange. Throws std::invalid_argument for fewer than two candidates.
DisambiguationExchange begin_disambiguation(std::vector<world::ObjectId> candidates, const world::WorldModel& w,
                                            perception::FrameRegistry& frames, perception::FrameId frame_id,
                                            std::int64_t now_ms, std::int64_t timeout_ms = kDisambiguationTimeoutMs);

/// Candidate under the click. Throws PointNotACandidate (the exchange stays
/// open) or StaleFrame.
world::ObjectId resolve_disambiguation(const DisambiguationExchange& ex, const world::WorldModel& w,
                                       const perception::FrameRegistry& frames, perception::FrameId frame_id,
                                       perception::PixelPoint px);

}  // namespace butler::behavior
