#include "butler/behavior/disambiguation.hpp"

#include <algorithm>

#include "butler/perception/errors.hpp"
#include "butler/perception/grounding.hpp"

namespace butler::behavior {

DisambiguationExchange begin_disambiguation(std::vector<world::ObjectId> candidates, const world::WorldModel& w,
                                            perception::FrameRegistry& frames, perception::FrameId frame_id,
                                            std::int64_t now_ms, std::int64_t timeout_ms) {
  if (candidates.size() < 2) throw std::invalid_argument("disambiguation needs at least two candidates");
  auto view = perception::full_map_view(w);
  perception::Frame frame = perception::render_frame(w, view, frame_id, now_ms);
  for (const auto& id : candidates) {
    const world::ObjectRecord* o = w.find_object(id);
    if (!o) continue;
    try {
      frame = perception::annotate_mark(frame, view.to_pixel(o->pose));
    } catch (const perception::OutOfBounds&) {
      // Off-frame candidates stay selectable; they just get no mark.
    }
  }
  frames.add(std::move(frame));
  return {std::move(candidates), frame_id, now_ms, now_ms + timeout_ms};
}

world::ObjectId resolve_disambiguation(const DisambiguationExchange& ex, const world::WorldModel& w,
                                       const perception::FrameRegistry& frames, perception::FrameId frame_id,
                                       perception::PixelPoint px) {
  const perception::Frame& f = frames.get(frame_id);
  world::Vec2 p = f.view.to_world(px);

  auto hit = perception::object_at_point(w, p);
  if (!hit || std::find(ex.candidates.begin(), ex.candidates.end(), *hit) == ex.candidates.end()) {
    throw PointNotACandidate("the selected point is not one of the candidates");
  }
  return *hit;
}

}  // namespace butler::behavior
