#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>

#include "butler/perception/raster.hpp"
#include "butler/world/world_model.hpp"

namespace butler::perception {

using FrameId = std::uint64_t;

/// World-to-pixel mapping restricted to uniform scale plus translation.
struct ViewTransform {
  double scale = 50.0;  // px per meter
  double tx = 0.0;      // px
  double ty = 0.0;      // px

  double to_pixel_x(double x) const { return scale * x + tx; }
  double to_pixel_y(double y) const { return scale * y + ty; }
  PixelPoint to_pixel(world::Vec2 p) const;
  world::Vec2 to_world(PixelPoint p) const;
  world::Vec2 to_world(double px, double py) const { return {(px - tx) / scale, (py - ty) / scale}; }

  bool operator==(const ViewTransform&) const = default;
};

/// Top-down view framing the whole map at `scale` px/m.
ViewTransform full_map_view(const world::WorldModel& w, double scale = 50.0);
int frame_width(const world::WorldModel& w, const ViewTransform& view);
int frame_height(const world::WorldModel& w, const ViewTransform& view);

struct Frame {
  FrameId frame_id = 0;
  std::int64_t timestamp_ms = 0;
  Image image;
  ViewTransform view;

  int width() const { return image.width(); }
  int height() const { return image.height(); }
};

/// Schematic top-down render: zones, obstacles, visible objects (colored by
/// category and labeled) and the robot. Objects inside closed containers are
/// not drawn. The raster depends only on (w, view).
Frame render_frame(const world::WorldModel& w, const ViewTransform& view, FrameId frame_id, std::int64_t timestamp_ms);

Rgb category_color(std::string_view category);

inline constexpr Rgb kMarkColor{255, 0, 255};
inline constexpr int kMarkOuterRadius = 7;
inline constexpr int kMarkInnerRadius = 4;

/// Copy of `f` with a ring glyph centered at px. Throws OutOfBounds.
Frame annotate_mark(const Frame& f, PixelPoint px);

/// Keeps the most recent frames so that clicks on slightly old frames still resolve.
class FrameRegistry {
 public:
  static constexpr std::size_t kCapacity = 50;

  void add(Frame f);
  /// Throws StaleFrame when the id is unknown or evicted.
  const Frame& get(FrameId id) const;
  bool contains(FrameId id) const;
  const Frame* latest() const { return frames_.empty() ? nullptr : &frames_.back(); }
  std::size_t size() const { return frames_.size(); }

 private:
  std::deque<Frame> frames_;
};

}  // namespace butler::perception
