#include "butler/perception/frame.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "butler/perception/errors.hpp"
#include "butler/world/queries.hpp"

namespace butler::perception {

using world::ObjectRecord;
using world::Vec2;
using world::WorldModel;
using world::ZoneKind;

namespace {

constexpr Rgb kBackground{236, 236, 232};
constexpr Rgb kObstacle{90, 90, 90};
constexpr Rgb kSurface{205, 170, 125};
constexpr Rgb kAppliance{170, 190, 210};
constexpr Rgb kRegion{220, 228, 214};
constexpr Rgb kOutline{60, 60, 60};
constexpr Rgb kLabel{20, 20, 20};
constexpr Rgb kRobot{30, 80, 200};
constexpr Rgb kHeading{255, 255, 255};

Rgb zone_color(ZoneKind k) {
  switch (k) {
    case ZoneKind::surface: return kSurface;
    case ZoneKind::appliance: return kAppliance;
    case ZoneKind::region: return kRegion;
  }
  return kRegion;
}

}  // namespace

PixelPoint ViewTransform::to_pixel(Vec2 p) const {
  return {static_cast<int>(std::lround(to_pixel_x(p.x))), static_cast<int>(std::lround(to_pixel_y(p.y)))};
}

Vec2 ViewTransform::to_world(PixelPoint p) const { return to_world(static_cast<double>(p.x), static_cast<double>(p.y)); }

ViewTransform full_map_view(const WorldModel&, double scale) { return {scale, 0.0, 0.0}; }

int frame_width(const WorldModel& w, const ViewTransform& view) {
  return static_cast<int>(std::ceil(view.scale * w.grid->bounds().max_x));
}

int frame_height(const WorldModel& w, const ViewTransform& view) {
  return static_cast<int>(std::ceil(view.scale * w.grid->bounds().max_y));
}

Rgb category_color(std::string_view category) {
  // FNV-1a keeps colors stable across runs and platforms.
  std::uint32_t h = 2166136261u;
  for (char c : category) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 16777619u;
  }
  return {static_cast<std::uint8_t>(60 + (h & 0x7f)), static_cast<std::uint8_t>(60 + ((h >> 8) & 0x7f)),
          static_cast<std::uint8_t>(60 + ((h >> 16) & 0x7f))};
}

Frame render_frame(const WorldModel& w, const ViewTransform& view, FrameId frame_id, std::int64_t timestamp_ms) {
  Frame f;
  f.frame_id = frame_id;
  f.timestamp_ms = timestamp_ms;
  f.view = view;
  f.image = Image(frame_width(w, view), frame_height(w, view), kBackground);
  Image& img = f.image;

  const auto& grid = *w.grid;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (!grid.occupied({x, y})) continue;
      Vec2 lo{x * grid.resolution(), y * grid.resolution()};
      Vec2 hi{(x + 1) * grid.resolution(), (y + 1) * grid.resolution()};
      img.fill_rect(static_cast<int>(std::floor(view.to_pixel_x(lo.x))), static_cast<int>(std::floor(view.to_pixel_y(lo.y))),
                    static_cast<int>(std::ceil(view.to_pixel_x(hi.x))) - 1, static_cast<int>(std::ceil(view.to_pixel_y(hi.y))) - 1,
                    kObstacle);
    }
  }

  for (const auto& z : w.zones) {
    PixelPoint a = view.to_pixel({z.footprint.min_x, z.footprint.min_y});
    PixelPoint b = view.to_pixel({z.footprint.max_x, z.footprint.max_y});
    img.fill_rect(a.x, a.y, b.x, b.y, zone_color(z.kind));
    img.stroke_rect(a.x, a.y, b.x, b.y, kOutline);
    img.text({a.x + 2, a.y + 2}, z.name, kLabel);
  }

  const PixelPoint robot_px = view.to_pixel(w.robot.base.position());
  for (const auto& [id, obj] : w.objects) {
    if (!world::is_visible(w, id)) continue;
    bool held = obj.parent.kind == world::ParentRef::Kind::gripper;
    PixelPoint c = held ? PixelPoint{robot_px.x, robot_px.y - 8} : view.to_pixel(obj.pose);
    int radius = std::max(3, static_cast<int>(std::lround(obj.footprint_radius * view.scale)));
    Rgb color = category_color(obj.category);
    if (obj.is_container) {
      img.fill_rect(c.x - radius, c.y - radius, c.x + radius, c.y + radius, color);
      img.stroke_rect(c.x - radius, c.y - radius, c.x + radius, c.y + radius,
                      obj.is_open.value_or(false) ? Rgb{0, 160, 0} : kOutline);
    } else {
      img.fill_circle(c, radius, color);
    }
    img.text({c.x + radius + 2, c.y - 2}, obj.name, kLabel);
  }

  int robot_r = std::max(4, static_cast<int>(std::lround(0.2 * view.scale)));
  img.fill_circle(robot_px, robot_r, kRobot);
  PixelPoint tip{robot_px.x + static_cast<int>(std::lround(std::cos(w.robot.base.heading) * robot_r)),
                 robot_px.y + static_cast<int>(std::lround(std::sin(w.robot.base.heading) * robot_r))};
  img.line(robot_px, tip, kHeading);
  return f;
}

Frame annotate_mark(const Frame& f, PixelPoint px) {
  if (!f.image.contains(px)) {
    throw OutOfBounds("mark at (" + std::to_string(px.x) + "," + std::to_string(px.y) + ") outside " +
                      std::to_string(f.width()) + "x" + std::to_string(f.height()) + " frame");
  }
  Frame out = f;
  out.image.ring(px, kMarkOuterRadius, kMarkInnerRadius, kMarkColor);
  return out;
}

void FrameRegistry::add(Frame f) {
  frames_.push_back(std::move(f));
  while (frames_.size() > kCapacity) frames_.pop_front();
}

const Frame& FrameRegistry::get(FrameId id) const {
  for (const auto& f : frames_) {
    if (f.frame_id == id) return f;
  }
  throw StaleFrame("frame " + std::to_string(id) + " is not in the registry");
}

bool FrameRegistry::contains(FrameId id) const {
  return std::any_of(frames_.begin(), frames_.end(), [&](const Frame& f) { return f.frame_id == id; });
}

}  // namespace butler::perception
