#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace butler::perception {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

struct PixelPoint {
  int x = 0;
  int y = 0;
  bool operator==(const PixelPoint&) const = default;
};

/// 8-bit RGB raster, row-major, origin top-left.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  bool contains(PixelPoint p) const { return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_; }

  Rgb at(PixelPoint p) const;
  void set(PixelPoint p, Rgb c);  // silently clipped

  void fill_rect(int x0, int y0, int x1, int y1, Rgb c);  // inclusive corners
  void stroke_rect(int x0, int y0, int x1, int y1, Rgb c);
  void fill_circle(PixelPoint center, int radius, Rgb c);
  void ring(PixelPoint center, int outer, int inner, Rgb c);
  void line(PixelPoint a, PixelPoint b, Rgb c);
  /// 3x5 bitmap font, `scale` pixels per font dot. Unknown glyphs render blank.
  void text(PixelPoint origin, std::string_view s, Rgb c, int scale = 1);

  const std::vector<std::uint8_t>& data() const { return data_; }
  bool operator==(const Image&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

}  // namespace butler::perception
