#include "butler/perception/raster.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>

namespace butler::perception {

namespace {

// 3x5 glyphs; each row is three bits, MSB on the left.
struct Glyph {
  char ch;
  std::array<std::uint8_t, 5> rows;
};

constexpr std::array<Glyph, 39> kFont{{
    {'a', {2, 5, 7, 5, 5}}, {'b', {6, 5, 6, 5, 6}}, {'c', {3, 4, 4, 4, 3}}, {'d', {6, 5, 5, 5, 6}},
    {'e', {7, 4, 6, 4, 7}}, {'f', {7, 4, 6, 4, 4}}, {'g', {3, 4, 5, 5, 3}}, {'h', {5, 5, 7, 5, 5}},
    {'i', {7, 2, 2, 2, 7}}, {'j', {1, 1, 1, 5, 2}}, {'k', {5, 5, 6, 5, 5}}, {'l', {4, 4, 4, 4, 7}},
    {'m', {5, 7, 7, 5, 5}}, {'n', {6, 5, 5, 5, 5}}, {'o', {2, 5, 5, 5, 2}}, {'p', {6, 5, 6, 4, 4}},
    {'q', {2, 5, 5, 6, 3}}, {'r', {6, 5, 6, 5, 5}}, {'s', {3, 4, 2, 1, 6}}, {'t', {7, 2, 2, 2, 2}},
    {'u', {5, 5, 5, 5, 7}}, {'v', {5, 5, 5, 5, 2}}, {'w', {5, 5, 7, 7, 5}}, {'x', {5, 5, 2, 5, 5}},
    {'y', {5, 5, 2, 2, 2}}, {'z', {7, 1, 2, 4, 7}}, {'0', {7, 5, 5, 5, 7}}, {'1', {2, 6, 2, 2, 7}},
    {'2', {6, 1, 2, 4, 7}}, {'3', {6, 1, 2, 1, 6}}, {'4', {5, 5, 7, 1, 1}}, {'5', {7, 4, 6, 1, 6}},
    {'6', {3, 4, 7, 5, 7}}, {'7', {7, 1, 1, 2, 2}}, {'8', {7, 5, 7, 5, 7}}, {'9', {7, 5, 7, 1, 6}},
    {'-', {0, 0, 7, 0, 0}}, {'_', {0, 0, 0, 0, 7}}, {'.', {0, 0, 0, 0, 2}},
}};

const Glyph* glyph_for(char c) {
  char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (const auto& g : kFont) {
    if (g.ch == lower) return &g;
  }
  return nullptr;
}

}  // namespace

Image::Image(int width, int height, Rgb fill)
    : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height * 3) {
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

Rgb Image::at(PixelPoint p) const {
  if (!contains(p)) return {};
  std::size_t i = (static_cast<std::size_t>(p.y) * width_ + p.x) * 3;
  return {data_[i], data_[i + 1], data_[i + 2]};
}

void Image::set(PixelPoint p, Rgb c) {
  if (!contains(p)) return;
  std::size_t i = (static_cast<std::size_t>(p.y) * width_ + p.x) * 3;
  data_[i] = c.r;
  data_[i + 1] = c.g;
  data_[i + 2] = c.b;
}

void Image::fill_rect(int x0, int y0, int x1, int y1, Rgb c) {
  for (int y = std::max(0, y0); y <= std::min(height_ - 1, y1); ++y) {
    for (int x = std::max(0, x0); x <= std::min(width_ - 1, x1); ++x) set({x, y}, c);
  }
}

void Image::stroke_rect(int x0, int y0, int x1, int y1, Rgb c) {
  for (int x = x0; x <= x1; ++x) {
    set({x, y0}, c);
    set({x, y1}, c);
  }
  for (int y = y0; y <= y1; ++y) {
    set({x0, y}, c);
    set({x1, y}, c);
  }
}

void Image::fill_circle(PixelPoint center, int radius, Rgb c) {
  ring(center, radius, -1, c);
}

void Image::ring(PixelPoint center, int outer, int inner, Rgb c) {
  const int outer2 = outer * outer;
  const int inner2 = inner < 0 ? -1 : inner * inner;
  for (int dy = -outer; dy <= outer; ++dy) {
    for (int dx = -outer; dx <= outer; ++dx) {
      int d2 = dx * dx + dy * dy;
      if (d2 <= outer2 && d2 > inner2) set({center.x + dx, center.y + dy}, c);
    }
  }
}

void Image::line(PixelPoint a, PixelPoint b, Rgb c) {
  int dx = std::abs(b.x - a.x), sx = a.x < b.x ? 1 : -1;
  int dy = -std::abs(b.y - a.y), sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    set(a, c);
    if (a == b) break;
    int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      a.x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      a.y += sy;
    }
  }
}

void Image::text(PixelPoint origin, std::string_view s, Rgb c, int scale) {
  int pen = origin.x;
  for (char ch : s) {
    if (const Glyph* g = glyph_for(ch)) {
      for (int row = 0; row < 5; ++row) {
        for (int col = 0; col < 3; ++col) {
          if (g->rows[row] & (4 >> col)) {
            fill_rect(pen + col * scale, origin.y + row * scale, pen + col * scale + scale - 1,
                      origin.y + row * scale + scale - 1, c);
          }
        }
      }
    }
    pen += 4 * scale;
  }
}

}  // namespace butler::perception
