#include "butler/perception/png.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <stdexcept>

namespace butler::perception {

namespace {

void write_to_vector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void flush_noop(png_structp) {}

struct ReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

void read_from_span(png_structp png, png_bytep data, png_size_t length) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->offset + length > cur->bytes.size()) png_error(png, "truncated PNG");
  std::memcpy(data, cur->bytes.data() + cur->offset, length);
  cur->offset += length;
}

void silent_warning(png_structp, png_const_charp) {}

// libpng reports errors by longjmp; these helpers keep every object with a
// destructor outside the setjmp scope.
bool write_rows(png_structp png, png_infop info, const Image& img, std::vector<std::uint8_t>* out) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_write_fn(png, out, write_to_vector, flush_noop);
  png_set_compression_level(png, 1);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::uint8_t* base = img.data().data();
  for (int y = 0; y < img.height(); ++y) {
    png_write_row(png, const_cast<png_bytep>(base + static_cast<std::size_t>(y) * img.width() * 3));
  }
  png_write_end(png, nullptr);
  return true;
}

bool read_header(png_structp png, png_infop info, ReadCursor* cursor, png_uint_32* w, png_uint_32* h, bool* rgb8) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_read_fn(png, cursor, read_from_span);
  png_read_info(png, info);
  *w = png_get_image_width(png, info);
  *h = png_get_image_height(png, info);
  *rgb8 = png_get_color_type(png, info) == PNG_COLOR_TYPE_RGB && png_get_bit_depth(png, info) == 8;
  return true;
}

bool read_pixels(png_structp png, std::uint8_t* rows, png_uint_32 w, png_uint_32 h) {
  if (setjmp(png_jmpbuf(png))) return false;
  for (png_uint_32 y = 0; y < h; ++y) png_read_row(png, rows + static_cast<std::size_t>(y) * w * 3, nullptr);
  return true;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& img) {
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, silent_warning);
  if (!png) throw std::runtime_error("png: cannot create write struct");
  png_infop info = png_create_info_struct(png);
  bool ok = info && write_rows(png, info, img, &out);
  png_destroy_write_struct(&png, &info);
  if (!ok) throw std::runtime_error("png: encoding failed");
  return out;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) throw std::runtime_error("png: bad signature");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, silent_warning);
  if (!png) throw std::runtime_error("png: cannot create read struct");
  png_infop info = png_create_info_struct(png);
  ReadCursor cursor{bytes, 0};
  png_uint_32 w = 0, h = 0;
  bool rgb8 = false;
  bool ok = info && read_header(png, info, &cursor, &w, &h, &rgb8);
  std::vector<std::uint8_t> rows;
  if (ok && rgb8) {
    rows.resize(static_cast<std::size_t>(w) * h * 3);
    ok = read_pixels(png, rows.data(), w, h);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (!ok) throw std::runtime_error("png: decoding failed");
  if (!rgb8) throw std::runtime_error("png: expected 8-bit RGB");

  Image img(static_cast<int>(w), static_cast<int>(h));
  for (png_uint_32 y = 0; y < h; ++y) {
    for (png_uint_32 x = 0; x < w; ++x) {
      const std::uint8_t* p = rows.data() + (static_cast<std::size_t>(y) * w + x) * 3;
      img.set({static_cast<int>(x), static_cast<int>(y)}, {p[0], p[1], p[2]});
    }
  }
  return img;
}

}  // namespace butler::perception
