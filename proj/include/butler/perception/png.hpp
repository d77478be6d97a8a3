#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "butler/perception/raster.hpp"

namespace butler::perception {

std::vector<std::uint8_t> encode_png(const Image& img);
/// Throws std::runtime_error on anything that is not an 8-bit RGB PNG.
Image decode_png(std::span<const std::uint8_t> bytes);

}  // namespace butler::perception
