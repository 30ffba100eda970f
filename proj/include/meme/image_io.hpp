#pragma once

#include <string>

#include "meme/image.hpp"

namespace meme::io {

/// Decode a PNG or JPEG file (detected by magic bytes) into RGB pixels.
img::PixelGrid load_image(const std::string& path);

/// Write an 8-bit RGB PNG. Used by the fixture generator and tests.
void write_png(const std::string& path, const img::PixelGrid& grid);

}  // namespace meme::io
