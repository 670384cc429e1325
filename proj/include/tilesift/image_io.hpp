#pragma once

#include <string>

#include "tilesift/raster.hpp"

namespace tilesift {

// Decodes PNG or JPEG bytes to grayscale. Color inputs go through
// luminance(); grayscale inputs pass through untouched. 16-bit PNGs are
// rejected (the pipeline is 8-bit end to end).
ImageU8 decode_image_file(const std::string& path);

// 8-bit grayscale PNG writer. Output bytes depend only on the pixels, so
// repeated runs are byte-identical.
void write_png_gray(const std::string& path, const ImageU8& img);

}  // namespace tilesift
