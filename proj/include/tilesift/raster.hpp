#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tilesift {

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
};

// Row-major 8-bit grayscale raster.
struct ImageU8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    ImageU8() = default;
    ImageU8(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h),
          pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    const std::uint8_t* row(int y) const {
        return pixels.data() + static_cast<std::size_t>(y) * width;
    }
    std::uint8_t* row(int y) {
        return pixels.data() + static_cast<std::size_t>(y) * width;
    }
    bool empty() const { return width <= 0 || height <= 0; }
    bool contains(const Rect& r) const {
        return r.w >= 1 && r.h >= 1 && r.x >= 0 && r.y >= 0 &&
               r.x + r.w <= width && r.y + r.h <= height;
    }
};

// An image plus the metadata the pipeline tracks for it: its physical
// digitization resolution (pixels per cm of canvas) and an optional
// binary label (1 = target artist).
struct SourceImage {
    std::string image_id;
    ImageU8 image;
    double native_resolution = 0.0;
    std::optional<int> label;
};

struct ResolutionPolicy {
    double target_resolution = 25.0;
    double max_downscale_ratio = 5.0;
    bool allow_upsampling = false;
};

struct ScreenVerdict {
    bool accepted = false;
    std::string reason;
};

// ITU-R 601 luminance, rounded half-up. Maps R=G=B=v to v exactly.
std::uint8_t luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Decodes a PNG or JPEG file (sniffed by signature) to 8-bit grayscale,
// attaching resolution metadata and an optional label. image_id defaults
// to the file stem.
SourceImage load_image(const std::string& path, double native_resolution,
                       std::optional<int> label = std::nullopt,
                       std::string image_id = "");

// Accept/reject an image for normalization. Never throws: rejection
// reasons ("upsampling", excessive downscale ratio) come back in the verdict.
ScreenVerdict screen_candidate(const SourceImage& img, const ResolutionPolicy& policy);

// Box (area-average) resample to the target resolution. Output dimensions
// are round-half-up of dim * target / native; identical resolutions are a
// pixel-exact identity.
ImageU8 resample(const ImageU8& img, double native_resolution, double target_resolution);
SourceImage resample(const SourceImage& img, double target_resolution);

}  // namespace tilesift
