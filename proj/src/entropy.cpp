#include "tilesift/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace tilesift {

Histogram256 histogram(const ImageU8& img, const Rect& region) {
    if (region.w < 1 || region.h < 1) {
        throw std::invalid_argument("histogram: empty region");
    }
    if (!img.contains(region)) {
        throw std::invalid_argument("histogram: region out of bounds");
    }
    Histogram256 h;
    for (int y = region.y; y < region.y + region.h; ++y) {
        const std::uint8_t* row = img.row(y);
        for (int x = region.x; x < region.x + region.w; ++x) {
            ++h.counts[row[x]];
        }
    }
    h.total = static_cast<std::uint64_t>(region.w) * static_cast<std::uint64_t>(region.h);
    return h;
}

double shannon_entropy(const Histogram256& h) {
    if (h.total == 0) {
        throw std::invalid_argument("shannon_entropy: empty histogram");
    }
    double total = static_cast<double>(h.total);
    double bits = 0.0;
    for (int k = 0; k < 256; ++k) {
        std::uint64_t c = h.counts[k];
        if (c == 0) continue;  // 0 * log2(0) := 0
        double p = static_cast<double>(c) / total;
        bits -= p * std::log2(p);
    }
    if (bits < 0.0) bits = 0.0;
    if (bits > 8.0) bits = 8.0;
    return bits;
}

double image_entropy(const ImageU8& img) {
    if (img.empty()) {
        throw std::invalid_argument("image_entropy: empty image");
    }
    return shannon_entropy(histogram(img, Rect{0, 0, img.width, img.height}));
}

namespace {

// Adds (sign +1) or removes (sign -1) the pixel columns [x0, x1) over the
// tile's row span.
template <int Sign>
void apply_columns(const ImageU8& img, Histogram256& h, int x0, int x1, int y0, int rows) {
    for (int y = y0; y < y0 + rows; ++y) {
        const std::uint8_t* row = img.row(y);
        for (int x = x0; x < x1; ++x) {
            if constexpr (Sign > 0) {
                ++h.counts[row[x]];
                ++h.total;
            } else {
                --h.counts[row[x]];
                --h.total;
            }
        }
    }
}

}  // namespace

std::vector<double> tile_entropies(const ImageU8& img, const TileGrid& grid) {
    const int w = grid.scale.tile_w;
    const int h = grid.scale.tile_h;
    std::vector<double> out;
    out.reserve(grid.origins.size());

    std::size_t i = 0;
    while (i < grid.origins.size()) {
        auto [x, y] = grid.origins[i];
        Histogram256 hist = histogram(img, Rect{x, y, w, h});
        out.push_back(shannon_entropy(hist));
        ++i;
        // Slide along the rest of this row of origins. Steps can be
        // irregular (the flush-to-edge origin), and a step >= w simply
        // swaps out the whole window.
        while (i < grid.origins.size() && grid.origins[i].second == y) {
            int nx = grid.origins[i].first;
            if (nx - x >= w) {
                hist = histogram(img, Rect{nx, y, w, h});
            } else {
                apply_columns<-1>(img, hist, x, nx, y, h);
                apply_columns<+1>(img, hist, x + w, nx + w, y, h);
            }
            x = nx;
            out.push_back(shannon_entropy(hist));
            ++i;
        }
    }
    return out;
}

}  // namespace tilesift
