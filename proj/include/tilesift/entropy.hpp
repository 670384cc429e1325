#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tilesift/raster.hpp"
#include "tilesift/tiler.hpp"

namespace tilesift {

struct Histogram256 {
    std::array<std::uint64_t, 256> counts{};
    std::uint64_t total = 0;

    void add(std::uint8_t v) {
        ++counts[v];
        ++total;
    }
    void remove(std::uint8_t v) {
        --counts[v];
        --total;
    }
};

// Pixel-value histogram of a rectangular region. Throws on empty or
// out-of-bounds regions.
Histogram256 histogram(const ImageU8& img, const Rect& region);

// H = -sum_k p_k log2(p_k) with p_k = counts[k] / total and 0 log 0 = 0.
// Result is in [0, 8] bits.
double shannon_entropy(const Histogram256& h);

double image_entropy(const ImageU8& img);

// Entropy of every tile in the grid, in grid order. Maintains a sliding
// histogram along each row of origins (subtract departing columns, add
// entering ones), so results match per-tile recomputation bin for bin.
std::vector<double> tile_entropies(const ImageU8& img, const TileGrid& grid);

}  // namespace tilesift
