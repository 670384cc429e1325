#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tilesift/raster.hpp"

namespace tilesift {

// One tile size in the multi-scale sweep. The stride is derived from the
// overlap fraction per axis: stride = max(1, round(tile * (1 - overlap))).
struct TileScale {
    int scale_id = 1;
    int tile_w = 0;
    int tile_h = 0;
    double overlap = 0.0;  // fraction in [0, 1)

    int stride_x() const;
    int stride_y() const;
};

// Deterministic row-major enumeration of tile origins for one image.
struct TileGrid {
    TileScale scale;
    std::vector<std::pair<int, int>> origins;  // (x, y)
    std::size_t count() const { return origins.size(); }
};

struct TileRecord {
    std::string image_id;
    int scale_id = 0;
    int tile_index = 0;
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
    double entropy = 0.0;
    bool retained = false;
};

// Per-axis origins: 0, s, 2s, ... while origin + tile <= dim, plus a
// flush-to-edge origin at dim - tile when the lattice leaves a margin.
// Empty when dim < tile.
std::vector<int> axis_origins(int dim, int tile, int stride);

TileGrid generate_grid(const ImageU8& img, const TileScale& scale);

// Aspect-matched rectangular tile dimensions with area ~ base_side^2:
// tile_w = round(base * sqrt(ar)), tile_h = round(base / sqrt(ar)).
TileScale rectangular_scale(const ImageU8& img, int base_side, double overlap,
                            int scale_id = 1);

ImageU8 extract_tile(const ImageU8& img, const Rect& r);

std::vector<TileRecord> make_records(const std::string& image_id, const TileGrid& grid);

// Baseline sampler: n origins uniform over every in-bounds pixel origin
// (not just the stride lattice), with replacement, pinned to the seed.
std::vector<TileRecord> random_tile_sample(const ImageU8& img, const TileScale& scale,
                                           std::size_t n, std::uint64_t seed,
                                           const std::string& image_id = "");

}  // namespace tilesift
