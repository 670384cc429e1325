#include "tilesift/tiler.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "tilesift/util.hpp"

namespace tilesift {

namespace {

void validate_scale(const TileScale& scale) {
    if (scale.tile_w < 1 || scale.tile_h < 1) {
        throw std::invalid_argument("tile dimensions must be >= 1");
    }
    if (!(scale.overlap >= 0.0 && scale.overlap < 1.0)) {
        throw std::invalid_argument("overlap must be in [0, 1), got " +
                                    fmt_double(scale.overlap));
    }
}

}  // namespace

int TileScale::stride_x() const {
    return std::max(1, round_half_up(tile_w * (1.0 - overlap)));
}

int TileScale::stride_y() const {
    return std::max(1, round_half_up(tile_h * (1.0 - overlap)));
}

std::vector<int> axis_origins(int dim, int tile, int stride) {
    std::vector<int> origins;
    if (dim < tile) return origins;
    for (int o = 0; o + tile <= dim; o += stride) {
        origins.push_back(o);
    }
    if (origins.back() != dim - tile) {
        origins.push_back(dim - tile);
    }
    return origins;
}

TileGrid generate_grid(const ImageU8& img, const TileScale& scale) {
    validate_scale(scale);
    TileGrid grid;
    grid.scale = scale;
    std::vector<int> xs = axis_origins(img.width, scale.tile_w, scale.stride_x());
    std::vector<int> ys = axis_origins(img.height, scale.tile_h, scale.stride_y());
    grid.origins.reserve(xs.size() * ys.size());
    for (int y : ys) {
        for (int x : xs) {
            grid.origins.emplace_back(x, y);
        }
    }
    return grid;
}

TileScale rectangular_scale(const ImageU8& img, int base_side, double overlap, int scale_id) {
    if (base_side < 1) {
        throw std::invalid_argument("rectangular_scale: base side must be >= 1");
    }
    if (img.empty()) {
        throw std::invalid_argument("rectangular_scale: empty image");
    }
    double ar = static_cast<double>(img.width) / static_cast<double>(img.height);
    int w = round_half_up(base_side * std::sqrt(ar));
    int h = round_half_up(base_side / std::sqrt(ar));
    if (w < 1 || h < 1) {
        throw std::invalid_argument("rectangular_scale: degenerate aspect ratio " +
                                    fmt_double(ar));
    }
    TileScale scale{scale_id, w, h, overlap};
    validate_scale(scale);
    return scale;
}

ImageU8 extract_tile(const ImageU8& img, const Rect& r) {
    if (!img.contains(r)) {
        throw std::invalid_argument("extract_tile: geometry out of bounds");
    }
    ImageU8 tile(r.w, r.h);
    for (int y = 0; y < r.h; ++y) {
        const std::uint8_t* src = img.row(r.y + y) + r.x;
        std::copy(src, src + r.w, tile.row(y));
    }
    return tile;
}

std::vector<TileRecord> make_records(const std::string& image_id, const TileGrid& grid) {
    std::vector<TileRecord> records;
    records.reserve(grid.origins.size());
    int index = 0;
    for (auto [x, y] : grid.origins) {
        TileRecord rec;
        rec.image_id = image_id;
        rec.scale_id = grid.scale.scale_id;
        rec.tile_index = index++;
        rec.x = x;
        rec.y = y;
        rec.w = grid.scale.tile_w;
        rec.h = grid.scale.tile_h;
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<TileRecord> random_tile_sample(const ImageU8& img, const TileScale& scale,
                                           std::size_t n, std::uint64_t seed,
                                           const std::string& image_id) {
    validate_scale(scale);
    if (n < 1) {
        throw std::invalid_argument("random_tile_sample: n must be >= 1");
    }
    if (img.width < scale.tile_w || img.height < scale.tile_h) {
        throw std::invalid_argument("random_tile_sample: tile exceeds image");
    }
    std::mt19937_64 rng(seed);
    std::uint64_t max_x = static_cast<std::uint64_t>(img.width - scale.tile_w) + 1;
    std::uint64_t max_y = static_cast<std::uint64_t>(img.height - scale.tile_h) + 1;
    std::vector<TileRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        TileRecord rec;
        rec.image_id = image_id;
        rec.scale_id = scale.scale_id;
        rec.tile_index = static_cast<int>(i);
        rec.x = static_cast<int>(bounded_uniform(rng, max_x));
        rec.y = static_cast<int>(bounded_uniform(rng, max_y));
        rec.w = scale.tile_w;
        rec.h = scale.tile_h;
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace tilesift
