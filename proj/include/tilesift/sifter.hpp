#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tilesift/tiler.hpp"

namespace tilesift {

// relax scales the whole-image entropy threshold: 1.0 is the strict
// criterion, 0.99 relaxes it by 1%. low_entropy_mode inverts the
// comparison (retain tiles at or below the threshold); it is exposed as an
// experimental flag only.
struct SiftPolicy {
    double relax = 1.0;
    bool low_entropy_mode = false;
};

struct SiftResult {
    std::string image_id;
    int scale_id = 0;
    std::size_t retained_count = 0;
    std::size_t candidate_count = 0;
    double threshold_bits = 0.0;
};

// Marks each record retained iff tile entropy >= relax * image entropy
// (inclusive, so exact ties are kept). Updates records in place.
SiftResult sift(std::vector<TileRecord>& tiles, double image_entropy_bits,
                const SiftPolicy& policy);

double retention_rate(const SiftResult& r);

// Histogram of tile entropies over [0, 8] bits, plus the values a
// distribution plot needs: the mean tile entropy and the image-level
// entropy marker.
struct EntropyDistribution {
    double bin_width = 0.05;
    std::vector<std::uint64_t> counts;
    double mean_bits = 0.0;
    double image_entropy_bits = 0.0;

    double bin_low(std::size_t i) const { return bin_width * static_cast<double>(i); }
    double bin_high(std::size_t i) const { return bin_width * static_cast<double>(i + 1); }
};

EntropyDistribution entropy_distribution(const std::vector<TileRecord>& tiles,
                                         double bin_width,
                                         double image_entropy_bits);

}  // namespace tilesift
