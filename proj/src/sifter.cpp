#include "tilesift/sifter.hpp"

#include <cmath>
#include <stdexcept>

#include "tilesift/util.hpp"

namespace tilesift {

SiftResult sift(std::vector<TileRecord>& tiles, double image_entropy_bits,
                const SiftPolicy& policy) {
    if (!(policy.relax > 0.0 && policy.relax <= 1.0)) {
        throw std::invalid_argument("sift: relax must be in (0, 1], got " +
                                    fmt_double(policy.relax));
    }
    SiftResult result;
    result.threshold_bits = policy.relax * image_entropy_bits;
    result.candidate_count = tiles.size();
    if (!tiles.empty()) {
        result.image_id = tiles.front().image_id;
        result.scale_id = tiles.front().scale_id;
    }
    for (TileRecord& t : tiles) {
        t.retained = policy.low_entropy_mode ? (t.entropy <= result.threshold_bits)
                                             : (t.entropy >= result.threshold_bits);
        if (t.retained) ++result.retained_count;
    }
    return result;
}

double retention_rate(const SiftResult& r) {
    if (r.candidate_count == 0) {
        throw std::invalid_argument("retention_rate: zero candidates");
    }
    return static_cast<double>(r.retained_count) / static_cast<double>(r.candidate_count);
}

EntropyDistribution entropy_distribution(const std::vector<TileRecord>& tiles,
                                         double bin_width,
                                         double image_entropy_bits) {
    if (tiles.empty()) {
        throw std::invalid_argument("entropy_distribution: empty tile list");
    }
    if (!(bin_width > 0.0)) {
        throw std::invalid_argument("entropy_distribution: bin width must be positive");
    }
    EntropyDistribution dist;
    dist.bin_width = bin_width;
    dist.image_entropy_bits = image_entropy_bits;
    auto n_bins = static_cast<std::size_t>(std::ceil(8.0 / bin_width));
    if (n_bins < 1) n_bins = 1;
    dist.counts.assign(n_bins, 0);
    double sum = 0.0;
    for (const TileRecord& t : tiles) {
        sum += t.entropy;
        auto bin = static_cast<std::size_t>(std::floor(t.entropy / bin_width));
        if (bin >= n_bins) bin = n_bins - 1;  // entropy exactly 8 lands in the top bin
        ++dist.counts[bin];
    }
    dist.mean_bits = sum / static_cast<double>(tiles.size());
    return dist;
}

}  // namespace tilesift
