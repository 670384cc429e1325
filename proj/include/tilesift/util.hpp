#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace tilesift {

// Round-half-up for nonnegative quantities (dimensions, strides).
inline int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

// Locale-independent, shortest round-trip representation of a double.
std::string fmt_double(double v);

// Fixed-precision formatting (SVG coordinates, human-readable summaries).
std::string fmt_fixed(double v, int precision);

// Uniform integer in [0, n); uses the multiply-shift reduction so the
// draw sequence is identical across standard libraries.
inline std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

// In-place Fisher-Yates shuffle with a pinned draw sequence.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(bounded_uniform(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

// Stable sub-seed derivation for per-fold / per-image streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace tilesift
