#pragma once

// Shared fixtures for the test binaries: throwaway directories, synthetic
// rasters, and small file helpers.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tilesift/raster.hpp"
#include "tilesift/util.hpp"

namespace testutil {

// Unique scratch directory, removed when the fixture goes out of scope.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& name) {
        path = std::filesystem::temp_directory_path() /
               ("tilesift_test_" + name + "_" + std::to_string(counter()++));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string str() const { return path.string(); }
    std::string file(const std::string& rel) const { return (path / rel).string(); }

  private:
    static int& counter() {
        static int n = 0;
        return n;
    }
};

inline tilesift::ImageU8 noise_image(int w, int h, std::uint64_t seed) {
    tilesift::ImageU8 img(w, h);
    std::mt19937_64 rng(seed);
    for (auto& p : img.pixels)
        p = static_cast<std::uint8_t>(tilesift::bounded_uniform(rng, 256));
    return img;
}

inline tilesift::ImageU8 checkerboard(int w, int h, int cell, std::uint8_t lo,
                                      std::uint8_t hi) {
    tilesift::ImageU8 img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            img.at(x, y) = ((x / cell + y / cell) % 2 == 0) ? lo : hi;
    return img;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("test helper: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("test helper: cannot write " + path);
    out << text;
}

}  // namespace testutil
