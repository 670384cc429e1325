#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tilesift/aggregator.hpp"

namespace tilesift {

enum class TileSelection { entropy, random };

TileSelection parse_selection(const std::string& s);
std::string selection_name(TileSelection s);

// Every pipeline knob, round-trippable through a flat key = value file
// (# starts a comment). Keys mirror the field names.
struct PipelineConfig {
    double target_resolution = 25.0;       // px per cm
    double max_downscale_ratio = 5.0;
    bool allow_upsampling = false;
    std::vector<int> tile_sizes = {100};   // square side / rectangular base side
    double overlap = 0.5;                  // fraction in [0, 1)
    bool rectangular = false;
    TileSelection tile_selection = TileSelection::entropy;
    double relax = 1.0;                    // sift relaxation factor in (0, 1]
    double bin_width = 0.05;               // entropy distribution bins
    AggregationMethod method = AggregationMethod::average;
    double boundary = 0.5;
    std::vector<double> weights;           // optional multi-scale combination
    std::uint64_t seed = 0;
    int epochs = 40;
    double learning_rate = 1.0;
    int n_folds = 4;
    std::string image_manifest;
    std::string out_dir = "out";

    bool operator==(const PipelineConfig&) const = default;
};

PipelineConfig parse_config_text(const std::string& text);
PipelineConfig parse_config_file(const std::string& path);
std::string serialize_config(const PipelineConfig& cfg);
void write_config_file(const std::string& path, const PipelineConfig& cfg);

// Throws on out-of-range values (overlap, relax, boundary, ...).
void validate_config(const PipelineConfig& cfg);

}  // namespace tilesift
