#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tilesift/aggregator.hpp"
#include "tilesift/classifier.hpp"
#include "tilesift/raster.hpp"

namespace tilesift {

// Painting-level fold assignment: every tile of an image follows the image,
// so no tile of a held-out painting can leak into training.
struct FoldPlan {
    int n_folds = 0;
    std::uint64_t seed = 0;
    std::map<std::string, int> assignments;  // image_id -> fold index
};

struct LabeledImageId {
    std::string image_id;
    int label = 0;
};

// Stratified by class with a seeded shuffle; per-class fold sizes differ by
// at most one.
FoldPlan plan_folds(const std::vector<LabeledImageId>& images, int n_folds,
                    std::uint64_t seed);

// All retained tiles of one image, featurized.
struct ImageTileSet {
    std::string image_id;
    int label = 0;
    std::vector<FeatureVector> features;
};

struct FoldConfig {
    int epochs = 40;
    double learning_rate = 1.0;
    std::uint64_t seed = 0;
    AggregationMethod method = AggregationMethod::average;
    double boundary = 0.5;
};

struct ImageScore {
    std::string image_id;
    int label = 0;
    double score = 0.0;
    double variance = 0.0;
    std::size_t tile_count = 0;
};

struct FoldResult {
    int fold = 0;
    std::vector<double> accuracy_per_epoch;  // image-level, one entry per checkpoint
    int chosen_epoch = 0;                    // 1-based
    double accuracy = 0.0;                   // at the chosen checkpoint
    std::vector<ImageScore> scores;          // held-out images, chosen checkpoint
    ErrorReport report;
    std::vector<std::string> train_image_ids;  // audit trail for leakage checks
};

// Trains the baseline on the non-fold images' tiles, scores the fold's
// images per checkpoint, and keeps the checkpoint with the best image-level
// accuracy.
FoldResult run_fold(const std::vector<ImageTileSet>& images, const FoldPlan& plan,
                    int fold, const FoldConfig& cfg);

// External-model variant: probabilities come from a manifest instead of a
// trained baseline, so there is no checkpoint sweep.
FoldResult score_fold_external(const std::vector<ImageTileSet>& images,
                               const FoldPlan& plan, int fold,
                               const ExternalProbabilities& probs, int scale_id,
                               const std::vector<std::vector<int>>& tile_indices,
                               const FoldConfig& cfg);

// Argmax with ties resolved to the earliest epoch. Input index i holds the
// image-level accuracy of the checkpoint after epoch i+1.
std::size_t select_checkpoint(const std::vector<double>& image_level_accuracies);

std::vector<double> checkpoint_accuracies(const std::vector<LogisticModel>& checkpoints,
                                          const std::vector<ImageTileSet>& validation,
                                          AggregationMethod method, double boundary);

// Full selection: image-level accuracy per checkpoint, argmax, earliest on
// ties; returns the winning version_id.
std::string select_checkpoint(const std::vector<LogisticModel>& checkpoints,
                              const std::vector<ImageTileSet>& validation,
                              AggregationMethod method, double boundary);

// Synthetic two-class dataset for end-to-end verification. Each image is a
// flat background (constant value drawn per image, uncorrelated with the
// class) with high-entropy textured patches; class 1 patches are jittered
// checkerboards, class 0 patches jittered diagonal stripes. Background-only
// tiles always fall below the whole-image entropy, textured-patch tiles
// always meet it.
struct SyntheticConfig {
    int images_per_class = 40;
    int width = 256;
    int height = 256;
    int patch_size = 96;
    int patches_per_image = 3;
    int cell = 4;        // checkerboard cell, px
    int band = 4;        // stripe band width, px
    int jitter = 40;     // +/- uniform value jitter inside patches
};

std::vector<SourceImage> generate_synthetic(const SyntheticConfig& cfg, std::uint64_t seed);

}  // namespace tilesift
