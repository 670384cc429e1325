#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tilesift/raster.hpp"

namespace tilesift {

using FeatureVector = std::vector<double>;

// featurize() output layout: 32-bin normalized luminance histogram
// (bin width 8), mean/255, stddev/255, tile entropy/8.
inline constexpr int kTileFeatureDim = 35;

FeatureVector featurize(const ImageU8& tile);

// Logistic regression over tile features. Prediction is sigmoid(w.x + b),
// always in [0, 1].
struct LogisticModel {
    std::vector<double> weights;
    double bias = 0.0;
    std::string version_id;
    std::uint64_t seed = 0;
    int epoch = 0;

    double predict(const FeatureVector& x) const;
};

struct TrainResult {
    LogisticModel model;                    // after the last epoch (initial if epochs == 0)
    std::vector<LogisticModel> checkpoints; // one snapshot per completed epoch
    std::vector<double> loss;               // training loss after each epoch
};

// Full-batch gradient descent on mean binary cross-entropy, starting from
// zero weights. A checkpoint is snapshotted after every epoch so model
// selection can compare all saved versions.
TrainResult train_baseline(const std::vector<FeatureVector>& features,
                           const std::vector<int>& labels, int epochs,
                           double learning_rate, std::uint64_t seed);

double cross_entropy_loss(const LogisticModel& model,
                          const std::vector<FeatureVector>& features,
                          const std::vector<int>& labels);

// Gradient of the mean cross-entropy; last component is d/d(bias).
std::vector<double> loss_gradient(const LogisticModel& model,
                                  const std::vector<FeatureVector>& features,
                                  const std::vector<int>& labels);

void save_model_json(const std::string& path, const LogisticModel& model);
LogisticModel load_model_json(const std::string& path);

// Identifies one tile across manifests.
struct TileKey {
    std::string image_id;
    int scale_id = 0;
    int tile_index = 0;

    auto operator<=>(const TileKey&) const = default;
};

// Probabilities produced by an externally trained model, keyed by tile.
// The file protocol is a CSV with header image_id,scale_id,tile_index,prob.
class ExternalProbabilities {
  public:
    static ExternalProbabilities load_csv(const std::string& path);
    void write_csv(const std::string& path) const;

    void insert(const TileKey& key, double prob);
    bool contains(const TileKey& key) const;
    // Throws (naming the key) when the manifest has no row for the tile.
    double lookup(const TileKey& key) const;
    std::size_t size() const { return probs_.size(); }

  private:
    std::map<TileKey, double> probs_;
};

double predict_proba(const LogisticModel& model, const FeatureVector& x);
double predict_proba(const ExternalProbabilities& probs, const TileKey& key);

}  // namespace tilesift
