#include "tilesift/classifier.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "tilesift/csv.hpp"
#include "tilesift/entropy.hpp"
#include "tilesift/util.hpp"

namespace tilesift {

FeatureVector featurize(const ImageU8& tile) {
    if (tile.empty()) {
        throw std::invalid_argument("featurize: empty tile");
    }
    Histogram256 h = histogram(tile, Rect{0, 0, tile.width, tile.height});
    double n = static_cast<double>(h.total);

    FeatureVector f(kTileFeatureDim, 0.0);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int k = 0; k < 256; ++k) {
        double c = static_cast<double>(h.counts[k]);
        f[k >> 3] += c / n;
        sum += c * k;
        sum_sq += c * static_cast<double>(k) * static_cast<double>(k);
    }
    double mean = sum / n;
    double var = sum_sq / n - mean * mean;
    if (var < 0.0) var = 0.0;
    f[32] = mean / 255.0;
    f[33] = std::sqrt(var) / 255.0;
    f[34] = shannon_entropy(h) / 8.0;
    return f;
}

namespace {

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    double e = std::exp(z);
    return e / (1.0 + e);
}

double dot_score(const LogisticModel& m, const FeatureVector& x) {
    if (x.size() != m.weights.size()) {
        throw std::invalid_argument("predict: feature dimension " + std::to_string(x.size()) +
                                    " does not match model dimension " +
                                    std::to_string(m.weights.size()));
    }
    double z = m.bias;
    for (std::size_t i = 0; i < x.size(); ++i) {
        z += m.weights[i] * x[i];
    }
    return z;
}

void check_training_input(const std::vector<FeatureVector>& features,
                          const std::vector<int>& labels) {
    if (features.empty() || features.size() != labels.size()) {
        throw std::invalid_argument("train_baseline: features and labels must be nonempty "
                                    "and aligned");
    }
    bool has_pos = false, has_neg = false;
    for (int y : labels) {
        if (y == 1) has_pos = true;
        else if (y == 0) has_neg = true;
        else throw std::invalid_argument("train_baseline: labels must be 0 or 1");
    }
    if (!has_pos || !has_neg) {
        throw std::invalid_argument("train_baseline: need at least one example of each class");
    }
    std::size_t dim = features.front().size();
    for (const auto& x : features) {
        if (x.size() != dim) {
            throw std::invalid_argument("train_baseline: inconsistent feature dimensions");
        }
    }
}

}  // namespace

double LogisticModel::predict(const FeatureVector& x) const {
    return sigmoid(dot_score(*this, x));
}

TrainResult train_baseline(const std::vector<FeatureVector>& features,
                           const std::vector<int>& labels, int epochs,
                           double learning_rate, std::uint64_t seed) {
    check_training_input(features, labels);
    if (epochs < 0) {
        throw std::invalid_argument("train_baseline: epochs must be >= 0");
    }
    if (learning_rate <= 0.0) {
        throw std::invalid_argument("train_baseline: learning rate must be positive");
    }

    std::size_t dim = features.front().size();
    TrainResult result;
    result.model.weights.assign(dim, 0.0);
    result.model.bias = 0.0;
    result.model.seed = seed;
    result.model.epoch = 0;
    result.model.version_id = "epoch-0";

    double inv_n = 1.0 / static_cast<double>(features.size());
    for (int epoch = 1; epoch <= epochs; ++epoch) {
        std::vector<double> grad_w(dim, 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < features.size(); ++i) {
            double err = sigmoid(dot_score(result.model, features[i])) - labels[i];
            const FeatureVector& x = features[i];
            for (std::size_t j = 0; j < dim; ++j) {
                grad_w[j] += err * x[j];
            }
            grad_b += err;
        }
        for (std::size_t j = 0; j < dim; ++j) {
            result.model.weights[j] -= learning_rate * grad_w[j] * inv_n;
        }
        result.model.bias -= learning_rate * grad_b * inv_n;
        result.model.epoch = epoch;
        result.model.version_id = "epoch-" + std::to_string(epoch);
        result.loss.push_back(cross_entropy_loss(result.model, features, labels));
        result.checkpoints.push_back(result.model);
    }
    return result;
}

double cross_entropy_loss(const LogisticModel& model,
                          const std::vector<FeatureVector>& features,
                          const std::vector<int>& labels) {
    if (features.empty() || features.size() != labels.size()) {
        throw std::invalid_argument("cross_entropy_loss: features and labels must be "
                                    "nonempty and aligned");
    }
    // -(1/N) sum [y log p + (1-y) log(1-p)], evaluated via a stable
    // softplus form: loss_i = log(1 + exp(-|z|)) + max(z, 0) - z*y.
    double total = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        double z = 0.0;
        {
            double acc = model.bias;
            const FeatureVector& x = features[i];
            for (std::size_t j = 0; j < x.size(); ++j) acc += model.weights[j] * x[j];
            z = acc;
        }
        total += std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - z * labels[i];
    }
    return total / static_cast<double>(features.size());
}

std::vector<double> loss_gradient(const LogisticModel& model,
                                  const std::vector<FeatureVector>& features,
                                  const std::vector<int>& labels) {
    if (features.empty() || features.size() != labels.size()) {
        throw std::invalid_argument("loss_gradient: features and labels must be nonempty "
                                    "and aligned");
    }
    std::size_t dim = model.weights.size();
    std::vector<double> grad(dim + 1, 0.0);
    double inv_n = 1.0 / static_cast<double>(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        double err = sigmoid(dot_score(model, features[i])) - labels[i];
        const FeatureVector& x = features[i];
        for (std::size_t j = 0; j < dim; ++j) {
            grad[j] += err * x[j] * inv_n;
        }
        grad[dim] += err * inv_n;
    }
    return grad;
}

void save_model_json(const std::string& path, const LogisticModel& model) {
    nlohmann::ordered_json j;
    j["weights"] = model.weights;
    j["bias"] = model.bias;
    j["version_id"] = model.version_id;
    j["seed"] = model.seed;
    j["epoch"] = model.epoch;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << "\n";
}

LogisticModel load_model_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed model JSON in " + path + ": " + e.what());
    }
    LogisticModel m;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.version_id = j.at("version_id").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.epoch = j.at("epoch").get<int>();
    return m;
}

ExternalProbabilities ExternalProbabilities::load_csv(const std::string& path) {
    CsvFile file = read_csv(path);
    const std::vector<std::string> expected = {"image_id", "scale_id", "tile_index", "prob"};
    if (file.header != expected) {
        throw std::runtime_error("probability manifest " + path +
                                 ": expected header image_id,scale_id,tile_index,prob");
    }
    ExternalProbabilities probs;
    for (const auto& row : file.rows) {
        if (row.size() != 4) {
            throw std::runtime_error("probability manifest " + path + ": malformed row");
        }
        TileKey key{row[0], std::stoi(row[1]), std::stoi(row[2])};
        double p = std::stod(row[3]);
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::runtime_error("probability manifest " + path + ": prob out of [0,1] for " +
                                     row[0]);
        }
        probs.probs_[key] = p;
    }
    return probs;
}

void ExternalProbabilities::write_csv(const std::string& path) const {
    CsvFile file;
    file.header = {"image_id", "scale_id", "tile_index", "prob"};
    for (const auto& [key, p] : probs_) {
        file.rows.push_back({key.image_id, std::to_string(key.scale_id),
                             std::to_string(key.tile_index), fmt_double(p)});
    }
    tilesift::write_csv(path, file);
}

void ExternalProbabilities::insert(const TileKey& key, double prob) {
    probs_[key] = prob;
}

bool ExternalProbabilities::contains(const TileKey& key) const {
    return probs_.count(key) > 0;
}

double ExternalProbabilities::lookup(const TileKey& key) const {
    auto it = probs_.find(key);
    if (it == probs_.end()) {
        throw std::runtime_error("missing probability for tile (image_id=" + key.image_id +
                                 ", scale_id=" + std::to_string(key.scale_id) +
                                 ", tile_index=" + std::to_string(key.tile_index) + ")");
    }
    return it->second;
}

double predict_proba(const LogisticModel& model, const FeatureVector& x) {
    return model.predict(x);
}

double predict_proba(const ExternalProbabilities& probs, const TileKey& key) {
    return probs.lookup(key);
}

}  // namespace tilesift
