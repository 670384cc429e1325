#include "tilesift/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tilesift/util.hpp"

namespace tilesift {

FoldPlan plan_folds(const std::vector<LabeledImageId>& images, int n_folds,
                    std::uint64_t seed) {
    if (n_folds < 2) {
        throw std::invalid_argument("plan_folds: n_folds must be >= 2");
    }
    if (images.empty()) {
        throw std::invalid_argument("plan_folds: no images");
    }
    std::map<std::string, int> seen;
    for (const auto& img : images) {
        if (img.label != 0 && img.label != 1) {
            throw std::invalid_argument("plan_folds: label must be 0 or 1 for " +
                                        img.image_id);
        }
        if (!seen.emplace(img.image_id, img.label).second) {
            throw std::invalid_argument("plan_folds: duplicate image_id " + img.image_id);
        }
    }

    FoldPlan plan;
    plan.n_folds = n_folds;
    plan.seed = seed;
    // Stratify: shuffle each class independently, then deal round-robin.
    // The deal position carries over between classes so per-class fold
    // sizes differ by at most one AND total fold sizes stay as even as the
    // image count allows.
    std::size_t offset = 0;
    for (int cls = 0; cls <= 1; ++cls) {
        std::vector<std::string> ids;
        for (const auto& img : images) {
            if (img.label == cls) ids.push_back(img.image_id);
        }
        if (ids.size() < static_cast<std::size_t>(n_folds)) {
            throw std::invalid_argument("plan_folds: class " + std::to_string(cls) +
                                        " has " + std::to_string(ids.size()) +
                                        " images, fewer than " + std::to_string(n_folds) +
                                        " folds");
        }
        std::sort(ids.begin(), ids.end());
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(cls)));
        deterministic_shuffle(ids, rng);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            plan.assignments[ids[i]] = static_cast<int>((offset + i) % n_folds);
        }
        offset += ids.size();
    }
    return plan;
}

std::size_t select_checkpoint(const std::vector<double>& image_level_accuracies) {
    if (image_level_accuracies.empty()) {
        throw std::invalid_argument("select_checkpoint: no checkpoints");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < image_level_accuracies.size(); ++i) {
        if (image_level_accuracies[i] > image_level_accuracies[best]) best = i;
    }
    return best;
}

namespace {

ImageScore score_image(const ImageTileSet& img, const LogisticModel& model,
                       AggregationMethod method) {
    if (img.features.empty()) {
        throw std::invalid_argument("score_image: image " + img.image_id + " has no tiles");
    }
    std::vector<double> probs;
    probs.reserve(img.features.size());
    for (const auto& f : img.features) {
        probs.push_back(model.predict(f));
    }
    ImageScore s;
    s.image_id = img.image_id;
    s.label = img.label;
    s.score = aggregate(probs, method);
    s.variance = tile_variance(probs);
    s.tile_count = probs.size();
    return s;
}

double image_level_accuracy(const std::vector<ImageScore>& scores, double boundary) {
    std::size_t correct = 0;
    for (const auto& s : scores) {
        if (classify(s.score, boundary) == (s.label == 1)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(scores.size());
}

}  // namespace

std::vector<double> checkpoint_accuracies(const std::vector<LogisticModel>& checkpoints,
                                          const std::vector<ImageTileSet>& validation,
                                          AggregationMethod method, double boundary) {
    if (checkpoints.empty()) {
        throw std::invalid_argument("checkpoint_accuracies: no checkpoints");
    }
    if (validation.empty()) {
        throw std::invalid_argument("checkpoint_accuracies: no validation images");
    }
    std::vector<double> accs;
    accs.reserve(checkpoints.size());
    for (const auto& model : checkpoints) {
        std::vector<ImageScore> scores;
        scores.reserve(validation.size());
        for (const auto& img : validation) {
            scores.push_back(score_image(img, model, method));
        }
        accs.push_back(image_level_accuracy(scores, boundary));
    }
    return accs;
}

std::string select_checkpoint(const std::vector<LogisticModel>& checkpoints,
                              const std::vector<ImageTileSet>& validation,
                              AggregationMethod method, double boundary) {
    auto accs = checkpoint_accuracies(checkpoints, validation, method, boundary);
    return checkpoints[select_checkpoint(accs)].version_id;
}

FoldResult run_fold(const std::vector<ImageTileSet>& images, const FoldPlan& plan,
                    int fold, const FoldConfig& cfg) {
    if (fold < 0 || fold >= plan.n_folds) {
        throw std::invalid_argument("run_fold: fold " + std::to_string(fold) +
                                    " out of range");
    }

    std::vector<const ImageTileSet*> train, held_out;
    for (const auto& img : images) {
        auto it = plan.assignments.find(img.image_id);
        if (it == plan.assignments.end()) {
            throw std::invalid_argument("run_fold: image " + img.image_id +
                                        " missing from fold plan");
        }
        (it->second == fold ? held_out : train).push_back(&img);
    }
    if (train.empty() || held_out.empty()) {
        throw std::invalid_argument("run_fold: fold " + std::to_string(fold) +
                                    " leaves an empty split");
    }

    std::vector<FeatureVector> features;
    std::vector<int> labels;
    FoldResult result;
    result.fold = fold;
    for (const ImageTileSet* img : train) {
        result.train_image_ids.push_back(img->image_id);
        for (const auto& f : img->features) {
            features.push_back(f);
            labels.push_back(img->label);
        }
    }

    TrainResult trained = train_baseline(features, labels, cfg.epochs, cfg.learning_rate,
                                         derive_seed(cfg.seed, static_cast<std::uint64_t>(fold)));

    std::vector<ImageTileSet> validation;
    validation.reserve(held_out.size());
    for (const ImageTileSet* img : held_out) validation.push_back(*img);

    result.accuracy_per_epoch =
        checkpoint_accuracies(trained.checkpoints, validation, cfg.method, cfg.boundary);
    std::size_t best = select_checkpoint(result.accuracy_per_epoch);
    result.chosen_epoch = static_cast<int>(best) + 1;
    result.accuracy = result.accuracy_per_epoch[best];

    const LogisticModel& model = trained.checkpoints[best];
    std::vector<LabeledScore> labeled;
    for (const auto& img : validation) {
        ImageScore s = score_image(img, model, cfg.method);
        labeled.push_back({s.image_id, s.label, s.score});
        result.scores.push_back(std::move(s));
    }
    result.report = classification_error(labeled, cfg.boundary);
    return result;
}

FoldResult score_fold_external(const std::vector<ImageTileSet>& images,
                               const FoldPlan& plan, int fold,
                               const ExternalProbabilities& probs, int scale_id,
                               const std::vector<std::vector<int>>& tile_indices,
                               const FoldConfig& cfg) {
    if (fold < 0 || fold >= plan.n_folds) {
        throw std::invalid_argument("score_fold_external: fold " + std::to_string(fold) +
                                    " out of range");
    }
    if (tile_indices.size() != images.size()) {
        throw std::invalid_argument("score_fold_external: tile_indices misaligned");
    }

    FoldResult result;
    result.fold = fold;
    std::vector<LabeledScore> labeled;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto& img = images[i];
        auto it = plan.assignments.find(img.image_id);
        if (it == plan.assignments.end()) {
            throw std::invalid_argument("score_fold_external: image " + img.image_id +
                                        " missing from fold plan");
        }
        if (it->second != fold) {
            result.train_image_ids.push_back(img.image_id);
            continue;
        }
        std::vector<double> tile_probs;
        tile_probs.reserve(tile_indices[i].size());
        for (int idx : tile_indices[i]) {
            tile_probs.push_back(probs.lookup({img.image_id, scale_id, idx}));
        }
        if (tile_probs.empty()) {
            throw std::invalid_argument("score_fold_external: image " + img.image_id +
                                        " has no tiles");
        }
        ImageScore s;
        s.image_id = img.image_id;
        s.label = img.label;
        s.score = aggregate(tile_probs, cfg.method);
        s.variance = tile_variance(tile_probs);
        s.tile_count = tile_probs.size();
        labeled.push_back({s.image_id, s.label, s.score});
        result.scores.push_back(std::move(s));
    }
    if (result.scores.empty()) {
        throw std::invalid_argument("score_fold_external: fold " + std::to_string(fold) +
                                    " holds no images");
    }
    result.accuracy = image_level_accuracy(result.scores, cfg.boundary);
    result.accuracy_per_epoch = {result.accuracy};
    result.chosen_epoch = 1;
    result.report = classification_error(labeled, cfg.boundary);
    return result;
}

namespace {

void paint_checkerboard(ImageU8& img, const Rect& r, int cell, int jitter,
                        std::mt19937_64& rng) {
    for (int y = r.y; y < r.y + r.h; ++y) {
        for (int x = r.x; x < r.x + r.w; ++x) {
            bool on = (((x - r.x) / cell) + ((y - r.y) / cell)) % 2 == 0;
            int base = on ? 170 : 80;
            int v = base + static_cast<int>(bounded_uniform(rng, 2 * jitter + 1)) - jitter;
            img.at(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
        }
    }
}

void paint_stripes(ImageU8& img, const Rect& r, int band, int jitter,
                   std::mt19937_64& rng) {
    for (int y = r.y; y < r.y + r.h; ++y) {
        for (int x = r.x; x < r.x + r.w; ++x) {
            bool on = (((x - r.x) + (y - r.y)) / band) % 2 == 0;
            int base = on ? 210 : 40;
            int v = base + static_cast<int>(bounded_uniform(rng, 2 * jitter + 1)) - jitter;
            img.at(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
        }
    }
}

}  // namespace

std::vector<SourceImage> generate_synthetic(const SyntheticConfig& cfg, std::uint64_t seed) {
    if (cfg.images_per_class < 1 || cfg.width < 1 || cfg.height < 1) {
        throw std::invalid_argument("generate_synthetic: bad dimensions");
    }
    if (cfg.patch_size < 1 || cfg.patch_size > cfg.width || cfg.patch_size > cfg.height) {
        throw std::invalid_argument("generate_synthetic: patch_size must fit the image");
    }
    if (cfg.patches_per_image < 1 || cfg.cell < 1 || cfg.band < 1 || cfg.jitter < 0) {
        throw std::invalid_argument("generate_synthetic: bad texture parameters");
    }

    std::vector<SourceImage> out;
    out.reserve(2 * static_cast<std::size_t>(cfg.images_per_class));
    std::uint64_t stream = 0;
    for (int cls = 0; cls <= 1; ++cls) {
        for (int i = 0; i < cfg.images_per_class; ++i) {
            std::mt19937_64 rng(derive_seed(seed, stream++));
            ImageU8 img(cfg.width, cfg.height);
            // Flat background at a per-image random level, uncorrelated with
            // the class, so background tiles carry no class signal and zero
            // entropy.
            std::uint8_t bg = static_cast<std::uint8_t>(bounded_uniform(rng, 256));
            std::fill(img.pixels.begin(), img.pixels.end(), bg);

            int max_x = cfg.width - cfg.patch_size;
            int max_y = cfg.height - cfg.patch_size;
            for (int p = 0; p < cfg.patches_per_image; ++p) {
                Rect r;
                r.x = max_x == 0 ? 0 : static_cast<int>(bounded_uniform(rng, max_x + 1));
                r.y = max_y == 0 ? 0 : static_cast<int>(bounded_uniform(rng, max_y + 1));
                r.w = cfg.patch_size;
                r.h = cfg.patch_size;
                if (cls == 1) {
                    paint_checkerboard(img, r, cfg.cell, cfg.jitter, rng);
                } else {
                    paint_stripes(img, r, cfg.band, cfg.jitter, rng);
                }
            }

            SourceImage src;
            src.image_id = "synth-" + std::to_string(cls) + "-" +
                           (i < 10 ? "0" : "") + std::to_string(i);
            src.image = std::move(img);
            src.native_resolution = 25.0;
            src.label = cls;
            out.push_back(std::move(src));
        }
    }
    return out;
}

}  // namespace tilesift
