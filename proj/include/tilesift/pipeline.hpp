#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tilesift/config.hpp"
#include "tilesift/evaluator.hpp"
#include "tilesift/sifter.hpp"

namespace tilesift {

// Fixed layout of pipeline outputs under out_dir.
struct OutputPaths {
    explicit OutputPaths(const std::string& out_dir);
    std::string out_dir;
    std::string images_dir;        // normalized PNG store
    std::string ingest_log;        // accepted/rejected + reason
    std::string images_manifest;   // manifest of the normalized store
    std::string tile_manifest;     // tiles.jsonl
    std::string sift_summary;      // per image x scale counts
    std::string aggregation;       // per image x scale scores
    std::string eval_report;       // per fold rows
    std::string eval_summary;      // human-readable table
    std::string image_path(const std::string& image_id) const;
    std::string accuracy_csv(int scale_id, int fold) const;
    std::string accuracy_svg(int scale_id, int fold) const;
    std::string entropy_dist_csv(int scale_id, int label) const;
    std::string entropy_dist_svg(int scale_id, int label) const;
};

struct IngestEntry {
    std::string image_id;
    bool accepted = false;
    std::string reason;
    int width = 0;
    int height = 0;
};

struct IngestReport {
    std::vector<IngestEntry> entries;
    std::size_t accepted_count = 0;
};

// Screens, resamples, and stores every manifest image; rejections are
// logged, not fatal.
IngestReport cmd_ingest(const PipelineConfig& cfg);

struct ImageSiftSummary {
    std::string image_id;
    int scale_id = 0;
    int tile_w = 0;
    int tile_h = 0;
    std::size_t candidates = 0;
    std::size_t retained = 0;
    double retention = 0.0;
    double image_entropy_bits = 0.0;
    double threshold_bits = 0.0;
};

struct TileSiftReport {
    std::vector<ImageSiftSummary> summaries;
    std::size_t record_count = 0;
};

// Grid + entropy + sift for every stored image at every configured scale;
// writes the JSONL tile manifest and a per-image summary.
TileSiftReport cmd_tile_sift(const PipelineConfig& cfg);

// Probability source for prediction: a baseline checkpoint JSON or an
// external-probability manifest.
struct ModelSource {
    std::optional<std::string> baseline_model_path;
    std::optional<std::string> external_probs_path;
};

struct PredictRow {
    std::string image_id;
    int scale_id = 0;
    double score = 0.0;
    bool decision = false;
    std::size_t tile_count = 0;
    double variance = 0.0;
    double final_score = 0.0;  // only meaningful when weights were supplied
};

std::vector<PredictRow> cmd_predict(const PipelineConfig& cfg, const ModelSource& source);

struct ScaleEvalReport {
    int scale_id = 0;
    int base_side = 0;
    std::vector<FoldResult> folds;
    double min_accuracy = 0.0;
    double max_accuracy = 0.0;
    double overall_accuracy = 0.0;  // each image scored once, in its own fold
    double mean_variance = 0.0;
    double avg_tiles_per_image = 0.0;
    double avg_train_tiles_per_fold = 0.0;
};

// Painting-level cross-validation over the stored dataset, one report per
// configured tile size; emits report CSV, summary text, accuracy-vs-epoch
// and entropy-distribution CSV/SVG pairs.
std::vector<ScaleEvalReport> cmd_evaluate(const PipelineConfig& cfg);

// Renders a result CSV (entropy distribution or accuracy-vs-epoch, sniffed
// from the header) to a standalone SVG. Returns the output path.
std::string cmd_plot(const std::string& input_csv, const std::string& output_svg);

// Materializes a synthetic labeled dataset (PNGs + manifest) for demos and
// desk-scale verification.
std::string cmd_synth(const std::string& dir, const SyntheticConfig& synth,
                      std::uint64_t seed, double px_per_cm);

}  // namespace tilesift
