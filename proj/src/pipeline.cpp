#include "tilesift/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include "tilesift/csv.hpp"
#include "tilesift/entropy.hpp"
#include "tilesift/image_io.hpp"
#include "tilesift/manifests.hpp"
#include "tilesift/svg.hpp"
#include "tilesift/util.hpp"

namespace fs = std::filesystem;

namespace tilesift {

OutputPaths::OutputPaths(const std::string& dir) : out_dir(dir) {
    images_dir = dir + "/images";
    ingest_log = dir + "/ingest_log.csv";
    images_manifest = dir + "/images_manifest.csv";
    tile_manifest = dir + "/tiles.jsonl";
    sift_summary = dir + "/sift_summary.csv";
    aggregation = dir + "/aggregation.csv";
    eval_report = dir + "/eval_report.csv";
    eval_summary = dir + "/eval_summary.txt";
}

std::string OutputPaths::image_path(const std::string& image_id) const {
    return images_dir + "/" + image_id + ".png";
}

std::string OutputPaths::accuracy_csv(int scale_id, int fold) const {
    return out_dir + "/accuracy_s" + std::to_string(scale_id) + "_f" +
           std::to_string(fold) + ".csv";
}

std::string OutputPaths::accuracy_svg(int scale_id, int fold) const {
    return out_dir + "/accuracy_s" + std::to_string(scale_id) + "_f" +
           std::to_string(fold) + ".svg";
}

std::string OutputPaths::entropy_dist_csv(int scale_id, int label) const {
    return out_dir + "/entropy_dist_s" + std::to_string(scale_id) + "_label" +
           std::to_string(label) + ".csv";
}

std::string OutputPaths::entropy_dist_svg(int scale_id, int label) const {
    return out_dir + "/entropy_dist_s" + std::to_string(scale_id) + "_label" +
           std::to_string(label) + ".svg";
}

namespace {

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed for " + path);
    }
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<ImageManifestRow> read_store_manifest(const OutputPaths& paths) {
    if (!fs::exists(paths.images_manifest)) {
        throw std::runtime_error("no normalized image store at " + paths.images_manifest +
                                 " (run ingest first)");
    }
    return read_image_manifest(paths.images_manifest);
}

TileScale scale_for(const PipelineConfig& cfg, const ImageU8& img, std::size_t k) {
    int scale_id = static_cast<int>(k) + 1;
    int base = cfg.tile_sizes[k];
    if (cfg.rectangular) {
        return rectangular_scale(img, base, cfg.overlap, scale_id);
    }
    TileScale s;
    s.scale_id = scale_id;
    s.tile_w = base;
    s.tile_h = base;
    s.overlap = cfg.overlap;
    return s;
}

struct ScaleTiles {
    TileScale scale;
    std::vector<TileRecord> records;
    ImageSiftSummary summary;
};

// Grid + entropy + retention for one image at one tile size. With random
// selection, the retained set becomes a uniform sample of exactly the size
// the entropy criterion would have kept, so the two pipelines stay
// tile-count matched.
ScaleTiles prepare_scale(const PipelineConfig& cfg, const SourceImage& src, std::size_t k,
                         TileSelection selection) {
    ScaleTiles out;
    out.scale = scale_for(cfg, src.image, k);
    out.summary.image_id = src.image_id;
    out.summary.scale_id = out.scale.scale_id;
    out.summary.tile_w = out.scale.tile_w;
    out.summary.tile_h = out.scale.tile_h;

    double h_image = image_entropy(src.image);
    out.summary.image_entropy_bits = h_image;
    out.summary.threshold_bits = cfg.relax * h_image;

    TileGrid grid = generate_grid(src.image, out.scale);
    if (grid.count() == 0) return out;  // image smaller than the tile

    out.records = make_records(src.image_id, grid);
    std::vector<double> entropies = tile_entropies(src.image, grid);
    for (std::size_t i = 0; i < out.records.size(); ++i) {
        out.records[i].entropy = entropies[i];
    }
    SiftResult sifted = sift(out.records, h_image, SiftPolicy{cfg.relax, false});
    out.summary.candidates = sifted.candidate_count;
    out.summary.retained = sifted.retained_count;
    out.summary.retention = retention_rate(sifted);

    if (selection == TileSelection::random && sifted.retained_count > 0) {
        std::uint64_t stream =
            fnv1a64(src.image_id) ^ static_cast<std::uint64_t>(out.scale.scale_id);
        auto sampled = random_tile_sample(src.image, out.scale, sifted.retained_count,
                                          derive_seed(cfg.seed, stream), src.image_id);
        for (auto& rec : sampled) {
            rec.entropy = shannon_entropy(histogram(src.image, {rec.x, rec.y, rec.w, rec.h}));
            rec.retained = true;
        }
        out.records = std::move(sampled);
    }
    return out;
}

}  // namespace

IngestReport cmd_ingest(const PipelineConfig& cfg) {
    validate_config(cfg);
    if (cfg.image_manifest.empty()) {
        throw std::invalid_argument("ingest: config needs image_manifest");
    }
    auto rows = read_image_manifest(cfg.image_manifest);
    std::map<std::string, int> seen;
    for (const auto& row : rows) {
        if (!seen.emplace(row.image_id, 1).second) {
            throw std::runtime_error("ingest: duplicate image_id " + row.image_id);
        }
    }

    OutputPaths paths(cfg.out_dir);
    fs::create_directories(paths.images_dir);

    ResolutionPolicy policy{cfg.target_resolution, cfg.max_downscale_ratio,
                            cfg.allow_upsampling};
    IngestReport report;
    std::vector<ImageManifestRow> stored;
    for (const auto& row : rows) {
        IngestEntry entry;
        entry.image_id = row.image_id;
        try {
            SourceImage src = load_image(row.path, row.px_per_cm, row.label, row.image_id);
            ScreenVerdict verdict = screen_candidate(src, policy);
            entry.reason = verdict.reason;
            if (verdict.accepted) {
                SourceImage norm = resample(src, cfg.target_resolution);
                write_png_gray(paths.image_path(norm.image_id), norm.image);
                entry.accepted = true;
                entry.width = norm.image.width;
                entry.height = norm.image.height;
                stored.push_back({norm.image_id, paths.image_path(norm.image_id),
                                  cfg.target_resolution, norm.label});
                ++report.accepted_count;
            } else {
                entry.width = src.image.width;
                entry.height = src.image.height;
            }
        } catch (const std::exception& e) {
            entry.accepted = false;
            entry.reason = e.what();
        }
        report.entries.push_back(std::move(entry));
    }

    CsvFile log;
    log.header = {"image_id", "accepted", "reason", "width", "height"};
    for (const auto& e : report.entries) {
        log.rows.push_back({e.image_id, e.accepted ? "1" : "0", e.reason,
                            std::to_string(e.width), std::to_string(e.height)});
    }
    write_csv(paths.ingest_log, log);
    write_image_manifest(paths.images_manifest, stored);
    return report;
}

TileSiftReport cmd_tile_sift(const PipelineConfig& cfg) {
    validate_config(cfg);
    OutputPaths paths(cfg.out_dir);
    auto rows = read_store_manifest(paths);

    TileSiftReport report;
    std::vector<TileRecord> all_records;
    for (const auto& row : rows) {
        SourceImage src = load_image(row.path, row.px_per_cm, row.label, row.image_id);
        for (std::size_t k = 0; k < cfg.tile_sizes.size(); ++k) {
            ScaleTiles st = prepare_scale(cfg, src, k, TileSelection::entropy);
            report.summaries.push_back(st.summary);
            all_records.insert(all_records.end(), st.records.begin(), st.records.end());
        }
    }
    write_tile_manifest(paths.tile_manifest, all_records);
    report.record_count = all_records.size();

    CsvFile summary;
    summary.header = {"image_id", "scale_id", "tile_w",    "tile_h",       "candidates",
                      "retained", "retention", "image_entropy", "threshold"};
    for (const auto& s : report.summaries) {
        summary.rows.push_back({s.image_id, std::to_string(s.scale_id),
                                std::to_string(s.tile_w), std::to_string(s.tile_h),
                                std::to_string(s.candidates), std::to_string(s.retained),
                                fmt_double(s.retention), fmt_double(s.image_entropy_bits),
                                fmt_double(s.threshold_bits)});
    }
    write_csv(paths.sift_summary, summary);
    return report;
}

std::vector<PredictRow> cmd_predict(const PipelineConfig& cfg, const ModelSource& source) {
    validate_config(cfg);
    if (source.baseline_model_path.has_value() == source.external_probs_path.has_value()) {
        throw std::invalid_argument(
            "predict: need exactly one of a baseline model or an external "
            "probability manifest");
    }
    OutputPaths paths(cfg.out_dir);
    auto rows = read_store_manifest(paths);

    std::optional<LogisticModel> model;
    std::optional<ExternalProbabilities> external;
    if (source.baseline_model_path) {
        model = load_model_json(*source.baseline_model_path);
    } else {
        external = ExternalProbabilities::load_csv(*source.external_probs_path);
    }

    bool weighted = !cfg.weights.empty();
    std::string weights_str;
    if (weighted) {
        for (std::size_t i = 0; i < cfg.weights.size(); ++i) {
            if (i > 0) weights_str += ';';
            weights_str += fmt_double(cfg.weights[i]);
        }
    }

    std::vector<PredictRow> out;
    CsvFile agg;
    agg.header = {"image_id", "scale_id", "method", "score", "decision", "tile_count",
                  "variance"};
    if (weighted) {
        agg.header.push_back("final_score");
        agg.header.push_back("weights");
    }

    for (const auto& row : rows) {
        SourceImage src = load_image(row.path, row.px_per_cm, row.label, row.image_id);
        std::vector<PredictRow> image_rows;
        std::vector<double> scale_scores;
        for (std::size_t k = 0; k < cfg.tile_sizes.size(); ++k) {
            ScaleTiles st = prepare_scale(cfg, src, k, TileSelection::entropy);
            std::vector<double> probs;
            for (const auto& rec : st.records) {
                if (!rec.retained) continue;
                if (model) {
                    ImageU8 tile = extract_tile(src.image, {rec.x, rec.y, rec.w, rec.h});
                    probs.push_back(model->predict(featurize(tile)));
                } else {
                    probs.push_back(
                        external->lookup({rec.image_id, rec.scale_id, rec.tile_index}));
                }
            }
            if (probs.empty()) {
                throw std::runtime_error("predict: image " + src.image_id +
                                         " retains no tiles at scale " +
                                         std::to_string(st.scale.scale_id));
            }
            PredictRow pr;
            pr.image_id = src.image_id;
            pr.scale_id = st.scale.scale_id;
            pr.score = aggregate(probs, cfg.method);
            pr.decision = classify(pr.score, cfg.boundary);
            pr.tile_count = probs.size();
            pr.variance = tile_variance(probs);
            scale_scores.push_back(pr.score);
            image_rows.push_back(std::move(pr));
        }
        if (weighted) {
            double final_score = combine_scales(scale_scores, WeightVector{cfg.weights});
            for (auto& pr : image_rows) pr.final_score = final_score;
        }
        for (auto& pr : image_rows) {
            std::vector<std::string> r = {pr.image_id,
                                          std::to_string(pr.scale_id),
                                          method_name(cfg.method),
                                          fmt_double(pr.score),
                                          pr.decision ? "1" : "0",
                                          std::to_string(pr.tile_count),
                                          fmt_double(pr.variance)};
            if (weighted) {
                r.push_back(fmt_double(pr.final_score));
                r.push_back(weights_str);
            }
            agg.rows.push_back(std::move(r));
            out.push_back(std::move(pr));
        }
    }
    write_csv(paths.aggregation, agg);
    return out;
}

std::vector<ScaleEvalReport> cmd_evaluate(const PipelineConfig& cfg) {
    validate_config(cfg);
    OutputPaths paths(cfg.out_dir);
    auto rows = read_store_manifest(paths);
    if (rows.empty()) {
        throw std::runtime_error("evaluate: empty image store");
    }

    std::vector<SourceImage> images;
    std::vector<LabeledImageId> labeled;
    for (const auto& row : rows) {
        if (!row.label) {
            throw std::runtime_error("evaluate: image " + row.image_id + " has no label");
        }
        images.push_back(load_image(row.path, row.px_per_cm, row.label, row.image_id));
        labeled.push_back({row.image_id, *row.label});
    }
    FoldPlan plan = plan_folds(labeled, cfg.n_folds, cfg.seed);

    std::vector<ScaleEvalReport> reports;
    CsvFile report_csv;
    report_csv.header = {"scale_id",  "fold",           "chosen_epoch", "accuracy",
                         "n_images",  "n_misclassified", "mean_error"};
    std::string summary_text =
        "evaluation: " + std::to_string(cfg.n_folds) +
        "-fold painting-level cross-validation over " + std::to_string(images.size()) +
        " images\n" + "method=" + method_name(cfg.method) +
        " selection=" + selection_name(cfg.tile_selection) + " relax=" +
        fmt_double(cfg.relax) + " overlap=" + fmt_double(cfg.overlap) + " seed=" +
        std::to_string(cfg.seed) + "\n\n";

    for (std::size_t k = 0; k < cfg.tile_sizes.size(); ++k) {
        ScaleEvalReport rep;
        rep.scale_id = static_cast<int>(k) + 1;
        rep.base_side = cfg.tile_sizes[k];

        std::vector<ImageTileSet> tilesets;
        std::map<int, std::vector<TileRecord>> tiles_by_label;
        std::map<int, std::vector<double>> image_entropy_by_label;
        std::size_t total_tiles = 0;
        for (const auto& src : images) {
            ScaleTiles st = prepare_scale(cfg, src, k, cfg.tile_selection);
            ImageTileSet ts;
            ts.image_id = src.image_id;
            ts.label = *src.label;
            for (const auto& rec : st.records) {
                if (!rec.retained) continue;
                ImageU8 tile = extract_tile(src.image, {rec.x, rec.y, rec.w, rec.h});
                ts.features.push_back(featurize(tile));
            }
            if (ts.features.empty()) {
                throw std::runtime_error("evaluate: image " + src.image_id +
                                         " retains no tiles at scale " +
                                         std::to_string(rep.scale_id));
            }
            total_tiles += ts.features.size();
            auto& bucket = tiles_by_label[ts.label];
            bucket.insert(bucket.end(), st.records.begin(), st.records.end());
            image_entropy_by_label[ts.label].push_back(st.summary.image_entropy_bits);
            tilesets.push_back(std::move(ts));
        }
        rep.avg_tiles_per_image =
            static_cast<double>(total_tiles) / static_cast<double>(images.size());

        for (const auto& [label, tiles] : tiles_by_label) {
            const auto& h_imgs = image_entropy_by_label[label];
            double mean_h = 0.0;
            for (double h : h_imgs) mean_h += h;
            mean_h /= static_cast<double>(h_imgs.size());
            EntropyDistribution dist = entropy_distribution(tiles, cfg.bin_width, mean_h);

            std::string title = "tile entropy, scale " + std::to_string(rep.scale_id) +
                                ", label " + std::to_string(label);
            CsvFile dist_csv;
            dist_csv.comments = {"# title=" + title,
                                 "# scale_id=" + std::to_string(rep.scale_id),
                                 "# label=" + std::to_string(label),
                                 "# bin_width=" + fmt_double(dist.bin_width),
                                 "# mean_bits=" + fmt_double(dist.mean_bits),
                                 "# image_entropy_bits=" +
                                     fmt_double(dist.image_entropy_bits)};
            dist_csv.header = {"bin_low", "bin_high", "count"};
            HistogramPlot plot;
            plot.title = title;
            plot.marker = dist.image_entropy_bits;
            for (std::size_t i = 0; i < dist.counts.size(); ++i) {
                dist_csv.rows.push_back({fmt_double(dist.bin_low(i)),
                                         fmt_double(dist.bin_high(i)),
                                         std::to_string(dist.counts[i])});
                plot.bin_low.push_back(dist.bin_low(i));
                plot.bin_high.push_back(dist.bin_high(i));
                plot.count.push_back(static_cast<double>(dist.counts[i]));
            }
            write_csv(paths.entropy_dist_csv(rep.scale_id, label), dist_csv);
            write_text_file(paths.entropy_dist_svg(rep.scale_id, label),
                            svg_histogram(plot));
        }

        std::map<std::string, std::size_t> tiles_per_image;
        for (const auto& ts : tilesets) tiles_per_image[ts.image_id] = ts.features.size();

        FoldConfig fold_cfg{cfg.epochs, cfg.learning_rate, cfg.seed, cfg.method,
                            cfg.boundary};
        std::size_t correct = 0, total_imgs = 0, var_n = 0;
        double var_sum = 0.0, train_tiles_sum = 0.0;
        for (int fold = 0; fold < cfg.n_folds; ++fold) {
            FoldResult fr = run_fold(tilesets, plan, fold, fold_cfg);
            report_csv.rows.push_back(
                {std::to_string(rep.scale_id), std::to_string(fold),
                 std::to_string(fr.chosen_epoch), fmt_double(fr.accuracy),
                 std::to_string(fr.report.total),
                 std::to_string(fr.report.misclassified.size()),
                 fmt_double(fr.report.mean_error)});

            std::string title = "accuracy by epoch, scale " +
                                std::to_string(rep.scale_id) + ", fold " +
                                std::to_string(fold);
            CsvFile acc;
            acc.comments = {"# title=" + title};
            acc.header = {"epoch", "accuracy"};
            LineChart chart;
            chart.title = title;
            chart.x_label = "epoch";
            chart.y_label = "accuracy";
            for (std::size_t e = 0; e < fr.accuracy_per_epoch.size(); ++e) {
                acc.rows.push_back(
                    {std::to_string(e + 1), fmt_double(fr.accuracy_per_epoch[e])});
                chart.x.push_back(static_cast<double>(e + 1));
                chart.y.push_back(fr.accuracy_per_epoch[e]);
            }
            write_csv(paths.accuracy_csv(rep.scale_id, fold), acc);
            write_text_file(paths.accuracy_svg(rep.scale_id, fold), svg_line_chart(chart));

            correct += fr.report.total - fr.report.misclassified.size();
            total_imgs += fr.report.total;
            for (const auto& s : fr.scores) {
                var_sum += s.variance;
                ++var_n;
            }
            for (const auto& id : fr.train_image_ids) {
                train_tiles_sum += static_cast<double>(tiles_per_image[id]);
            }
            rep.folds.push_back(std::move(fr));
        }
        rep.min_accuracy = rep.folds.front().accuracy;
        rep.max_accuracy = rep.folds.front().accuracy;
        for (const auto& fr : rep.folds) {
            rep.min_accuracy = std::min(rep.min_accuracy, fr.accuracy);
            rep.max_accuracy = std::max(rep.max_accuracy, fr.accuracy);
        }
        rep.overall_accuracy =
            static_cast<double>(correct) / static_cast<double>(total_imgs);
        rep.mean_variance = var_sum / static_cast<double>(var_n);
        rep.avg_train_tiles_per_fold = train_tiles_sum / static_cast<double>(cfg.n_folds);

        summary_text += "scale " + std::to_string(rep.scale_id) + " (base " +
                        std::to_string(rep.base_side) + " px):\n";
        for (const auto& fr : rep.folds) {
            summary_text += "  fold " + std::to_string(fr.fold) + ": accuracy " +
                            fmt_fixed(fr.accuracy, 4) + " (epoch " +
                            std::to_string(fr.chosen_epoch) + "), misclassified " +
                            std::to_string(fr.report.misclassified.size()) + "/" +
                            std::to_string(fr.report.total) + ", mean error " +
                            fmt_fixed(fr.report.mean_error, 4) + "\n";
        }
        summary_text += "  accuracy min/max/overall: " + fmt_fixed(rep.min_accuracy, 4) +
                        " / " + fmt_fixed(rep.max_accuracy, 4) + " / " +
                        fmt_fixed(rep.overall_accuracy, 4) + "\n";
        summary_text += "  mean tile-probability variance: " +
                        fmt_fixed(rep.mean_variance, 6) + "\n";
        summary_text += "  avg retained tiles per image: " +
                        fmt_fixed(rep.avg_tiles_per_image, 1) +
                        "; avg training tiles per fold: " +
                        fmt_fixed(rep.avg_train_tiles_per_fold, 1) + "\n\n";

        reports.push_back(std::move(rep));
    }

    write_csv(paths.eval_report, report_csv);
    write_text_file(paths.eval_summary, summary_text);
    return reports;
}

std::string cmd_plot(const std::string& input_csv, const std::string& output_svg) {
    CsvFile file = read_csv(input_csv);
    auto comment_value = [&](const std::string& key) -> std::optional<std::string> {
        std::string prefix = "# " + key + "=";
        for (const auto& c : file.comments) {
            if (c.rfind(prefix, 0) == 0) return c.substr(prefix.size());
        }
        return std::nullopt;
    };

    std::string svg;
    if (file.header == std::vector<std::string>{"epoch", "accuracy"}) {
        LineChart chart;
        chart.x_label = "epoch";
        chart.y_label = "accuracy";
        if (auto t = comment_value("title")) chart.title = *t;
        for (const auto& r : file.rows) {
            chart.x.push_back(std::stod(r[0]));
            chart.y.push_back(std::stod(r[1]));
        }
        svg = svg_line_chart(chart);
    } else if (file.header == std::vector<std::string>{"bin_low", "bin_high", "count"}) {
        HistogramPlot plot;
        if (auto t = comment_value("title")) plot.title = *t;
        if (auto m = comment_value("image_entropy_bits")) plot.marker = std::stod(*m);
        for (const auto& r : file.rows) {
            plot.bin_low.push_back(std::stod(r[0]));
            plot.bin_high.push_back(std::stod(r[1]));
            plot.count.push_back(std::stod(r[2]));
        }
        svg = svg_histogram(plot);
    } else {
        throw std::runtime_error("plot: unrecognized csv header in " + input_csv);
    }
    write_text_file(output_svg, svg);
    return output_svg;
}

std::string cmd_synth(const std::string& dir, const SyntheticConfig& synth,
                      std::uint64_t seed, double px_per_cm) {
    fs::create_directories(dir);
    auto images = generate_synthetic(synth, seed);
    std::vector<ImageManifestRow> rows;
    rows.reserve(images.size());
    for (const auto& img : images) {
        std::string path = dir + "/" + img.image_id + ".png";
        write_png_gray(path, img.image);
        rows.push_back({img.image_id, path, px_per_cm, img.label});
    }
    std::string manifest = dir + "/manifest.csv";
    write_image_manifest(manifest, rows);
    return manifest;
}

}  // namespace tilesift
