// tilesift command line: ingest -> tile-sift -> predict / evaluate, plus
// plot (CSV -> SVG) and synth (generate a labeled demo dataset).
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tilesift/pipeline.hpp"

namespace {

struct CliState {
    std::string config_path;
    tilesift::PipelineConfig cfg;

    // Raw flag values; only applied over the config file when supplied.
    std::string manifest;
    std::string out_dir;
    std::uint64_t seed = 0;
    double relax = 1.0;
    double overlap = 0.5;
    std::vector<int> tile_sizes;
    bool rectangular = false;
    std::string method;
    std::string selection;
    std::vector<double> weights;
    double boundary = 0.5;
    double bin_width = 0.05;
    int epochs = 40;
    double learning_rate = 1.0;
    int folds = 4;
    double target_resolution = 25.0;
    double max_downscale_ratio = 5.0;
    bool allow_upsampling = false;
};

void add_shared_options(CLI::App& app, CliState& st) {
    app.add_option("--config", st.config_path, "key = value config file");
    app.add_option("--manifest", st.manifest, "image manifest CSV");
    app.add_option("--out-dir", st.out_dir, "output directory");
    app.add_option("--seed", st.seed, "base RNG seed");
    app.add_option("--relax", st.relax, "entropy threshold relaxation in (0,1]");
    app.add_option("--overlap", st.overlap, "tile overlap fraction in [0,1)");
    app.add_option("--tile-sizes", st.tile_sizes, "tile side(s), px")
        ->delimiter(',');
    app.add_flag("--rectangular", st.rectangular, "aspect-matched rectangular tiles");
    app.add_option("--method", st.method, "aggregation: average or majority")
        ->check(CLI::IsMember({"average", "majority"}));
    app.add_option("--selection", st.selection, "tile selection: entropy or random")
        ->check(CLI::IsMember({"entropy", "random"}));
    app.add_option("--weights", st.weights, "per-scale combination weights")
        ->delimiter(',');
    app.add_option("--boundary", st.boundary, "decision boundary on the score");
    app.add_option("--bin-width", st.bin_width, "entropy histogram bin width, bits");
    app.add_option("--epochs", st.epochs, "baseline training epochs");
    app.add_option("--learning-rate", st.learning_rate, "baseline learning rate");
    app.add_option("--folds", st.folds, "cross-validation folds");
    app.add_option("--target-resolution", st.target_resolution, "px per cm after ingest");
    app.add_option("--max-downscale-ratio", st.max_downscale_ratio,
                   "reject above this native/target ratio");
    app.add_flag("--allow-upsampling", st.allow_upsampling,
                 "accept images below the target resolution");
}

// Config file first, explicit flags on top.
void resolve(const CLI::App& app, CliState& st) {
    st.cfg = st.config_path.empty() ? tilesift::PipelineConfig{}
                                    : tilesift::parse_config_file(st.config_path);
    auto given = [&app](const std::string& name) {
        const CLI::Option* opt = app.get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (given("--manifest")) st.cfg.image_manifest = st.manifest;
    if (given("--out-dir")) st.cfg.out_dir = st.out_dir;
    if (given("--seed")) st.cfg.seed = st.seed;
    if (given("--relax")) st.cfg.relax = st.relax;
    if (given("--overlap")) st.cfg.overlap = st.overlap;
    if (given("--tile-sizes")) st.cfg.tile_sizes = st.tile_sizes;
    if (given("--rectangular")) st.cfg.rectangular = st.rectangular;
    if (given("--method")) st.cfg.method = tilesift::parse_method(st.method);
    if (given("--selection")) st.cfg.tile_selection = tilesift::parse_selection(st.selection);
    if (given("--weights")) st.cfg.weights = st.weights;
    if (given("--boundary")) st.cfg.boundary = st.boundary;
    if (given("--bin-width")) st.cfg.bin_width = st.bin_width;
    if (given("--epochs")) st.cfg.epochs = st.epochs;
    if (given("--learning-rate")) st.cfg.learning_rate = st.learning_rate;
    if (given("--folds")) st.cfg.n_folds = st.folds;
    if (given("--target-resolution")) st.cfg.target_resolution = st.target_resolution;
    if (given("--max-downscale-ratio")) st.cfg.max_downscale_ratio = st.max_downscale_ratio;
    if (given("--allow-upsampling")) st.cfg.allow_upsampling = st.allow_upsampling;
}

int run_ingest(const CLI::App& app, CliState& st) {
    resolve(app, st);
    tilesift::IngestReport report = tilesift::cmd_ingest(st.cfg);
    tilesift::OutputPaths paths(st.cfg.out_dir);
    if (report.entries.empty()) {
        std::cerr << "warning: manifest has no rows; store is empty\n";
    }
    for (const auto& e : report.entries) {
        if (!e.accepted) {
            std::cout << "rejected " << e.image_id << ": " << e.reason << "\n";
        }
    }
    std::cout << "ingest: " << report.accepted_count << "/" << report.entries.size()
              << " accepted; store: " << paths.images_manifest << "\n";
    return 0;
}

int run_tile_sift(const CLI::App& app, CliState& st) {
    resolve(app, st);
    tilesift::TileSiftReport report = tilesift::cmd_tile_sift(st.cfg);
    tilesift::OutputPaths paths(st.cfg.out_dir);
    std::size_t retained = 0, candidates = 0;
    for (const auto& s : report.summaries) {
        retained += s.retained;
        candidates += s.candidates;
    }
    std::cout << "tile-sift: " << retained << "/" << candidates
              << " tiles retained across " << report.summaries.size()
              << " image-scale pairs; manifest: " << paths.tile_manifest << "\n";
    return 0;
}

int run_predict(const CLI::App& app, CliState& st, const std::string& model_path,
                const std::string& probs_path) {
    resolve(app, st);
    tilesift::ModelSource source;
    if (!model_path.empty()) source.baseline_model_path = model_path;
    if (!probs_path.empty()) source.external_probs_path = probs_path;
    auto rows = tilesift::cmd_predict(st.cfg, source);
    tilesift::OutputPaths paths(st.cfg.out_dir);
    std::cout << "predict: " << rows.size() << " image-scale scores; report: "
              << paths.aggregation << "\n";
    return 0;
}

int run_evaluate(const CLI::App& app, CliState& st) {
    resolve(app, st);
    auto reports = tilesift::cmd_evaluate(st.cfg);
    tilesift::OutputPaths paths(st.cfg.out_dir);
    for (const auto& rep : reports) {
        std::cout << "scale " << rep.scale_id << " (base " << rep.base_side
                  << " px): overall accuracy " << rep.overall_accuracy << " (folds "
                  << rep.min_accuracy << ".." << rep.max_accuracy << ")\n";
    }
    std::cout << "evaluate: summary: " << paths.eval_summary << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropy-sifted image tiling and ensemble classification"};
    app.require_subcommand(1);

    CliState st;

    CLI::App* ingest = app.add_subcommand("ingest", "screen, resample and store images");
    add_shared_options(*ingest, st);

    CLI::App* tile_sift =
        app.add_subcommand("tile-sift", "tile stored images and apply the entropy sift");
    add_shared_options(*tile_sift, st);

    CLI::App* predict = app.add_subcommand("predict", "score stored images");
    add_shared_options(*predict, st);
    std::string model_path, probs_path;
    predict->add_option("--model", model_path, "baseline model JSON");
    predict->add_option("--probs", probs_path,
                        "external per-tile probability CSV");

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "cross-validate the baseline on stored images");
    add_shared_options(*evaluate, st);

    CLI::App* plot = app.add_subcommand("plot", "render a result CSV to SVG");
    std::string plot_in, plot_out;
    plot->add_option("input", plot_in, "entropy-distribution or accuracy CSV")
        ->required();
    plot->add_option("output", plot_out, "output SVG path")->required();

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic labeled dataset");
    std::string synth_dir = "synth";
    tilesift::SyntheticConfig synth_cfg;
    std::uint64_t synth_seed = 0;
    double synth_px_per_cm = 25.0;
    synth->add_option("--dir", synth_dir, "output directory");
    synth->add_option("--images-per-class", synth_cfg.images_per_class);
    synth->add_option("--width", synth_cfg.width);
    synth->add_option("--height", synth_cfg.height);
    synth->add_option("--patch-size", synth_cfg.patch_size);
    synth->add_option("--patches", synth_cfg.patches_per_image);
    synth->add_option("--seed", synth_seed);
    synth->add_option("--px-per-cm", synth_px_per_cm);

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return run_ingest(*ingest, st);
        if (tile_sift->parsed()) return run_tile_sift(*tile_sift, st);
        if (predict->parsed()) return run_predict(*predict, st, model_path, probs_path);
        if (evaluate->parsed()) return run_evaluate(*evaluate, st);
        if (plot->parsed()) {
            std::cout << "plot: " << tilesift::cmd_plot(plot_in, plot_out) << "\n";
            return 0;
        }
        if (synth->parsed()) {
            std::string manifest =
                tilesift::cmd_synth(synth_dir, synth_cfg, synth_seed, synth_px_per_cm);
            std::cout << "synth: manifest: " << manifest << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
