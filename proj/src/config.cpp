#include "tilesift/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tilesift/csv.hpp"
#include "tilesift/util.hpp"

namespace tilesift {

TileSelection parse_selection(const std::string& s) {
    if (s == "entropy") return TileSelection::entropy;
    if (s == "random") return TileSelection::random;
    throw std::invalid_argument("unknown tile selection '" + s +
                                "' (expected entropy or random)");
}

std::string selection_name(TileSelection s) {
    return s == TileSelection::entropy ? "entropy" : "random";
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
    }
}

int to_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer for " + key + ": '" + v + "'");
    }
}

bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("config: bad boolean for " + key + ": '" + v + "'");
}

template <typename T, typename Fn>
std::vector<T> to_list(const std::string& v, const std::string& key, Fn&& convert) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            throw std::invalid_argument("config: empty list entry for " + key);
        }
        out.push_back(convert(item, key));
    }
    if (out.empty()) {
        throw std::invalid_argument("config: empty list for " + key);
    }
    return out;
}

}  // namespace

PipelineConfig parse_config_text(const std::string& text) {
    PipelineConfig cfg;
    std::stringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: missing '=' at line " +
                                        std::to_string(line_no));
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("config: empty key at line " +
                                        std::to_string(line_no));
        }

        if (key == "target_resolution") {
            cfg.target_resolution = to_double(value, key);
        } else if (key == "max_downscale_ratio") {
            cfg.max_downscale_ratio = to_double(value, key);
        } else if (key == "allow_upsampling") {
            cfg.allow_upsampling = to_bool(value, key);
        } else if (key == "tile_sizes") {
            cfg.tile_sizes = to_list<int>(value, key, to_int);
        } else if (key == "overlap") {
            cfg.overlap = to_double(value, key);
        } else if (key == "rectangular") {
            cfg.rectangular = to_bool(value, key);
        } else if (key == "tile_selection") {
            cfg.tile_selection = parse_selection(value);
        } else if (key == "relax") {
            cfg.relax = to_double(value, key);
        } else if (key == "bin_width") {
            cfg.bin_width = to_double(value, key);
        } else if (key == "method") {
            cfg.method = parse_method(value);
        } else if (key == "boundary") {
            cfg.boundary = to_double(value, key);
        } else if (key == "weights") {
            cfg.weights = to_list<double>(value, key, to_double);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
        } else if (key == "epochs") {
            cfg.epochs = to_int(value, key);
        } else if (key == "learning_rate") {
            cfg.learning_rate = to_double(value, key);
        } else if (key == "n_folds") {
            cfg.n_folds = to_int(value, key);
        } else if (key == "image_manifest") {
            cfg.image_manifest = value;
        } else if (key == "out_dir") {
            cfg.out_dir = value;
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "' at line " +
                                        std::to_string(line_no));
        }
    }
    return cfg;
}

PipelineConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string serialize_config(const PipelineConfig& cfg) {
    std::string out;
    auto kv = [&out](const std::string& k, const std::string& v) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    };
    auto join_ints = [](const std::vector<int>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i > 0) s += ',';
            s += std::to_string(v[i]);
        }
        return s;
    };
    auto join_doubles = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i > 0) s += ',';
            s += fmt_double(v[i]);
        }
        return s;
    };

    kv("target_resolution", fmt_double(cfg.target_resolution));
    kv("max_downscale_ratio", fmt_double(cfg.max_downscale_ratio));
    kv("allow_upsampling", cfg.allow_upsampling ? "true" : "false");
    kv("tile_sizes", join_ints(cfg.tile_sizes));
    kv("overlap", fmt_double(cfg.overlap));
    kv("rectangular", cfg.rectangular ? "true" : "false");
    kv("tile_selection", selection_name(cfg.tile_selection));
    kv("relax", fmt_double(cfg.relax));
    kv("bin_width", fmt_double(cfg.bin_width));
    kv("method", method_name(cfg.method));
    kv("boundary", fmt_double(cfg.boundary));
    if (!cfg.weights.empty()) {
        kv("weights", join_doubles(cfg.weights));
    }
    kv("seed", std::to_string(cfg.seed));
    kv("epochs", std::to_string(cfg.epochs));
    kv("learning_rate", fmt_double(cfg.learning_rate));
    kv("n_folds", std::to_string(cfg.n_folds));
    if (!cfg.image_manifest.empty()) {
        kv("image_manifest", cfg.image_manifest);
    }
    kv("out_dir", cfg.out_dir);
    return out;
}

void write_config_file(const std::string& path, const PipelineConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write config file: " + path);
    }
    out << serialize_config(cfg);
    if (!out) {
        throw std::runtime_error("config: write failed for " + path);
    }
}

void validate_config(const PipelineConfig& cfg) {
    if (cfg.target_resolution <= 0.0) {
        throw std::invalid_argument("config: target_resolution must be positive");
    }
    if (cfg.max_downscale_ratio < 1.0) {
        throw std::invalid_argument("config: max_downscale_ratio must be >= 1");
    }
    if (cfg.tile_sizes.empty()) {
        throw std::invalid_argument("config: tile_sizes must be nonempty");
    }
    for (int t : cfg.tile_sizes) {
        if (t < 1) throw std::invalid_argument("config: tile sizes must be >= 1");
    }
    if (!(cfg.overlap >= 0.0 && cfg.overlap < 1.0)) {
        throw std::invalid_argument("config: overlap must be in [0, 1)");
    }
    if (!(cfg.relax > 0.0 && cfg.relax <= 1.0)) {
        throw std::invalid_argument("config: relax must be in (0, 1]");
    }
    if (cfg.bin_width <= 0.0) {
        throw std::invalid_argument("config: bin_width must be positive");
    }
    if (!(cfg.boundary >= 0.0 && cfg.boundary <= 1.0)) {
        throw std::invalid_argument("config: boundary must be in [0, 1]");
    }
    if (!cfg.weights.empty()) {
        if (cfg.weights.size() != cfg.tile_sizes.size()) {
            throw std::invalid_argument("config: weights must match tile_sizes count");
        }
        validate_weights(WeightVector{cfg.weights});
    }
    if (cfg.epochs < 1) {
        throw std::invalid_argument("config: epochs must be >= 1");
    }
    if (cfg.learning_rate <= 0.0) {
        throw std::invalid_argument("config: learning_rate must be positive");
    }
    if (cfg.n_folds < 2) {
        throw std::invalid_argument("config: n_folds must be >= 2");
    }
}

}  // namespace tilesift
