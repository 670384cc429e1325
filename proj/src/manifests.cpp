#include "tilesift/manifests.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "tilesift/csv.hpp"
#include "tilesift/util.hpp"

namespace tilesift {

namespace {

double parse_double_field(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("manifest: bad " + what + " value '" + s + "'");
    }
}

int parse_int_field(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("manifest: bad " + what + " value '" + s + "'");
    }
}

}  // namespace

std::vector<ImageManifestRow> read_image_manifest(const std::string& path) {
    CsvFile file = read_csv(path);
    const std::vector<std::string> expected = {"image_id", "path", "px_per_cm", "label"};
    if (file.header != expected) {
        throw std::runtime_error("image manifest: bad header in " + path +
                                 " (expected image_id,path,px_per_cm,label)");
    }
    std::vector<ImageManifestRow> rows;
    rows.reserve(file.rows.size());
    for (const auto& r : file.rows) {
        ImageManifestRow row;
        row.image_id = r[0];
        row.path = r[1];
        row.px_per_cm = parse_double_field(r[2], "px_per_cm");
        if (row.image_id.empty()) {
            throw std::runtime_error("image manifest: empty image_id in " + path);
        }
        if (!r[3].empty()) {
            int label = parse_int_field(r[3], "label");
            if (label != 0 && label != 1) {
                throw std::runtime_error("image manifest: label must be 0 or 1, got " + r[3]);
            }
            row.label = label;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_image_manifest(const std::string& path,
                          const std::vector<ImageManifestRow>& rows) {
    CsvFile file;
    file.header = {"image_id", "path", "px_per_cm", "label"};
    for (const auto& r : rows) {
        file.rows.push_back({r.image_id, r.path, fmt_double(r.px_per_cm),
                             r.label ? std::to_string(*r.label) : std::string()});
    }
    write_csv(path, file);
}

void write_tile_manifest(const std::string& path, const std::vector<TileRecord>& records) {
    std::vector<const TileRecord*> order;
    order.reserve(records.size());
    for (const auto& r : records) order.push_back(&r);
    std::stable_sort(order.begin(), order.end(),
                     [](const TileRecord* a, const TileRecord* b) {
        if (a->image_id != b->image_id) return a->image_id < b->image_id;
        if (a->scale_id != b->scale_id) return a->scale_id < b->scale_id;
        return a->tile_index < b->tile_index;
    });

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write tile manifest: " + path);
    }
    for (const TileRecord* r : order) {
        nlohmann::ordered_json j;
        j["image_id"] = r->image_id;
        j["scale_id"] = r->scale_id;
        j["tile_index"] = r->tile_index;
        j["x"] = r->x;
        j["y"] = r->y;
        j["w"] = r->w;
        j["h"] = r->h;
        j["entropy"] = r->entropy;
        j["retained"] = r->retained;
        out << j.dump() << '\n';
    }
    if (!out) {
        throw std::runtime_error("tile manifest: write failed for " + path);
    }
}

std::vector<TileRecord> read_tile_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open tile manifest: " + path);
    }
    std::vector<TileRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("tile manifest: bad json at line " +
                                     std::to_string(line_no) + ": " + e.what());
        }
        TileRecord r;
        try {
            r.image_id = j.at("image_id").get<std::string>();
            r.scale_id = j.at("scale_id").get<int>();
            r.tile_index = j.at("tile_index").get<int>();
            r.x = j.at("x").get<int>();
            r.y = j.at("y").get<int>();
            r.w = j.at("w").get<int>();
            r.h = j.at("h").get<int>();
            r.entropy = j.at("entropy").get<double>();
            r.retained = j.at("retained").get<bool>();
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("tile manifest: missing field at line " +
                                     std::to_string(line_no) + ": " + e.what());
        }
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace tilesift
