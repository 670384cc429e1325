#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tilesift/tiler.hpp"

namespace tilesift {

// One row of the image manifest CSV: image_id,path,px_per_cm,label
// (label blank when unknown).
struct ImageManifestRow {
    std::string image_id;
    std::string path;
    double px_per_cm = 0.0;
    std::optional<int> label;
};

std::vector<ImageManifestRow> read_image_manifest(const std::string& path);
void write_image_manifest(const std::string& path,
                          const std::vector<ImageManifestRow>& rows);

// Tile manifest: JSON Lines, one object per TileRecord with keys
// image_id, scale_id, tile_index, x, y, w, h, entropy, retained,
// sorted by (image_id, scale_id, tile_index).
void write_tile_manifest(const std::string& path, const std::vector<TileRecord>& records);
std::vector<TileRecord> read_tile_manifest(const std::string& path);

}  // namespace tilesift
