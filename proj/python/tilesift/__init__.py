"""Entropy-sifted image tiling and ensemble probability aggregation."""

from ._tilesift import (
    LogisticModel,
    TileRecord,
    average_probability,
    classify,
    combine_scales,
    featurize,
    image_entropy,
    luminance,
    majority_vote,
    optimize_weights,
    resample,
    sift_tiles,
    tile_grid,
    tile_variance,
    train_baseline,
)

__all__ = [
    "LogisticModel",
    "TileRecord",
    "average_probability",
    "classify",
    "combine_scales",
    "featurize",
    "image_entropy",
    "luminance",
    "majority_vote",
    "optimize_weights",
    "resample",
    "sift_tiles",
    "tile_grid",
    "tile_variance",
    "train_baseline",
]
