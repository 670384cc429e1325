// Python bindings for the core operations: entropy, tiling + sifting,
// aggregation, and the baseline tile classifier.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tilesift/aggregator.hpp"
#include "tilesift/classifier.hpp"
#include "tilesift/entropy.hpp"
#include "tilesift/raster.hpp"
#include "tilesift/sifter.hpp"
#include "tilesift/tiler.hpp"

namespace py = pybind11;
using namespace tilesift;

namespace {

using GrayArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

ImageU8 to_image(const GrayArray& a) {
    if (a.ndim() != 2) {
        throw std::invalid_argument("expected a 2-D uint8 grayscale array");
    }
    ImageU8 img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    auto r = a.unchecked<2>();
    for (py::ssize_t y = 0; y < a.shape(0); ++y) {
        for (py::ssize_t x = 0; x < a.shape(1); ++x) {
            img.at(static_cast<int>(x), static_cast<int>(y)) = r(y, x);
        }
    }
    return img;
}

py::array_t<std::uint8_t> from_image(const ImageU8& img) {
    py::array_t<std::uint8_t> a({img.height, img.width});
    auto w = a.mutable_unchecked<2>();
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            w(y, x) = img.at(x, y);
        }
    }
    return a;
}

TileScale square_scale(int tile, double overlap, int scale_id) {
    TileScale s;
    s.scale_id = scale_id;
    s.tile_w = tile;
    s.tile_h = tile;
    s.overlap = overlap;
    return s;
}

}  // namespace

PYBIND11_MODULE(_tilesift, m) {
    m.doc() = "entropy-sifted image tiling and ensemble aggregation";

    py::class_<TileRecord>(m, "TileRecord")
        .def_readonly("image_id", &TileRecord::image_id)
        .def_readonly("scale_id", &TileRecord::scale_id)
        .def_readonly("tile_index", &TileRecord::tile_index)
        .def_readonly("x", &TileRecord::x)
        .def_readonly("y", &TileRecord::y)
        .def_readonly("w", &TileRecord::w)
        .def_readonly("h", &TileRecord::h)
        .def_readonly("entropy", &TileRecord::entropy)
        .def_readonly("retained", &TileRecord::retained)
        .def("__repr__", [](const TileRecord& r) {
            return "TileRecord(x=" + std::to_string(r.x) + ", y=" + std::to_string(r.y) +
                   ", entropy=" + std::to_string(r.entropy) +
                   ", retained=" + (r.retained ? std::string("True") : std::string("False")) +
                   ")";
        });

    py::class_<LogisticModel>(m, "LogisticModel")
        .def_readonly("weights", &LogisticModel::weights)
        .def_readonly("bias", &LogisticModel::bias)
        .def_readonly("version_id", &LogisticModel::version_id)
        .def_readonly("epoch", &LogisticModel::epoch)
        .def("predict", &LogisticModel::predict, py::arg("features"));

    m.def("luminance", &luminance, py::arg("r"), py::arg("g"), py::arg("b"),
          "ITU-R 601 luminance of one RGB pixel, rounded half-up");

    m.def(
        "image_entropy", [](const GrayArray& a) { return image_entropy(to_image(a)); },
        py::arg("image"), "Shannon entropy of the pixel-value distribution, bits");

    m.def(
        "resample",
        [](const GrayArray& a, double native, double target) {
            return from_image(resample(to_image(a), native, target));
        },
        py::arg("image"), py::arg("native_resolution"), py::arg("target_resolution"),
        "Box-average resample between physical resolutions");

    m.def(
        "tile_grid",
        [](const GrayArray& a, int tile, double overlap) {
            TileGrid grid = generate_grid(to_image(a), square_scale(tile, overlap, 1));
            return grid.origins;
        },
        py::arg("image"), py::arg("tile"), py::arg("overlap"),
        "Row-major (x, y) tile origins, stride derived from the overlap");

    m.def(
        "sift_tiles",
        [](const GrayArray& a, int tile, double overlap, double relax) {
            ImageU8 img = to_image(a);
            TileGrid grid = generate_grid(img, square_scale(tile, overlap, 1));
            auto records = make_records("", grid);
            auto entropies = tile_entropies(img, grid);
            for (std::size_t i = 0; i < records.size(); ++i) {
                records[i].entropy = entropies[i];
            }
            if (!records.empty()) {
                sift(records, image_entropy(img), SiftPolicy{relax, false});
            }
            return records;
        },
        py::arg("image"), py::arg("tile"), py::arg("overlap"), py::arg("relax") = 1.0,
        "Tile the image and mark tiles whose entropy meets relax * image entropy");

    m.def(
        "featurize", [](const GrayArray& a) { return featurize(to_image(a)); },
        py::arg("tile"), "Histogram + moment + entropy feature vector of one tile");

    m.def(
        "train_baseline",
        [](const std::vector<FeatureVector>& features, const std::vector<int>& labels,
           int epochs, double learning_rate, std::uint64_t seed) {
            return train_baseline(features, labels, epochs, learning_rate, seed).model;
        },
        py::arg("features"), py::arg("labels"), py::arg("epochs") = 40,
        py::arg("learning_rate") = 1.0, py::arg("seed") = 0,
        "Logistic-regression tile baseline; returns the final checkpoint");

    m.def(
        "average_probability",
        [](const std::vector<double>& p) { return average_probability(p); },
        py::arg("probs"));
    m.def(
        "majority_vote", [](const std::vector<double>& p) { return majority_vote(p); },
        py::arg("probs"));
    m.def(
        "tile_variance", [](const std::vector<double>& p) { return tile_variance(p); },
        py::arg("probs"));
    m.def("classify", &classify, py::arg("score"), py::arg("boundary") = 0.5);

    m.def(
        "combine_scales",
        [](const std::vector<double>& scores, const std::vector<double>& weights) {
            return combine_scales(scores, WeightVector{weights});
        },
        py::arg("scores"), py::arg("weights"),
        "Convex combination of per-scale scores");

    m.def(
        "optimize_weights",
        [](const std::vector<std::vector<double>>& scores, const std::vector<int>& labels,
           double grid_step, double boundary) {
            return optimize_weights(scores, labels, grid_step, boundary).weights;
        },
        py::arg("scores"), py::arg("labels"), py::arg("grid_step") = 0.01,
        py::arg("boundary") = 0.5,
        "Exhaustive simplex grid search for the best per-scale weights");
}
