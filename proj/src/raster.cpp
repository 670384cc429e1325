#include "tilesift/raster.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "tilesift/image_io.hpp"
#include "tilesift/util.hpp"

namespace tilesift {

std::uint8_t luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    double y = 0.299 * r + 0.587 * g + 0.114 * b;
    int v = round_half_up(y);
    if (v < 0) v = 0;
    if (v > 255) v = 255;
    return static_cast<std::uint8_t>(v);
}

SourceImage load_image(const std::string& path, double native_resolution,
                       std::optional<int> label, std::string image_id) {
    if (native_resolution <= 0.0) {
        throw std::invalid_argument("load_image: native resolution must be positive, got " +
                                    fmt_double(native_resolution));
    }
    SourceImage img;
    img.image = decode_image_file(path);
    if (img.image.empty()) {
        throw std::runtime_error("load_image: zero-sized image in " + path);
    }
    img.image_id = image_id.empty() ? std::filesystem::path(path).stem().string()
                                    : std::move(image_id);
    img.native_resolution = native_resolution;
    img.label = label;
    return img;
}

ScreenVerdict screen_candidate(const SourceImage& img, const ResolutionPolicy& policy) {
    double native = img.native_resolution;
    double target = policy.target_resolution;
    if (native < target && !policy.allow_upsampling) {
        return {false, "upsampling: native " + fmt_fixed(native, 2) + " px/cm below target " +
                           fmt_fixed(target, 2)};
    }
    double ratio = native / target;
    if (ratio > policy.max_downscale_ratio) {
        return {false, "downscale ratio " + fmt_fixed(ratio, 2) + " exceeds " +
                           fmt_fixed(policy.max_downscale_ratio, 2)};
    }
    return {true, "ok: ratio " + fmt_fixed(ratio, 2)};
}

namespace {

// Distributes one axis of a box filter: output cell j covers the source
// interval [j*s, (j+1)*s) with s = in_dim / out_dim; each covered source
// cell contributes its overlap length.
struct BoxWeights {
    // For output index j: source cells [first[j], last[j]] with weights
    // stored contiguously in w starting at offset[j].
    std::vector<int> first, last;
    std::vector<std::size_t> offset;
    std::vector<double> w;
    double norm = 1.0;  // total weight per output cell (== s)
};

BoxWeights box_weights(int in_dim, int out_dim) {
    BoxWeights bw;
    double s = static_cast<double>(in_dim) / static_cast<double>(out_dim);
    bw.norm = s;
    bw.first.resize(out_dim);
    bw.last.resize(out_dim);
    bw.offset.resize(out_dim);
    for (int j = 0; j < out_dim; ++j) {
        double lo = j * s;
        double hi = (j + 1) * s;
        int f = static_cast<int>(std::floor(lo));
        int l = static_cast<int>(std::ceil(hi)) - 1;
        if (l >= in_dim) l = in_dim - 1;
        if (f > l) f = l;
        bw.first[j] = f;
        bw.last[j] = l;
        bw.offset[j] = bw.w.size();
        for (int i = f; i <= l; ++i) {
            double cell_lo = std::max(lo, static_cast<double>(i));
            double cell_hi = std::min(hi, static_cast<double>(i + 1));
            bw.w.push_back(std::max(0.0, cell_hi - cell_lo));
        }
    }
    return bw;
}

}  // namespace

ImageU8 resample(const ImageU8& img, double native_resolution, double target_resolution) {
    if (img.empty()) {
        throw std::invalid_argument("resample: empty image");
    }
    if (native_resolution <= 0.0 || target_resolution <= 0.0) {
        throw std::invalid_argument("resample: resolutions must be positive");
    }
    if (native_resolution == target_resolution) {
        return img;
    }
    double factor = target_resolution / native_resolution;
    int out_w = round_half_up(img.width * factor);
    int out_h = round_half_up(img.height * factor);
    if (out_w < 1 || out_h < 1) {
        throw std::invalid_argument("resample: output dimension rounds to zero (" +
                                    std::to_string(out_w) + "x" + std::to_string(out_h) + ")");
    }

    BoxWeights wx = box_weights(img.width, out_w);
    BoxWeights wy = box_weights(img.height, out_h);

    // Horizontal pass kept in doubles so the two passes compose to the exact
    // 2-D box average before the single final rounding.
    std::vector<double> mid(static_cast<std::size_t>(out_w) * img.height);
    for (int y = 0; y < img.height; ++y) {
        const std::uint8_t* src = img.row(y);
        double* dst = mid.data() + static_cast<std::size_t>(y) * out_w;
        for (int j = 0; j < out_w; ++j) {
            double acc = 0.0;
            std::size_t o = wx.offset[j];
            for (int i = wx.first[j]; i <= wx.last[j]; ++i, ++o) {
                acc += wx.w[o] * src[i];
            }
            dst[j] = acc;
        }
    }

    ImageU8 out(out_w, out_h);
    double norm = wx.norm * wy.norm;
    for (int j = 0; j < out_h; ++j) {
        std::uint8_t* dst = out.row(j);
        for (int x = 0; x < out_w; ++x) {
            double acc = 0.0;
            std::size_t o = wy.offset[j];
            for (int i = wy.first[j]; i <= wy.last[j]; ++i, ++o) {
                acc += wy.w[o] * mid[static_cast<std::size_t>(i) * out_w + x];
            }
            int v = round_half_up(acc / norm);
            if (v < 0) v = 0;
            if (v > 255) v = 255;
            dst[x] = static_cast<std::uint8_t>(v);
        }
    }
    return out;
}

SourceImage resample(const SourceImage& img, double target_resolution) {
    SourceImage out;
    out.image_id = img.image_id;
    out.label = img.label;
    out.image = resample(img.image, img.native_resolution, target_resolution);
    out.native_resolution = target_resolution;
    return out;
}

}  // namespace tilesift
