#include "rustseg/colorfilter.hpp"

#include "rustseg/error.hpp"

namespace rustseg {

std::string_view to_string(Fusion f) {
    switch (f) {
        case Fusion::ColorOnly: return "color";
        case Fusion::AndWithThreshold: return "and";
        case Fusion::OrWithThreshold: return "or";
    }
    return "and";
}

Fusion parse_fusion(std::string_view s) {
    if (s == "color" || s == "color_only") return Fusion::ColorOnly;
    if (s == "and" || s == "and_with_threshold") return Fusion::AndWithThreshold;
    if (s == "or" || s == "or_with_threshold") return Fusion::OrWithThreshold;
    throw Error(ErrorCode::InvalidArgument, "unknown fusion mode '" + std::string(s) + "'");
}

std::vector<HsvRange> default_rust_ranges() {
    // [340, 360) u [0, 35] as one wrapping interval
    return {HsvRange{340.0, 35.0, 0.35, 1.0, 0.15, 0.95}};
}

bool in_range(const HsvPixel& p, const HsvRange& r) {
    if (p.s < r.s_lo || p.s > r.s_hi) return false;
    if (p.v < r.v_lo || p.v > r.v_hi) return false;
    if (r.h_lo <= r.h_hi) return p.h >= r.h_lo && p.h <= r.h_hi;
    return p.h >= r.h_lo || p.h <= r.h_hi;
}

BinaryMask apply_ranges(const HsvImage& image, const FilterConfig& config) {
    BinaryMask mask(image.width(), image.height());
    for (std::size_t i = 0; i < image.size(); ++i) {
        const HsvPixel& p = image[i];
        for (const HsvRange& r : config.ranges) {
            if (in_range(p, r)) {
                mask.set(i, true);
                break;
            }
        }
    }
    return mask;
}

BinaryMask fuse_masks(const BinaryMask& color, const BinaryMask& threshold, Fusion mode) {
    if (color.width() != threshold.width() || color.height() != threshold.height())
        throw Error(ErrorCode::Dimension, "fused masks must have equal dimensions");
    if (mode == Fusion::ColorOnly) return color;
    BinaryMask out(color.width(), color.height());
    for (std::size_t i = 0; i < color.size(); ++i)
        out.set(i, mode == Fusion::AndWithThreshold ? (color[i] && threshold[i]) : (color[i] || threshold[i]));
    return out;
}

}  // namespace rustseg
