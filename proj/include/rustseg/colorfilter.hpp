#pragma once

#include <string_view>
#include <vector>

#include "rustseg/colorspace.hpp"
#include "rustseg/imaging.hpp"

namespace rustseg {

/// Inclusive HSV box. Hue wraps through 0 when h_lo > h_hi.
struct HsvRange {
    double h_lo = 0.0;
    double h_hi = 0.0;
    double s_lo = 0.0;
    double s_hi = 1.0;
    double v_lo = 0.0;
    double v_hi = 1.0;

    friend bool operator==(const HsvRange&, const HsvRange&) = default;
};

enum class Fusion { ColorOnly, AndWithThreshold, OrWithThreshold };

std::string_view to_string(Fusion f);
/// Accepts "color"/"and"/"or" and the long forms "color_only", "and_with_threshold", "or_with_threshold".
Fusion parse_fusion(std::string_view s);

struct FilterConfig {
    std::vector<HsvRange> ranges;
    Fusion fusion = Fusion::AndWithThreshold;

    friend bool operator==(const FilterConfig&, const FilterConfig&) = default;
};

std::vector<HsvRange> default_rust_ranges();

bool in_range(const HsvPixel& p, const HsvRange& r);
BinaryMask apply_ranges(const HsvImage& image, const FilterConfig& config);
BinaryMask fuse_masks(const BinaryMask& color, const BinaryMask& threshold, Fusion mode);

}  // namespace rustseg
