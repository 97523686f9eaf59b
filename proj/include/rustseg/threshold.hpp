#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "rustseg/imaging.hpp"

namespace rustseg {

inline constexpr int kHistogramBins = 256;

struct Histogram {
    std::array<std::uint64_t, kHistogramBins> bins{};
    std::uint64_t total = 0;

    int occupied_bins(int lo = 0, int hi = kHistogramBins) const;
};

/// Bin range [lo, hi).
struct BinRange {
    int lo = 0;
    int hi = kHistogramBins;
};

struct ThresholdResult {
    int t_star = 1;
    double sigma_b2 = 0.0;   // in squared bin units
    double var_low = 0.0;    // variance of [lo, t_star)
    double var_high = 0.0;   // variance of [t_star, hi)
};

enum class RefinedClass { None, Low, High };

struct IteratedThreshold {
    BinaryMask mask;
    bool degenerate = false;           // fewer than two occupied bins; mask is all false
    std::optional<ThresholdResult> first;
    std::optional<ThresholdResult> refined;
    RefinedClass refined_class = RefinedClass::None;
    int final_threshold = kHistogramBins;  // mask = bin >= final_threshold
};

/// min(255, floor(v * 256)).
int quantize(double value);

Histogram build_histogram(const FloatPlane& plane);

/// Smallest T in (range.lo, range.hi) maximizing the between-class variance of
/// classes [lo, T) and [T, hi). Throws ErrorCode::Degenerate if fewer than two
/// bins of the range are occupied.
ThresholdResult otsu_threshold(const Histogram& hist, BinRange range = {});

/// One Otsu pass, then one refinement pass inside the smaller-variance class.
IteratedThreshold iterated_threshold_detail(const FloatPlane& plane);
BinaryMask iterated_threshold(const FloatPlane& plane);

}  // namespace rustseg
