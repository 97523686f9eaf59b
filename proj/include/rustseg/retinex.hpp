#pragma once

#include <optional>
#include <vector>

#include "rustseg/imaging.hpp"

namespace rustseg {

// Truncated 2-D Gaussian F(i,j) = K exp(-(i^2 + j^2) / sigma^2) over
// [-radius, radius]^2, with K chosen so the weights sum to one. The kernel is
// separable; `axis` holds the normalized 1-D factor so that
// weights(i, j) == axis[i] * axis[j] up to rounding.
struct GaussianKernel {
    int radius = 0;
    double sigma = 0.0;
    std::vector<double> weights;  // (2r+1)^2, row-major, index (j+r)*(2r+1) + (i+r)
    std::vector<double> axis;     // 2r+1

    int extent() const noexcept { return 2 * radius + 1; }
    double weight(int di, int dj) const { return weights[(dj + radius) * extent() + (di + radius)]; }
};

struct SsrParams {
    std::optional<double> sigma;  // unset -> auto_sigma(width, height)
    double epsilon_floor = 1e-4;

    friend bool operator==(const SsrParams&, const SsrParams&) = default;
};

inline constexpr double kDefaultEpsilonFloor = 1e-4;

/// sigma = max(10, 0.05 * max(width, height)).
double auto_sigma(int width, int height);

GaussianKernel gaussian_kernel(double sigma, int radius);

/// Mirror-reflected (half-sample symmetric) correlation, computed as two 1-D passes.
FloatPlane convolve(const FloatPlane& plane, const GaussianKernel& kernel);

/// Reflectance R = ln(max(L, eps)) - ln(max(L*F, eps)) with radius ceil(3 sigma),
/// clamped so the kernel fits the image.
FloatPlane ssr(const FloatPlane& plane, const SsrParams& params);

/// Affine map of [min, max] onto [0, 1]; a constant plane maps to 0.5.
FloatPlane linear_stretch(const FloatPlane& plane);

void validate(const SsrParams& params);

}  // namespace rustseg
