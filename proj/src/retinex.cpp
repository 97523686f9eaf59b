#include "rustseg/retinex.hpp"

#include <algorithm>
#include <cmath>

#include "rustseg/error.hpp"

namespace rustseg {

double auto_sigma(int width, int height) {
    return std::max(10.0, 0.05 * static_cast<double>(std::max(width, height)));
}

void validate(const SsrParams& params) {
    if (params.sigma && !(*params.sigma > 0.0 && std::isfinite(*params.sigma)))
        throw Error(ErrorCode::InvalidArgument, "ssr sigma must be > 0");
    if (!(params.epsilon_floor > 0.0 && params.epsilon_floor <= 1e-3))
        throw Error(ErrorCode::InvalidArgument, "ssr epsilon_floor must be in (0, 1e-3]");
}

GaussianKernel gaussian_kernel(double sigma, int radius) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::InvalidArgument, "kernel sigma must be > 0");
    if (radius < 1) throw Error(ErrorCode::InvalidArgument, "kernel radius must be >= 1");

    GaussianKernel k;
    k.radius = radius;
    k.sigma = sigma;
    const int n = k.extent();
    const double s2 = sigma * sigma;

    k.axis.resize(n);
    double axis_sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k.axis[i + radius] = std::exp(-static_cast<double>(i) * i / s2);
        axis_sum += k.axis[i + radius];
    }
    for (double& w : k.axis) w /= axis_sum;

    // exp(-(i^2+j^2)/s^2) factors as exp(-i^2/s^2) exp(-j^2/s^2), so the
    // product of normalized axes is already K * F(i,j).
    k.weights.resize(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) k.weights[static_cast<std::size_t>(j) * n + i] = k.axis[j] * k.axis[i];
    return k;
}

namespace {

// Half-sample symmetric reflection: ... c b a | a b c ... | c b a ...
int reflect(int i, int n) {
    const int period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
}

void check_extent(int extent, int n, const char* axis) {
    if (n > 1 && extent > 2 * n)
        throw Error(ErrorCode::Dimension, std::string("kernel larger than twice the image ") + axis);
}

}  // namespace

FloatPlane convolve(const FloatPlane& plane, const GaussianKernel& kernel) {
    if (plane.empty()) throw Error(ErrorCode::Dimension, "cannot convolve an empty plane");
    const int w = plane.width();
    const int h = plane.height();
    const int r = kernel.radius;
    check_extent(kernel.extent(), w, "width");
    check_extent(kernel.extent(), h, "height");

    const double* k = kernel.axis.data() + r;
    std::vector<double> padded(static_cast<std::size_t>(w) + 2 * r);
    FloatPlane tmp(w, h);

    // Horizontal pass on reflected rows.
    for (int y = 0; y < h; ++y) {
        for (int x = -r; x < w + r; ++x) padded[x + r] = plane(reflect(x, w), y);
        for (int x = 0; x < w; ++x) {
            const double* src = padded.data() + x + r;
            double acc = 0.0;
            for (int d = -r; d <= r; ++d) acc += k[d] * src[d];
            tmp(x, y) = acc;
        }
    }

    // Vertical pass, row by row so the inner loop runs over contiguous memory.
    FloatPlane out(w, h);
    auto src = tmp.data();
    auto dst = out.data();
    for (int y = 0; y < h; ++y) {
        double* orow = dst.data() + static_cast<std::size_t>(y) * w;
        for (int d = -r; d <= r; ++d) {
            const double wd = k[d];
            const double* irow = src.data() + static_cast<std::size_t>(reflect(y + d, h)) * w;
            for (int x = 0; x < w; ++x) orow[x] += wd * irow[x];
        }
    }
    return out;
}

FloatPlane ssr(const FloatPlane& plane, const SsrParams& params) {
    validate(params);
    if (plane.empty()) throw Error(ErrorCode::Dimension, "cannot run ssr on an empty plane");
    for (double v : plane.data())
        if (!(v >= 0.0)) throw Error(ErrorCode::InvalidArgument, "ssr input must be non-negative");

    const double sigma = params.sigma.value_or(auto_sigma(plane.width(), plane.height()));
    int radius = static_cast<int>(std::ceil(3.0 * sigma));
    int limit = 0;
    for (int n : {plane.width(), plane.height()})
        if (n > 1) limit = limit == 0 ? n - 1 : std::min(limit, n - 1);
    if (limit > 0) radius = std::min(radius, limit);
    radius = std::max(radius, 1);

    const FloatPlane surround = convolve(plane, gaussian_kernel(sigma, radius));
    const double eps = params.epsilon_floor;
    FloatPlane out(plane.width(), plane.height());
    auto l = plane.data();
    auto s = surround.data();
    auto o = out.data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::log(std::max(l[i], eps)) - std::log(std::max(s[i], eps));
    return out;
}

FloatPlane linear_stretch(const FloatPlane& plane) {
    if (plane.empty()) throw Error(ErrorCode::Dimension, "cannot stretch an empty plane");
    auto [lo_it, hi_it] = std::minmax_element(plane.data().begin(), plane.data().end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    FloatPlane out(plane.width(), plane.height(), 0.5);
    if (hi == lo) return out;
    const double span = hi - lo;
    auto src = plane.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::clamp((src[i] - lo) / span, 0.0, 1.0);
    return out;
}

}  // namespace rustseg
