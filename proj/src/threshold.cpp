#include "rustseg/threshold.hpp"

#include <cmath>

#include "rustseg/error.hpp"

namespace rustseg {

int Histogram::occupied_bins(int lo, int hi) const {
    int n = 0;
    for (int i = lo; i < hi; ++i) n += bins[i] != 0;
    return n;
}

int quantize(double value) {
    return std::min(kHistogramBins - 1, static_cast<int>(std::floor(value * kHistogramBins)));
}

Histogram build_histogram(const FloatPlane& plane) {
    Histogram h;
    for (double v : plane.data()) {
        if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::InvalidArgument, "histogram input outside [0,1]");
        ++h.bins[quantize(v)];
    }
    h.total = plane.size();
    return h;
}

namespace {

struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};

Moments moments(const Histogram& h, int lo, int hi) {
    Moments m;
    double sum = 0.0;
    for (int i = lo; i < hi; ++i) {
        m.count += static_cast<double>(h.bins[i]);
        sum += static_cast<double>(h.bins[i]) * i;
    }
    if (m.count == 0.0) return m;
    m.mean = sum / m.count;
    double ss = 0.0;
    for (int i = lo; i < hi; ++i) {
        const double d = i - m.mean;
        ss += static_cast<double>(h.bins[i]) * d * d;
    }
    m.variance = ss / m.count;
    return m;
}

}  // namespace

ThresholdResult otsu_threshold(const Histogram& hist, BinRange range) {
    if (range.lo < 0 || range.hi > kHistogramBins || range.hi - range.lo < 2)
        throw Error(ErrorCode::InvalidArgument, "invalid histogram bin range");
    if (hist.occupied_bins(range.lo, range.hi) < 2)
        throw Error(ErrorCode::Degenerate, "histogram has fewer than two occupied bins");

    // Class sizes and first moments are exact integers, so candidate T values
    // that see identical class statistics produce identical objectives.
    using i128 = __int128;
    std::uint64_t n_total = 0;
    i128 s_total = 0;
    for (int i = range.lo; i < range.hi; ++i) {
        n_total += hist.bins[i];
        s_total += static_cast<i128>(hist.bins[i]) * i;
    }
    const double n = static_cast<double>(n_total);

    std::uint64_t n0 = 0;
    i128 s0 = 0;
    int best_t = range.lo + 1;
    double best = -1.0;
    for (int t = range.lo + 1; t < range.hi; ++t) {
        n0 += hist.bins[t - 1];
        s0 += static_cast<i128>(hist.bins[t - 1]) * (t - 1);
        const std::uint64_t n1 = n_total - n0;
        double sb = 0.0;
        if (n0 != 0 && n1 != 0) {
            // P0 (mu0 - mu)^2 + P1 (mu1 - mu)^2 == D^2 / (n0 n1 N^2), D = s0 N - S n0
            const double d = static_cast<double>(s0 * static_cast<i128>(n_total) - s_total * static_cast<i128>(n0));
            sb = (d / n) * (d / n) / (static_cast<double>(n0) * static_cast<double>(n1));
        }
        if (sb > best) {
            best = sb;
            best_t = t;
        }
    }

    ThresholdResult r;
    r.t_star = best_t;
    r.sigma_b2 = best;
    r.var_low = moments(hist, range.lo, best_t).variance;
    r.var_high = moments(hist, best_t, range.hi).variance;
    return r;
}

IteratedThreshold iterated_threshold_detail(const FloatPlane& plane) {
    IteratedThreshold out;
    out.mask = BinaryMask(plane.width(), plane.height());
    const Histogram hist = build_histogram(plane);
    if (hist.occupied_bins() < 2) {
        out.degenerate = true;
        return out;
    }

    out.first = otsu_threshold(hist);
    const int t1 = out.first->t_star;
    out.final_threshold = t1;

    if (out.first->var_high < out.first->var_low) {
        out.refined_class = RefinedClass::High;
        if (hist.occupied_bins(t1, kHistogramBins) >= 2) {
            out.refined = otsu_threshold(hist, {t1, kHistogramBins});
            out.final_threshold = out.refined->t_star;
        }
    } else {
        // Refining the background leaves the foreground (>= t1) unchanged.
        out.refined_class = RefinedClass::Low;
        if (hist.occupied_bins(0, t1) >= 2) out.refined = otsu_threshold(hist, {0, t1});
    }

    auto src = plane.data();
    for (std::size_t i = 0; i < src.size(); ++i) out.mask.set(i, quantize(src[i]) >= out.final_threshold);
    return out;
}

BinaryMask iterated_threshold(const FloatPlane& plane) {
    return iterated_threshold_detail(plane).mask;
}

}  // namespace rustseg
