#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace rustseg::testing {

namespace {

double q8(double c) { return std::round(std::clamp(c, 0.0, 1.0) * 255.0) / 255.0; }

void quantize(RgbImage& img) {
    for (double& c : img.data()) c = q8(c);
}

void noisy_fill(RgbImage& img, std::mt19937_64& rng, double r, double g, double b, double amp) {
    std::uniform_real_distribution<double> noise(-amp, amp);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            img.set(x, y, std::clamp(r + noise(rng), 0.0, 1.0), std::clamp(g + noise(rng), 0.0, 1.0),
                    std::clamp(b + noise(rng), 0.0, 1.0));
}

enum class Shape { Rect, Ellipse };

void paint_patch(RgbImage& img, BinaryMask& truth, Shape shape, int x0, int y0, int w, int h, double r, double g,
                 double b) {
    const double cx = x0 + w / 2.0, cy = y0 + h / 2.0;
    for (int y = y0; y < y0 + h; ++y) {
        for (int x = x0; x < x0 + w; ++x) {
            if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) continue;
            if (shape == Shape::Ellipse) {
                const double dx = (x + 0.5 - cx) / (w / 2.0), dy = (y + 0.5 - cy) / (h / 2.0);
                if (dx * dx + dy * dy > 1.0) continue;
            }
            img.set(x, y, r, g, b);
            truth.set(x, y, true);
        }
    }
}

void add_rust_patches(RgbImage& img, BinaryMask& truth, std::mt19937_64& rng, int count, int min_side,
                      int max_side) {
    std::uniform_real_distribution<double> hue(5.0, 30.0), sat(0.5, 0.9), val(0.2, 0.7);
    std::uniform_int_distribution<int> side(min_side, max_side);
    std::bernoulli_distribution ellipse(0.5);
    for (int k = 0; k < count; ++k) {
        const int w = side(rng), h = side(rng);
        std::uniform_int_distribution<int> px(0, img.width() - w), py(0, img.height() - h);
        const int x0 = px(rng), y0 = py(rng);
        double r, g, b;
        hsv_to_rgb_reference(hue(rng), sat(rng), val(rng), r, g, b);
        paint_patch(img, truth, ellipse(rng) ? Shape::Ellipse : Shape::Rect, x0, y0, w, h, r, g, b);
    }
}

}  // namespace

void hsv_to_rgb_reference(double h, double s, double v, double& r, double& g, double& b) {
    const double c = v * s;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r1 = 0, g1 = 0, b1 = 0;
    if (hp < 1) { r1 = c; g1 = x; }
    else if (hp < 2) { r1 = x; g1 = c; }
    else if (hp < 3) { g1 = c; b1 = x; }
    else if (hp < 4) { g1 = x; b1 = c; }
    else if (hp < 5) { r1 = x; b1 = c; }
    else { r1 = c; b1 = x; }
    const double m = v - c;
    r = r1 + m;
    g = g1 + m;
    b = b1 + m;
}

Fixture make_rust_fixture(std::uint32_t seed) {
    std::mt19937_64 rng(0x5eed0000ULL + seed);
    Fixture f{RgbImage(512, 512), BinaryMask(512, 512)};
    noisy_fill(f.image, rng, 0.47, 0.49, 0.51, 0.03);
    std::uniform_int_distribution<int> count(1, 5);
    add_rust_patches(f.image, f.truth, rng, count(rng), 24, 96);
    quantize(f.image);
    return f;
}

Fixture make_station_object(int index) {
    std::mt19937_64 rng(0x57a7100ULL + static_cast<unsigned>(index));
    Fixture f{RgbImage(640, 480), BinaryMask(640, 480)};
    BinaryMask scratch(640, 480);
    switch (index % 4) {
        case 0:  // gray steel mast
            noisy_fill(f.image, rng, 0.47, 0.49, 0.51, 0.03);
            break;
        case 1:  // light panel with a green cable tray
            noisy_fill(f.image, rng, 0.70, 0.71, 0.72, 0.03);
            paint_patch(f.image, scratch, Shape::Rect, 0, 200, 640, 60, 0.15, 0.35, 0.20);
            break;
        case 2:  // white tank with a safety-yellow band
            noisy_fill(f.image, rng, 0.85, 0.86, 0.88, 0.03);
            paint_patch(f.image, scratch, Shape::Rect, 0, 40, 640, 30, 0.90, 0.78, 0.10);
            break;
        default:  // blue-gray cabinet with a black cable
            noisy_fill(f.image, rng, 0.35, 0.42, 0.55, 0.03);
            paint_patch(f.image, scratch, Shape::Rect, 300, 0, 12, 480, 0.05, 0.05, 0.06);
            break;
    }
    if (station_is_rusty(index)) {
        std::uniform_int_distribution<int> count(2, 4);
        add_rust_patches(f.image, f.truth, rng, count(rng), 40, 80);
    }
    quantize(f.image);
    return f;
}

RgbImage make_board(int width, int height, double r, double g, double b) {
    RgbImage img(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) img.set(x, y, r, g, b);
    return img;
}

void paint_rect(RgbImage& img, int x0, int y0, int w, int h, double r, double g, double b) {
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x) img.set(x, y, r, g, b);
}

double iou(const BinaryMask& a, const BinaryMask& b) {
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        inter += a[i] && b[i];
        uni += a[i] || b[i];
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

FloatPlane naive_convolve(const FloatPlane& plane, const GaussianKernel& kernel) {
    auto mirror = [](int i, int n) {
        while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
        return i;
    };
    FloatPlane out(plane.width(), plane.height());
    const int r = kernel.radius;
    for (int y = 0; y < plane.height(); ++y)
        for (int x = 0; x < plane.width(); ++x) {
            double acc = 0.0;
            for (int dj = -r; dj <= r; ++dj)
                for (int di = -r; di <= r; ++di)
                    acc += kernel.weight(di, dj) * plane(mirror(x + di, plane.width()), mirror(y + dj, plane.height()));
            out(x, y) = acc;
        }
    return out;
}

double between_class_variance(const Histogram& h, int lo, int hi, int t) {
    double total = 0.0, mass = 0.0;
    for (int i = lo; i < hi; ++i) {
        total += static_cast<double>(h.bins[i]);
        mass += static_cast<double>(h.bins[i]) * i;
    }
    const double mu = mass / total;
    double p0 = 0.0, m0 = 0.0, p1 = 0.0, m1 = 0.0;
    for (int i = lo; i < t; ++i) {
        p0 += static_cast<double>(h.bins[i]);
        m0 += static_cast<double>(h.bins[i]) * i;
    }
    for (int i = t; i < hi; ++i) {
        p1 += static_cast<double>(h.bins[i]);
        m1 += static_cast<double>(h.bins[i]) * i;
    }
    double sb = 0.0;
    if (p0 > 0) sb += (p0 / total) * (m0 / p0 - mu) * (m0 / p0 - mu);
    if (p1 > 0) sb += (p1 / total) * (m1 / p1 - mu) * (m1 / p1 - mu);
    return sb;
}

int brute_force_otsu(const Histogram& h, int lo, int hi) {
    int best_t = lo + 1;
    double best = -1.0;
    for (int t = lo + 1; t < hi; ++t) {
        const double sb = between_class_variance(h, lo, hi, t);
        if (sb > best) {
            best = sb;
            best_t = t;
        }
    }
    return best_t;
}

std::vector<std::uint32_t> naive_region_query(const PointSet& pts, std::size_t i, double eps) {
    std::vector<std::uint32_t> out;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        const double dx = pts[j].x - pts[i].x, dy = pts[j].y - pts[i].y;
        if (std::sqrt(dx * dx + dy * dy) <= eps) out.push_back(static_cast<std::uint32_t>(j));
    }
    return out;
}

std::vector<int> naive_dbscan(const PointSet& pts, double eps, int min_pts) {
    constexpr int undefined = -2;
    std::vector<int> label(pts.size(), undefined);
    int c = -1;
    for (std::size_t p = 0; p < pts.size(); ++p) {
        if (label[p] != undefined) continue;
        auto n = naive_region_query(pts, p, eps);
        if (static_cast<int>(n.size()) < min_pts) {
            label[p] = kNoise;
            continue;
        }
        label[p] = ++c;
        std::vector<std::uint32_t> seeds;
        for (auto q : n)
            if (q != p) seeds.push_back(q);
        for (std::size_t k = 0; k < seeds.size(); ++k) {
            const auto q = seeds[k];
            if (label[q] == kNoise) label[q] = c;
            if (label[q] != undefined) continue;
            label[q] = c;
            auto nq = naive_region_query(pts, q, eps);
            if (static_cast<int>(nq.size()) >= min_pts) seeds.insert(seeds.end(), nq.begin(), nq.end());
        }
    }
    return label;
}

PointSet random_points(std::uint32_t seed, std::size_t n, int extent) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> coord(0, extent - 1);
    std::vector<std::uint8_t> used(static_cast<std::size_t>(extent) * extent, 0);
    PointSet pts;
    while (pts.size() < n) {
        const int x = coord(rng), y = coord(rng);
        auto& u = used[static_cast<std::size_t>(y) * extent + x];
        if (u) continue;
        u = 1;
        pts.push_back({x, y});
    }
    return pts;
}

std::filesystem::path make_temp_dir(const std::string& tag) {
    std::random_device rd;
    auto dir = std::filesystem::temp_directory_path() / ("rustseg-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace rustseg::testing
