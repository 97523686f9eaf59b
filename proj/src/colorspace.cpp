#include "rustseg/colorspace.hpp"

#include <algorithm>
#include <cmath>

#include "rustseg/error.hpp"

namespace rustseg {

HsvImage::HsvImage(int width, int height)
    : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height) {}

HsvPixel rgb_to_hsv(double r, double g, double b) {
    auto ok = [](double c) { return c >= 0.0 && c <= 1.0; };
    if (!ok(r) || !ok(g) || !ok(b)) throw Error(ErrorCode::InvalidArgument, "rgb channel outside [0,1]");

    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double d = mx - mn;

    HsvPixel p;
    if (d == 0.0) {
        p.h = 0.0;
    } else if (mx == r) {
        p.h = 60.0 * (g - b) / d;
        if (g < b) p.h += 360.0;
    } else if (mx == g) {
        p.h = 60.0 * (b - r) / d + 120.0;
    } else {
        p.h = 60.0 * (r - g) / d + 240.0;
    }
    if (p.h >= 360.0) p.h -= 360.0;

    p.s = mx == 0.0 ? 0.0 : 1.0 - mn / mx;
    p.v = mx;
    return p;
}

Rgb hsv_to_rgb(const HsvPixel& p) {
    const double v = p.v;
    const double c = v * p.s;
    if (c == 0.0) return {v, v, v};

    double h = std::fmod(p.h, 360.0);
    if (h < 0.0) h += 360.0;
    const double hp = h / 60.0;
    const int sector = std::min(5, static_cast<int>(hp));
    const double f = hp - sector;
    const double mn = v - c;
    // The middle channel rises (even sectors) or falls (odd sectors) linearly.
    const double rising = mn + c * f;
    const double falling = v - c * f;

    switch (sector) {
        case 0: return {v, rising, mn};
        case 1: return {falling, v, mn};
        case 2: return {mn, v, rising};
        case 3: return {mn, falling, v};
        case 4: return {rising, mn, v};
        default: return {v, mn, falling};
    }
}

HsvImage rgb_image_to_hsv(const RgbImage& image) {
    HsvImage out(image.width(), image.height());
    auto src = image.data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = rgb_to_hsv(src[3 * i], src[3 * i + 1], src[3 * i + 2]);
    return out;
}

FloatPlane extract_saturation(const HsvImage& image) {
    FloatPlane out(image.width(), image.height());
    auto dst = out.data();
    for (std::size_t i = 0; i < image.size(); ++i) dst[i] = image[i].s;
    return out;
}

}  // namespace rustseg
