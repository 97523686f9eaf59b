#pragma once

#include <span>
#include <vector>

#include "rustseg/imaging.hpp"

namespace rustseg {

/// h in degrees [0,360), s and v in [0,1].
struct HsvPixel {
    double h = 0.0;
    double s = 0.0;
    double v = 0.0;
};

struct Rgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
};

class HsvImage {
public:
    HsvImage() = default;
    HsvImage(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    const HsvPixel& operator()(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    HsvPixel& operator()(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    const HsvPixel& operator[](std::size_t i) const { return data_[i]; }
    HsvPixel& operator[](std::size_t i) { return data_[i]; }

    std::span<const HsvPixel> data() const noexcept { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<HsvPixel> data_;
};

// Throws InvalidArgument for channels outside [0,1].
HsvPixel rgb_to_hsv(double r, double g, double b);
Rgb hsv_to_rgb(const HsvPixel& p);

HsvImage rgb_image_to_hsv(const RgbImage& image);
FloatPlane extract_saturation(const HsvImage& image);

}  // namespace rustseg
