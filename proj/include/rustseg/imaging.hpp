#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace rustseg {

struct ClusterSet;

/// Row-major RGB raster, each channel a real in [0,1].
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height);
    RgbImage(int width, int height, std::vector<double> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }
    bool empty() const noexcept { return pixel_count() == 0; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    const double* at(int x, int y) const { return &data_[(static_cast<std::size_t>(y) * width_ + x) * 3]; }
    double* at(int x, int y) { return &data_[(static_cast<std::size_t>(y) * width_ + x) * 3]; }

    void set(int x, int y, double r, double g, double b);

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Single-channel real raster; unbounded values.
class FloatPlane {
public:
    FloatPlane() = default;
    FloatPlane(int width, int height, double fill = 0.0);
    FloatPlane(int width, int height, std::vector<double> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double operator()(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    double& operator()(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Per-pixel rust candidacy, true = candidate.
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, bool fill = false);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return bits_.size(); }

    bool operator()(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    void set(int x, int y, bool v) { bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }

    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }

    std::size_t popcount() const noexcept;

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

struct Rgb8 {
    std::uint8_t r = 255;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
};

struct OverlayStyle {
    Rgb8 color{255, 0, 0};
    double blend = 0.5;
};

// Decoding. Accepts PNG or JPEG (by signature); 8-bit channels map to c/255,
// 16-bit to c/65535; alpha is dropped; grayscale is replicated to RGB.
RgbImage load_rgb(const std::filesystem::path& path);
RgbImage decode_rgb(std::span<const std::uint8_t> bytes);

// Encoding. Masks become 8-bit gray (true -> 255), images 8-bit RGB.
std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask);
std::vector<std::uint8_t> encode_rgb_png(const RgbImage& image);
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);
void save_rgb(const RgbImage& image, const std::filesystem::path& path);
BinaryMask load_mask(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Blends pixels of retained (non-noise) cluster points toward the highlight color.
RgbImage render_overlay(const RgbImage& image, const ClusterSet& clusters, const OverlayStyle& style = {});

}  // namespace rustseg
