#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rustseg/dbscan.hpp"
#include "rustseg/imaging.hpp"
#include "rustseg/retinex.hpp"
#include "rustseg/threshold.hpp"

namespace rustseg::testing {

struct Fixture {
    RgbImage image;
    BinaryMask truth;
};

/// 512x512 gray painted board, per-channel +-0.03 noise, 1-5 rust patches
/// (H in [5,30], S in [0.5,0.9], V in [0.2,0.7]); quantized to 8 bits.
Fixture make_rust_fixture(std::uint32_t seed);

/// Seven station objects: indices 0-3 carry rust (>= 0.5% area), 4-6 are clean.
Fixture make_station_object(int index);
inline constexpr int kStationObjects = 7;
inline bool station_is_rusty(int index) { return index < 4; }

/// Solid-color board with one axis-aligned square of another color.
RgbImage make_board(int width, int height, double r, double g, double b);
void paint_rect(RgbImage& img, int x0, int y0, int w, int h, double r, double g, double b);

double iou(const BinaryMask& a, const BinaryMask& b);

/// Independent HSV -> RGB (fmod-based textbook form) for generators.
void hsv_to_rgb_reference(double h, double s, double v, double& r, double& g, double& b);

// ---------------------------------------------------------------- oracles

/// Direct O(n k^2) correlation with the 2-D weights and mirror reflection.
FloatPlane naive_convolve(const FloatPlane& plane, const GaussianKernel& kernel);

/// sigma_b^2(T) by definition: P0 (mu0 - mu)^2 + P1 (mu1 - mu)^2 over bins [lo, hi).
double between_class_variance(const Histogram& h, int lo, int hi, int t);
/// Exhaustive argmax with smallest-T tie-break.
int brute_force_otsu(const Histogram& h, int lo = 0, int hi = kHistogramBins);

/// O(n^2) neighbor scan, self-inclusive, distance <= eps.
std::vector<std::uint32_t> naive_region_query(const PointSet& pts, std::size_t i, double eps);
/// Textbook DBSCAN over a brute-force neighbor scan, visiting in input order.
std::vector<int> naive_dbscan(const PointSet& pts, double eps, int min_pts);

PointSet random_points(std::uint32_t seed, std::size_t n, int extent);

std::filesystem::path make_temp_dir(const std::string& tag);

}  // namespace rustseg::testing
