#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rustseg/imaging.hpp"

namespace rustseg {

struct Point {
    int x = 0;
    int y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Coordinates of true mask pixels; mask_to_points yields row-major order.
using PointSet = std::vector<Point>;

struct DbscanParams {
    double eps = 3.0;
    int min_pts = 9;
    bool decimate = false;  // 2x OR-pooling before clustering when the mask is huge

    friend bool operator==(const DbscanParams&, const DbscanParams&) = default;
};

inline constexpr int kNoise = -1;
inline constexpr std::size_t kDecimateAbove = 2'000'000;

struct BoundingBox {
    int x_min = 0;
    int y_min = 0;
    int x_max = 0;
    int y_max = 0;
};

struct ClusterInfo {
    int id = 0;
    std::size_t pixel_count = 0;
    BoundingBox bbox;
    double centroid_x = 0.0;
    double centroid_y = 0.0;
};

struct ClusterSet {
    PointSet points;
    std::vector<int> labels;         // per point: cluster id or kNoise
    std::vector<std::uint8_t> core;  // per point: 1 if core
    std::vector<ClusterInfo> clusters;

    std::size_t retained_count() const;
};

/// Uniform grid over the point set. Cells are at least eps wide, so the 3x3
/// block around a point's cell contains every neighbor within eps.
class GridIndex {
public:
    GridIndex(std::span<const Point> points, double eps);

    double eps() const noexcept { return eps_; }

    /// Indices of all points within Euclidean distance <= eps of points[i],
    /// including i, in ascending index order.
    void query(std::size_t i, std::vector<std::uint32_t>& out) const;

private:
    std::span<const Point> points_;
    double eps_;
    double eps2_;
    double cell_;
    int min_x_ = 0;
    int min_y_ = 0;
    int ncx_ = 1;
    int ncy_ = 1;
    std::vector<std::uint32_t> offsets_;  // CSR over cells
    std::vector<std::uint32_t> members_;

    int cell_x(int x) const;
    int cell_y(int y) const;
};

PointSet mask_to_points(const BinaryMask& mask);

std::vector<std::uint32_t> region_query(const PointSet& set, const GridIndex& index, std::size_t i, double eps);

ClusterSet dbscan(const PointSet& set, const DbscanParams& params);
ClusterSet filter_clusters(const ClusterSet& cs, std::size_t min_area);
BinaryMask cluster_mask(const ClusterSet& cs, int width, int height);

/// Recomputes per-cluster summaries from points/labels.
std::vector<ClusterInfo> summarize_clusters(const PointSet& points, std::span<const int> labels);

/// Cluster a mask and drop clusters below min_area, honoring params.decimate.
ClusterSet cluster_mask_pixels(const BinaryMask& mask, const DbscanParams& params, std::size_t min_area);

void validate(const DbscanParams& params);

}  // namespace rustseg
