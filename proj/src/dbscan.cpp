#include "rustseg/dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rustseg/error.hpp"

namespace rustseg {

namespace {
constexpr int kUnvisited = -2;
}

void validate(const DbscanParams& params) {
    if (!(params.eps > 0.0) || !std::isfinite(params.eps)) throw Error(ErrorCode::InvalidArgument, "dbscan eps must be > 0");
    if (params.min_pts < 1) throw Error(ErrorCode::InvalidArgument, "dbscan min_pts must be >= 1");
}

std::size_t ClusterSet::retained_count() const {
    return static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](int l) { return l != kNoise; }));
}

GridIndex::GridIndex(std::span<const Point> points, double eps)
    : points_(points), eps_(eps), eps2_(eps * eps), cell_(eps) {
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid eps must be > 0");
    if (points.empty()) return;

    int max_x = points[0].x, max_y = points[0].y;
    min_x_ = points[0].x;
    min_y_ = points[0].y;
    for (const Point& p : points) {
        min_x_ = std::min(min_x_, p.x);
        min_y_ = std::min(min_y_, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }

    // Cells wider than eps stay exact; widen them when eps is tiny relative
    // to the point spread so the cell table stays O(n).
    const double span_x = max_x - min_x_ + 1.0;
    const double span_y = max_y - min_y_ + 1.0;
    const double max_cells = 4.0 * static_cast<double>(points.size()) + 16.0;
    while ((std::floor(span_x / cell_) + 1.0) * (std::floor(span_y / cell_) + 1.0) > max_cells) cell_ *= 2.0;

    ncx_ = cell_x(max_x) + 1;
    ncy_ = cell_y(max_y) + 1;
    const std::size_t ncells = static_cast<std::size_t>(ncx_) * ncy_;

    offsets_.assign(ncells + 1, 0);
    for (const Point& p : points) ++offsets_[static_cast<std::size_t>(cell_y(p.y)) * ncx_ + cell_x(p.x) + 1];
    for (std::size_t c = 0; c < ncells; ++c) offsets_[c + 1] += offsets_[c];
    members_.resize(points.size());
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::uint32_t i = 0; i < points.size(); ++i) {
        const Point& p = points[i];
        members_[fill[static_cast<std::size_t>(cell_y(p.y)) * ncx_ + cell_x(p.x)]++] = i;
    }
}

int GridIndex::cell_x(int x) const { return static_cast<int>(std::floor((x - min_x_) / cell_)); }
int GridIndex::cell_y(int y) const { return static_cast<int>(std::floor((y - min_y_) / cell_)); }

void GridIndex::query(std::size_t i, std::vector<std::uint32_t>& out) const {
    out.clear();
    const Point p = points_[i];
    const int cx = cell_x(p.x);
    const int cy = cell_y(p.y);
    for (int y = std::max(0, cy - 1); y <= std::min(ncy_ - 1, cy + 1); ++y) {
        for (int x = std::max(0, cx - 1); x <= std::min(ncx_ - 1, cx + 1); ++x) {
            const std::size_t c = static_cast<std::size_t>(y) * ncx_ + x;
            for (std::uint32_t k = offsets_[c]; k < offsets_[c + 1]; ++k) {
                const Point q = points_[members_[k]];
                const double dx = q.x - p.x;
                const double dy = q.y - p.y;
                if (dx * dx + dy * dy <= eps2_) out.push_back(members_[k]);
            }
        }
    }
    std::sort(out.begin(), out.end());
}

PointSet mask_to_points(const BinaryMask& mask) {
    PointSet pts;
    pts.reserve(mask.popcount());
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (mask(x, y)) pts.push_back({x, y});
    return pts;
}

std::vector<std::uint32_t> region_query(const PointSet& set, const GridIndex& index, std::size_t i, double eps) {
    if (i >= set.size()) throw Error(ErrorCode::InvalidArgument, "region_query index out of range");
    if (eps != index.eps()) throw Error(ErrorCode::InvalidArgument, "region_query eps differs from the index cell size");
    std::vector<std::uint32_t> out;
    index.query(i, out);
    return out;
}

std::vector<ClusterInfo> summarize_clusters(const PointSet& points, std::span<const int> labels) {
    int n_clusters = 0;
    for (int l : labels) n_clusters = std::max(n_clusters, l + 1);
    std::vector<ClusterInfo> info(n_clusters);
    std::vector<double> sx(n_clusters, 0.0), sy(n_clusters, 0.0);
    for (int c = 0; c < n_clusters; ++c) {
        info[c].id = c;
        info[c].bbox = {std::numeric_limits<int>::max(), std::numeric_limits<int>::max(),
                        std::numeric_limits<int>::min(), std::numeric_limits<int>::min()};
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        const int l = labels[i];
        if (l < 0) continue;
        ClusterInfo& c = info[l];
        const Point p = points[i];
        ++c.pixel_count;
        c.bbox.x_min = std::min(c.bbox.x_min, p.x);
        c.bbox.y_min = std::min(c.bbox.y_min, p.y);
        c.bbox.x_max = std::max(c.bbox.x_max, p.x);
        c.bbox.y_max = std::max(c.bbox.y_max, p.y);
        sx[l] += p.x;
        sy[l] += p.y;
    }
    for (int c = 0; c < n_clusters; ++c) {
        if (info[c].pixel_count == 0) continue;
        info[c].centroid_x = sx[c] / static_cast<double>(info[c].pixel_count);
        info[c].centroid_y = sy[c] / static_cast<double>(info[c].pixel_count);
    }
    return info;
}

ClusterSet dbscan(const PointSet& set, const DbscanParams& params) {
    validate(params);
    ClusterSet cs;
    cs.points = set;
    cs.labels.assign(set.size(), kUnvisited);
    cs.core.assign(set.size(), 0);
    if (set.empty()) return cs;

    const GridIndex index(cs.points, params.eps);
    const auto min_pts = static_cast<std::size_t>(params.min_pts);
    std::vector<std::uint32_t> neighbors;
    std::vector<std::uint32_t> queue;
    int next = 0;

    for (std::size_t i = 0; i < set.size(); ++i) {
        if (cs.labels[i] != kUnvisited) continue;
        index.query(i, neighbors);
        if (neighbors.size() < min_pts) {
            cs.labels[i] = kNoise;
            continue;
        }
        const int c = next++;
        cs.labels[i] = c;
        cs.core[i] = 1;
        queue.clear();
        // Claim neighbors on push so no point is queued twice. Noise points
        // were already found to be non-core: they become border points.
        auto absorb = [&](const std::vector<std::uint32_t>& nbrs) {
            for (std::uint32_t q : nbrs) {
                if (cs.labels[q] == kNoise) {
                    cs.labels[q] = c;
                } else if (cs.labels[q] == kUnvisited) {
                    cs.labels[q] = c;
                    queue.push_back(q);
                }
            }
        };
        absorb(neighbors);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::uint32_t q = queue[head];
            index.query(q, neighbors);
            if (neighbors.size() >= min_pts) {
                cs.core[q] = 1;
                absorb(neighbors);
            }
        }
    }

    cs.clusters = summarize_clusters(cs.points, cs.labels);
    return cs;
}

ClusterSet filter_clusters(const ClusterSet& cs, std::size_t min_area) {
    ClusterSet out;
    out.points = cs.points;
    out.core = cs.core;
    std::vector<int> remap(cs.clusters.size(), kNoise);
    int next = 0;
    for (const ClusterInfo& c : cs.clusters)
        if (c.pixel_count >= min_area) remap[c.id] = next++;
    out.labels.resize(cs.labels.size());
    for (std::size_t i = 0; i < cs.labels.size(); ++i)
        out.labels[i] = cs.labels[i] == kNoise ? kNoise : remap[cs.labels[i]];
    out.clusters = summarize_clusters(out.points, out.labels);
    return out;
}

BinaryMask cluster_mask(const ClusterSet& cs, int width, int height) {
    BinaryMask mask(width, height);
    for (std::size_t i = 0; i < cs.points.size(); ++i) {
        const Point p = cs.points[i];
        if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height)
            throw Error(ErrorCode::Dimension, "cluster point outside mask bounds");
        if (cs.labels[i] != kNoise) mask.set(p.x, p.y, true);
    }
    return mask;
}

namespace {

BinaryMask pool2x(const BinaryMask& mask) {
    BinaryMask out((mask.width() + 1) / 2, (mask.height() + 1) / 2);
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (mask(x, y)) out.set(x / 2, y / 2, true);
    return out;
}

}  // namespace

ClusterSet cluster_mask_pixels(const BinaryMask& mask, const DbscanParams& params, std::size_t min_area) {
    validate(params);
    if (!params.decimate || mask.popcount() <= kDecimateAbove)
        return filter_clusters(dbscan(mask_to_points(mask), params), min_area);

    // Cluster the pooled mask, judge areas at 4x, then project labels back to
    // the original pixels so counts stay exact.
    const BinaryMask pooled = pool2x(mask);
    const ClusterSet coarse = filter_clusters(dbscan(mask_to_points(pooled), params), (min_area + 3) / 4);
    std::vector<int> block_label(pooled.size(), kNoise);
    std::vector<std::uint8_t> block_core(pooled.size(), 0);
    for (std::size_t i = 0; i < coarse.points.size(); ++i) {
        const std::size_t b = static_cast<std::size_t>(coarse.points[i].y) * pooled.width() + coarse.points[i].x;
        block_label[b] = coarse.labels[i];
        block_core[b] = coarse.core[i];
    }

    ClusterSet out;
    out.points = mask_to_points(mask);
    out.labels.resize(out.points.size());
    out.core.resize(out.points.size());
    for (std::size_t i = 0; i < out.points.size(); ++i) {
        const std::size_t b =
            static_cast<std::size_t>(out.points[i].y / 2) * pooled.width() + out.points[i].x / 2;
        out.labels[i] = block_label[b];
        out.core[i] = block_core[b];
    }
    out.clusters = summarize_clusters(out.points, out.labels);
    return out;
}

}  // namespace rustseg
