#include "graspbench/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "graspbench/rng.hpp"

namespace graspbench {

// ---------------------------------------------------------------------------
// Depth completion
// ---------------------------------------------------------------------------

namespace {

// Offsets sorted by (squared distance, dy, dx) so the nearest-site tie rule
// (smallest row, then column) falls out of scan order.
struct OffsetTable {
    std::vector<std::tuple<int, int, int>> offsets;  // (d2, dy, dx)
    int radius = 0;

    void grow(int target_radius) {
        if (target_radius <= radius) return;
        offsets.clear();
        offsets.reserve(static_cast<size_t>(2 * target_radius + 1) *
                        (2 * target_radius + 1));
        for (int dy = -target_radius; dy <= target_radius; ++dy)
            for (int dx = -target_radius; dx <= target_radius; ++dx)
                offsets.emplace_back(dx * dx + dy * dy, dy, dx);
        std::sort(offsets.begin(), offsets.end());
        radius = target_radius;
    }
};

}  // namespace

DepthImage complete_depth(const DepthImage& depth) {
    const int w = depth.width, h = depth.height;
    size_t valid = depth.valid_count();
    if (valid == 0) throw AllInvalid("depth image has no valid pixel");
    DepthImage out = depth;
    if (valid == depth.size()) return out;

    OffsetTable table;
    table.grow(8);

    std::vector<std::pair<int, int>> valid_list;  // (y, x), filled lazily

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (DepthImage::is_valid(depth.at(x, y))) continue;

            bool found = false;
            // expanding search over the sorted offset table; only offsets
            // with d2 <= radius^2 are conclusive (the square may miss closer
            // sites outside it), so grow and retry past that ring
            while (!found) {
                const long r2 = static_cast<long>(table.radius) * table.radius;
                for (const auto& [d2, dy, dx] : table.offsets) {
                    if (d2 > r2) break;
                    int yy = y + dy, xx = x + dx;
                    if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
                    if (!DepthImage::is_valid(depth.at(xx, yy))) continue;
                    out.at(x, y) = depth.at(xx, yy);
                    found = true;
                    break;  // sorted by (d2, dy, dx): first hit is the answer
                }
                if (found || table.radius >= 64 || table.radius >= std::max(w, h)) break;
                table.grow(table.radius * 2);
            }
            if (found) continue;

            // sparse image: exhaustive scan with the same tie rule
            if (valid_list.empty()) {
                valid_list.reserve(valid);
                for (int yy = 0; yy < h; ++yy)
                    for (int xx = 0; xx < w; ++xx)
                        if (DepthImage::is_valid(depth.at(xx, yy))) valid_list.emplace_back(yy, xx);
            }
            long best = -1;
            for (const auto& [yy, xx] : valid_list) {
                long d2 = static_cast<long>(yy - y) * (yy - y) +
                          static_cast<long>(xx - x) * (xx - x);
                if (best < 0 || d2 < best) {
                    best = d2;
                    out.at(x, y) = depth.at(xx, yy);
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Plane removal
// ---------------------------------------------------------------------------

namespace {

/// Smallest eigenvector of a symmetric 3x3 matrix by cyclic Jacobi sweeps.
Vec3 smallest_eigenvector(double a00, double a01, double a02, double a11, double a12,
                          double a22) {
    double A[3][3] = {{a00, a01, a02}, {a01, a11, a12}, {a02, a12, a22}};
    double V[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int sweep = 0; sweep < 24; ++sweep) {
        double off = std::abs(A[0][1]) + std::abs(A[0][2]) + std::abs(A[1][2]);
        if (off < 1e-15) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(A[p][q]) < 1e-18) continue;
                double theta = 0.5 * std::atan2(2.0 * A[p][q], A[q][q] - A[p][p]);
                double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < 3; ++k) {
                    double akp = A[k][p], akq = A[k][q];
                    A[k][p] = c * akp - s * akq;
                    A[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    double apk = A[p][k], aqk = A[q][k];
                    A[p][k] = c * apk - s * aqk;
                    A[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    double vkp = V[k][p], vkq = V[k][q];
                    V[k][p] = c * vkp - s * vkq;
                    V[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (A[i][i] < A[best][best]) best = i;
    return Vec3{V[0][best], V[1][best], V[2][best]}.normalized();
}

}  // namespace

PlaneRemovalResult remove_plane(const PointCloud& cloud, double tol, uint64_t seed,
                                int iterations) {
    if (cloud.empty()) throw EmptyCloud("remove_plane needs a non-empty cloud");
    const auto& pts = cloud.points;
    const size_t n = pts.size();

    Rng rng(seed);
    size_t best_inliers = 0;
    Vec3 best_normal{0, 0, 1};
    double best_offset = 0.0;

    for (int it = 0; it < iterations; ++it) {
        size_t i0 = rng.next_below(n), i1 = rng.next_below(n), i2 = rng.next_below(n);
        if (i0 == i1 || i0 == i2 || i1 == i2) continue;
        Vec3 normal = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]);
        double len = normal.norm();
        if (len < 1e-12) continue;
        normal = normal * (1.0 / len);
        double offset = normal.dot(pts[i0]);
        size_t inliers = 0;
        for (const Vec3& p : pts)
            if (std::abs(normal.dot(p) - offset) <= tol) ++inliers;
        if (inliers > best_inliers) {
            best_inliers = inliers;
            best_normal = normal;
            best_offset = offset;
        }
    }

    // a 3-point sample always supports itself, so demand consensus beyond it
    if (best_inliers * 10 < n * 3 || best_inliers <= 3)
        throw NoPlane("best plane supports " + std::to_string(best_inliers) + " of " +
                      std::to_string(n) + " points");

    // least-squares refit on the consensus set
    Vec3 mean{0, 0, 0};
    size_t m = 0;
    for (const Vec3& p : pts)
        if (std::abs(best_normal.dot(p) - best_offset) <= tol) {
            mean = mean + p;
            ++m;
        }
    mean = mean * (1.0 / static_cast<double>(m));
    double a00 = 0, a01 = 0, a02 = 0, a11 = 0, a12 = 0, a22 = 0;
    for (const Vec3& p : pts) {
        if (std::abs(best_normal.dot(p) - best_offset) > tol) continue;
        Vec3 q = p - mean;
        a00 += q.x * q.x; a01 += q.x * q.y; a02 += q.x * q.z;
        a11 += q.y * q.y; a12 += q.y * q.z; a22 += q.z * q.z;
    }
    Vec3 normal = smallest_eigenvector(a00, a01, a02, a11, a12, a22);
    if (normal.z < 0.0) normal = normal * -1.0;
    double offset = normal.dot(mean);

    PlaneRemovalResult result;
    result.plane = {normal, offset};
    result.inlier_count = 0;
    for (const Vec3& p : pts) {
        if (result.plane.distance(p) <= tol)
            ++result.inlier_count;
        else
            result.remaining.points.push_back(p);
    }
    return result;
}

PointCloud roi_filter(const PointCloud& cloud, const RoiBox& roi) {
    if (!roi.valid()) throw ConfigError("invalid ROI box");
    PointCloud out;
    out.points.reserve(cloud.size());
    for (const Vec3& p : cloud.points)
        if (roi.contains(p.x, p.y)) out.points.push_back(p);
    return out;
}

PointCloud downsample(const PointCloud& cloud, double voxel) {
    if (voxel <= 0.0) throw ConfigError("voxel size must be > 0");
    struct Cell {
        Vec3 sum{0, 0, 0};
        size_t count = 0;
    };
    std::map<std::tuple<int64_t, int64_t, int64_t>, Cell> grid;
    for (const Vec3& p : cloud.points) {
        auto key = std::make_tuple(static_cast<int64_t>(std::floor(p.x / voxel)),
                                   static_cast<int64_t>(std::floor(p.y / voxel)),
                                   static_cast<int64_t>(std::floor(p.z / voxel)));
        Cell& c = grid[key];
        c.sum = c.sum + p;
        c.count += 1;
    }
    PointCloud out;
    out.points.reserve(grid.size());
    for (const auto& [key, cell] : grid)
        out.points.push_back(cell.sum * (1.0 / static_cast<double>(cell.count)));
    return out;
}

}  // namespace graspbench
