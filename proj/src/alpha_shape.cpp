#include "graspbench/alpha_shape.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace graspbench {

Contour convex_hull(const std::vector<Vec2>& points) {
    std::vector<Vec2> pts = points;
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    size_t n = pts.size();
    if (n < 3) throw Degenerate("convex hull needs >= 3 distinct points");

    std::vector<Vec2> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {
        while (k >= lower && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) throw Degenerate("input points are collinear");
    Contour c{std::move(hull)};
    make_ccw(c);
    return c;
}

namespace {

struct BinGrid {
    double cell;
    std::map<std::pair<int64_t, int64_t>, std::vector<int>> bins;

    BinGrid(const std::vector<Vec2>& pts, double cell_size) : cell(cell_size) {
        for (size_t i = 0; i < pts.size(); ++i)
            bins[key(pts[i])].push_back(static_cast<int>(i));
    }
    std::pair<int64_t, int64_t> key(const Vec2& p) const {
        return {static_cast<int64_t>(std::floor(p.x / cell)),
                static_cast<int64_t>(std::floor(p.y / cell))};
    }
    template <typename Fn>
    void for_each_near(const Vec2& p, double radius, Fn&& fn) const {
        auto [cx, cy] = key(p);
        auto reach = static_cast<int64_t>(std::ceil(radius / cell)) + 1;
        for (int64_t by = cy - reach; by <= cy + reach; ++by)
            for (int64_t bx = cx - reach; bx <= cx + reach; ++bx) {
                auto it = bins.find({bx, by});
                if (it == bins.end()) continue;
                for (int idx : it->second) fn(idx);
            }
    }
};

/// One alpha-shape attempt; empty result means this alpha fragments the set.
Contour try_alpha(const std::vector<Vec2>& pts, double alpha) {
    const double alpha2 = alpha * alpha;
    BinGrid grid(pts, std::max(alpha, 1e-9));

    // boundary edge (i, j): some alpha-disk through both has no point inside
    std::vector<std::pair<int, int>> edges;
    for (size_t i = 0; i < pts.size(); ++i) {
        grid.for_each_near(pts[i], 2.0 * alpha, [&](int j) {
            if (j <= static_cast<int>(i)) return;
            Vec2 d = pts[j] - pts[i];
            double dist2 = d.squared_norm();
            if (dist2 > 4.0 * alpha2 || dist2 <= 0.0) return;
            double dist = std::sqrt(dist2);
            double h = std::sqrt(std::max(alpha2 - 0.25 * dist2, 0.0));
            Vec2 mid = (pts[i] + pts[j]) * 0.5;
            Vec2 perp = Vec2{-d.y, d.x} * (1.0 / dist);
            for (int side = 0; side < 2; ++side) {
                Vec2 center = side == 0 ? mid + perp * h : mid - perp * h;
                bool empty = true;
                grid.for_each_near(center, alpha, [&](int k) {
                    if (k == static_cast<int>(i) || k == j || !empty) return;
                    if ((pts[static_cast<size_t>(k)] - center).squared_norm() <
                        alpha2 * (1.0 - 1e-12))
                        empty = false;
                });
                if (empty) {
                    edges.emplace_back(static_cast<int>(i), j);
                    return;
                }
            }
        });
    }
    if (edges.empty()) return {};

    // every boundary vertex must have exactly two boundary edges
    std::map<int, std::vector<int>> adjacency;
    for (auto& [a, b] : edges) {
        adjacency[a].push_back(b);
        adjacency[b].push_back(a);
    }
    for (auto& [v, nbrs] : adjacency) {
        std::sort(nbrs.begin(), nbrs.end());
        if (nbrs.size() != 2) return {};
    }

    // walk closed loops, keep the one enclosing the largest area
    std::set<int> visited;
    Contour best;
    double best_area = -1.0;
    for (const auto& [start, nbrs] : adjacency) {
        if (visited.count(start)) continue;
        Contour loop;
        int prev = -1, cur = start;
        while (true) {
            visited.insert(cur);
            loop.vertices.push_back(pts[static_cast<size_t>(cur)]);
            const auto& adj = adjacency[cur];
            int next = adj[0] == prev ? adj[1] : adj[0];
            prev = cur;
            cur = next;
            if (cur == start) break;
            if (loop.vertices.size() > pts.size()) return {};
        }
        if (loop.vertices.size() < 3) continue;
        double area = std::abs(signed_area(loop));
        if (area > best_area) {
            best_area = area;
            best = std::move(loop);
        }
    }
    if (best.vertices.size() < 3) return {};

    make_ccw(best);
    // outer boundary must enclose the whole point set
    for (const Vec2& p : pts)
        if (!point_in_polygon(best, p, 1e-9)) return {};
    return best;
}

}  // namespace

Contour concave_hull(const std::vector<Vec2>& points, double alpha) {
    if (alpha <= 0.0) throw ConfigError("alpha must be > 0");
    std::vector<Vec2> pts = points;
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() < 3) throw Degenerate("concave hull needs >= 3 distinct points");

    bool collinear = true;
    for (size_t i = 2; i < pts.size() && collinear; ++i)
        if (std::abs((pts[1] - pts[0]).cross(pts[i] - pts[0])) > 1e-15) collinear = false;
    if (collinear) throw Degenerate("input points are collinear");

    double dx = 0.0, dy = 0.0;
    {
        double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
        for (const Vec2& p : pts) {
            x0 = std::min(x0, p.x); x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y); y1 = std::max(y1, p.y);
        }
        dx = x1 - x0;
        dy = y1 - y0;
    }
    double diameter = std::hypot(dx, dy);

    for (double a = alpha; a < diameter; a *= 1.6) {
        Contour result = try_alpha(pts, a);
        if (!result.empty()) return result;
    }
    return convex_hull(pts);
}

}  // namespace graspbench
