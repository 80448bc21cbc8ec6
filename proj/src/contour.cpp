#include "graspbench/contour.hpp"

#include <algorithm>
#include <cmath>

namespace graspbench {

double signed_area(const Contour& c) {
    const auto& v = c.vertices;
    double area = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % v.size()];
        area += a.x * b.y - b.x * a.y;
    }
    return 0.5 * area;
}

Vec2 polygon_centroid(const Contour& c) {
    const auto& v = c.vertices;
    double a6 = 0.0, cx = 0.0, cy = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % v.size()];
        double w = p.x * q.y - q.x * p.y;
        a6 += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    if (std::abs(a6) < 1e-30) {
        // degenerate polygon: fall back to vertex mean
        Vec2 m{0, 0};
        for (const Vec2& p : v) m = m + p;
        return v.empty() ? m : m / static_cast<double>(v.size());
    }
    return {cx / (3.0 * a6), cy / (3.0 * a6)};
}

double perimeter(const Contour& c) {
    const auto& v = c.vertices;
    double len = 0.0;
    for (size_t i = 0; i < v.size(); ++i) len += (v[(i + 1) % v.size()] - v[i]).norm();
    return len;
}

bool point_in_polygon(const Contour& c, const Vec2& p, double eps) {
    const auto& v = c.vertices;
    bool inside = false;
    for (size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        const Vec2& a = v[j];
        const Vec2& b = v[i];
        // on-edge check
        Vec2 ab = b - a;
        double len2 = ab.squared_norm();
        if (len2 > 0.0) {
            double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
            if ((p - (a + ab * t)).squared_norm() <= eps * eps) return true;
        }
        if ((b.y > p.y) != (a.y > p.y)) {
            double x_int = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
            if (p.x < x_int) inside = !inside;
        }
    }
    return inside;
}

namespace {
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        double v = (q - p).cross(r - p);
        if (v > 1e-15) return 1;
        if (v < -1e-15) return -1;
        return 0;
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4;
}
}  // namespace

bool is_simple_polygon(const Contour& c) {
    const auto& v = c.vertices;
    size_t n = v.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            // skip adjacent edges (they share a vertex)
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
        }
    }
    return true;
}

void make_ccw(Contour& c) {
    if (signed_area(c) < 0.0) std::reverse(c.vertices.begin(), c.vertices.end());
}

std::vector<BoundarySample> sample_boundary_uniform(const Contour& c, int n) {
    std::vector<BoundarySample> out;
    const auto& v = c.vertices;
    if (v.size() < 3 || n <= 0) return out;

    double total = perimeter(c);
    if (total <= 0.0) return out;
    out.reserve(static_cast<size_t>(n));

    double step = total / n;
    double target = 0.0;
    double walked = 0.0;
    size_t edge = 0;
    Vec2 a = v[0];
    Vec2 b = v[1 % v.size()];
    double edge_len = (b - a).norm();

    for (int k = 0; k < n; ++k, target = k * step) {
        while (walked + edge_len < target && edge + 1 < v.size() + 1) {
            walked += edge_len;
            ++edge;
            a = v[edge % v.size()];
            b = v[(edge + 1) % v.size()];
            edge_len = (b - a).norm();
        }
        double t = edge_len > 0.0 ? (target - walked) / edge_len : 0.0;
        Vec2 p = a + (b - a) * t;
        Vec2 tangent = (b - a).normalized();
        // CCW contour: interior on the left, outward normal is the right-hand
        // rotation of the tangent
        Vec2 normal{tangent.y, -tangent.x};
        out.push_back({p, normal});
    }
    return out;
}

}  // namespace graspbench
