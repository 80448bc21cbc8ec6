#include "graspbench/objects.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

namespace graspbench {

namespace {

double clamp01(double t) { return std::clamp(t, 0.0, 1.0); }

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
    Vec3 ab = b - a;
    double len2 = ab.dot(ab);
    double t = len2 > 0.0 ? clamp01((p - a).dot(ab) / len2) : 0.0;
    return (p - (a + ab * t)).norm();
}

double point_segment_distance_2d(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double len2 = ab.dot(ab);
    double t = len2 > 0.0 ? clamp01((p - a).dot(ab) / len2) : 0.0;
    return (p - (a + ab * t)).norm();
}

/// Signed distance to a simple 2D polygon (negative inside).
double polygon_sdf_2d(const Vec2& p, const Vec2* verts, size_t n) {
    double d = std::numeric_limits<double>::infinity();
    bool inside = false;
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        d = std::min(d, point_segment_distance_2d(p, verts[j], verts[i]));
        if ((verts[i].y > p.y) != (verts[j].y > p.y)) {
            double x_int = verts[i].x + (p.y - verts[i].y) * (verts[j].x - verts[i].x) /
                                            (verts[j].y - verts[i].y);
            if (p.x < x_int) inside = !inside;
        }
    }
    return inside ? -d : d;
}

bool angle_in_range(double phi, double a0, double a1) {
    double span = a1 - a0;
    double rel = std::fmod(phi - a0, 2.0 * kPi);
    if (rel < 0.0) rel += 2.0 * kPi;
    return rel <= span;
}

Vec3 arc_point(const SweptArcSolid& s, double t) {
    return s.center + s.R * (std::cos(t) * s.e1 + std::sin(t) * s.e2);
}

}  // namespace

// ---------------------------------------------------------------------------
// Signed distances
// ---------------------------------------------------------------------------

static double sdf_box(const BoxSolid& s, const Vec3& p) {
    Vec3 q = p - s.center;
    Vec2 xy = Vec2{q.x, q.y}.rotated(-s.yaw);
    double dx = std::abs(xy.x) - s.half.x;
    double dy = std::abs(xy.y) - s.half.y;
    double dz = std::abs(q.z) - s.half.z;
    double ox = std::max(dx, 0.0), oy = std::max(dy, 0.0), oz = std::max(dz, 0.0);
    double outside = std::sqrt(ox * ox + oy * oy + oz * oz);
    double inside = std::min(std::max({dx, dy, dz}), 0.0);
    return outside + inside;
}

static double sdf_cylinder(const CylinderSolid& s, const Vec3& p) {
    // axisymmetric: exact distance via the meridian cross-section polygon
    double rho = (p.xy() - s.center).norm();
    Vec2 q{rho, p.z};
    std::array<Vec2, 4> poly = {Vec2{s.r_inner, s.z0}, Vec2{s.r_bottom, s.z0},
                                Vec2{s.r_top, s.z1}, Vec2{s.r_inner, s.z1}};
    return polygon_sdf_2d(q, poly.data(), poly.size());
}

static double sdf_sphere(const SphereSolid& s, const Vec3& p) {
    return (p - s.center).norm() - s.r;
}

static double sdf_capsule(const CapsuleSolid& s, const Vec3& p) {
    return point_segment_distance(p, s.a, s.b) - s.r;
}

static double sdf_swept_arc(const SweptArcSolid& s, const Vec3& p) {
    Vec3 q = p - s.center;
    double u = q.dot(s.e1);
    double v = q.dot(s.e2);
    double phi = std::atan2(v, u);
    double d;
    if (angle_in_range(phi, s.ang0, s.ang1)) {
        Vec3 n = s.e1.cross(s.e2);
        double w = q.dot(n);
        double in_plane = std::hypot(u, v) - s.R;
        d = std::hypot(in_plane, w);
    } else {
        d = std::min((p - arc_point(s, s.ang0)).norm(), (p - arc_point(s, s.ang1)).norm());
    }
    return d - s.tube_r;
}

double primitive_sdf(const SolidPrimitive& prim, const Vec3& p) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BoxSolid>) return sdf_box(s, p);
            else if constexpr (std::is_same_v<T, CylinderSolid>) return sdf_cylinder(s, p);
            else if constexpr (std::is_same_v<T, SphereSolid>) return sdf_sphere(s, p);
            else if constexpr (std::is_same_v<T, CapsuleSolid>) return sdf_capsule(s, p);
            else return sdf_swept_arc(s, p);
        },
        prim);
}

// ---------------------------------------------------------------------------
// Bounds, volume, centroid
// ---------------------------------------------------------------------------

void Aabb::expand(const Aabb& o) {
    lo.x = std::min(lo.x, o.lo.x);
    lo.y = std::min(lo.y, o.lo.y);
    lo.z = std::min(lo.z, o.lo.z);
    hi.x = std::max(hi.x, o.hi.x);
    hi.y = std::max(hi.y, o.hi.y);
    hi.z = std::max(hi.z, o.hi.z);
}

Aabb Aabb::inflated(double m) const {
    return {{lo.x - m, lo.y - m, lo.z - m}, {hi.x + m, hi.y + m, hi.z + m}};
}

Aabb primitive_bounds(const SolidPrimitive& prim) {
    return std::visit(
        [](const auto& s) -> Aabb {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BoxSolid>) {
                double c = std::abs(std::cos(s.yaw)), sn = std::abs(std::sin(s.yaw));
                double ex = c * s.half.x + sn * s.half.y;
                double ey = sn * s.half.x + c * s.half.y;
                return {{s.center.x - ex, s.center.y - ey, s.center.z - s.half.z},
                        {s.center.x + ex, s.center.y + ey, s.center.z + s.half.z}};
            } else if constexpr (std::is_same_v<T, CylinderSolid>) {
                double r = std::max(s.r_bottom, s.r_top);
                return {{s.center.x - r, s.center.y - r, s.z0},
                        {s.center.x + r, s.center.y + r, s.z1}};
            } else if constexpr (std::is_same_v<T, SphereSolid>) {
                return {{s.center.x - s.r, s.center.y - s.r, s.center.z - s.r},
                        {s.center.x + s.r, s.center.y + s.r, s.center.z + s.r}};
            } else if constexpr (std::is_same_v<T, CapsuleSolid>) {
                return {{std::min(s.a.x, s.b.x) - s.r, std::min(s.a.y, s.b.y) - s.r,
                         std::min(s.a.z, s.b.z) - s.r},
                        {std::max(s.a.x, s.b.x) + s.r, std::max(s.a.y, s.b.y) + s.r,
                         std::max(s.a.z, s.b.z) + s.r}};
            } else {
                // arc curve extremes along each axis, then inflate by the tube
                std::vector<double> params = {s.ang0, s.ang1};
                for (const Vec3& axis : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}) {
                    double t = std::atan2(s.e2.dot(axis), s.e1.dot(axis));
                    for (double cand : {t, t + kPi, t - kPi, t + 2 * kPi, t - 2 * kPi})
                        if (angle_in_range(cand, s.ang0, s.ang1)) params.push_back(cand);
                }
                Vec3 p0 = arc_point(s, params[0]);
                Aabb b{{p0.x, p0.y, p0.z}, {p0.x, p0.y, p0.z}};
                for (double t : params) {
                    Vec3 p = arc_point(s, t);
                    b.expand({p, p});
                }
                return b.inflated(s.tube_r);
            }
        },
        prim);
}

double primitive_volume(const SolidPrimitive& prim) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BoxSolid>) {
                return 8.0 * s.half.x * s.half.y * s.half.z;
            } else if constexpr (std::is_same_v<T, CylinderSolid>) {
                double h = s.z1 - s.z0;
                double frustum = kPi * h *
                                 (s.r_bottom * s.r_bottom + s.r_bottom * s.r_top + s.r_top * s.r_top) /
                                 3.0;
                return frustum - kPi * s.r_inner * s.r_inner * h;
            } else if constexpr (std::is_same_v<T, SphereSolid>) {
                return 4.0 / 3.0 * kPi * s.r * s.r * s.r;
            } else if constexpr (std::is_same_v<T, CapsuleSolid>) {
                double len = (s.b - s.a).norm();
                return kPi * s.r * s.r * len + 4.0 / 3.0 * kPi * s.r * s.r * s.r;
            } else {
                double arc_len = s.R * (s.ang1 - s.ang0);
                return kPi * s.tube_r * s.tube_r * arc_len +
                       4.0 / 3.0 * kPi * s.tube_r * s.tube_r * s.tube_r;
            }
        },
        prim);
}

Vec3 primitive_centroid(const SolidPrimitive& prim) {
    return std::visit(
        [](const auto& s) -> Vec3 {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BoxSolid>) {
                return s.center;
            } else if constexpr (std::is_same_v<T, CylinderSolid>) {
                // frustum minus the coaxial bore
                double h = s.z1 - s.z0;
                double m = (s.r_top - s.r_bottom) / (h > 0 ? h : 1.0);
                double a = s.r_bottom;
                double v_f = kPi * (a * a * h + a * m * h * h + m * m * h * h * h / 3.0);
                double mz_f = kPi * (a * a * h * h / 2.0 + 2.0 * a * m * h * h * h / 3.0 +
                                     m * m * h * h * h * h / 4.0);
                double v_i = kPi * s.r_inner * s.r_inner * h;
                double mz_i = v_i * h / 2.0;
                double v = v_f - v_i;
                double zbar = v > 0.0 ? (mz_f - mz_i) / v : h / 2.0;
                return {s.center.x, s.center.y, s.z0 + zbar};
            } else if constexpr (std::is_same_v<T, SphereSolid>) {
                return s.center;
            } else if constexpr (std::is_same_v<T, CapsuleSolid>) {
                // cylinder body plus the two hemispherical caps
                Vec3 mid = (s.a + s.b) * 0.5;
                Vec3 axis = (s.b - s.a).normalized();
                double len = (s.b - s.a).norm();
                double v_cyl = kPi * s.r * s.r * len;
                double v_hemi = 2.0 / 3.0 * kPi * s.r * s.r * s.r;
                Vec3 cap_a = s.a - axis * (3.0 * s.r / 8.0);
                Vec3 cap_b = s.b + axis * (3.0 * s.r / 8.0);
                Vec3 num = mid * v_cyl + cap_a * v_hemi + cap_b * v_hemi;
                return num * (1.0 / (v_cyl + 2.0 * v_hemi));
            } else {
                // centroid of the swept tube via the arc-curve centroid
                double span = s.ang1 - s.ang0;
                double mid = 0.5 * (s.ang0 + s.ang1);
                double radial = span > 1e-9 ? s.R * std::sin(span / 2.0) / (span / 2.0) : s.R;
                return s.center + radial * (std::cos(mid) * s.e1 + std::sin(mid) * s.e2);
            }
        },
        prim);
}

// ---------------------------------------------------------------------------
// Primitive grammar
// ---------------------------------------------------------------------------

SolidPrimitive parse_primitive(const std::string& text) {
    std::istringstream ss(text);
    std::string kind;
    ss >> kind;
    std::vector<double> v;
    double x;
    while (ss >> x) v.push_back(x);
    auto need = [&](size_t n) {
        if (v.size() != n)
            throw ConfigError("primitive '" + kind + "' expects " + std::to_string(n) +
                              " numbers, got " + std::to_string(v.size()));
    };
    double d2r = kPi / 180.0;
    if (kind == "box") {
        need(7);
        return BoxSolid{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, v[6] * d2r};
    }
    if (kind == "cyl") {
        need(7);
        return CylinderSolid{{v[0], v[1]}, v[2], v[3], v[4], v[5], v[6]};
    }
    if (kind == "sphere") {
        need(4);
        return SphereSolid{{v[0], v[1], v[2]}, v[3]};
    }
    if (kind == "capsule") {
        need(7);
        return CapsuleSolid{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, v[6]};
    }
    if (kind == "arc_xy") {
        need(7);
        return SweptArcSolid{{v[0], v[1], v[2]}, {1, 0, 0}, {0, 1, 0},
                             v[3],  v[4] * d2r, v[5] * d2r, v[6]};
    }
    if (kind == "arc_vert") {
        need(8);
        double heading = v[3] * d2r;
        return SweptArcSolid{{v[0], v[1], v[2]},
                             {std::cos(heading), std::sin(heading), 0},
                             {0, 0, 1},
                             v[4],
                             v[5] * d2r,
                             v[6] * d2r,
                             v[7]};
    }
    throw ConfigError("unknown primitive kind '" + kind + "'");
}

std::string format_primitive(const SolidPrimitive& prim) {
    std::ostringstream ss;
    ss.precision(10);
    double r2d = 180.0 / kPi;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BoxSolid>) {
                ss << "box " << s.center.x << " " << s.center.y << " " << s.center.z << " "
                   << s.half.x << " " << s.half.y << " " << s.half.z << " " << s.yaw * r2d;
            } else if constexpr (std::is_same_v<T, CylinderSolid>) {
                ss << "cyl " << s.center.x << " " << s.center.y << " " << s.z0 << " " << s.z1
                   << " " << s.r_bottom << " " << s.r_top << " " << s.r_inner;
            } else if constexpr (std::is_same_v<T, SphereSolid>) {
                ss << "sphere " << s.center.x << " " << s.center.y << " " << s.center.z << " "
                   << s.r;
            } else if constexpr (std::is_same_v<T, CapsuleSolid>) {
                ss << "capsule " << s.a.x << " " << s.a.y << " " << s.a.z << " " << s.b.x << " "
                   << s.b.y << " " << s.b.z << " " << s.r;
            } else {
                if (std::abs(s.e2.z - 1.0) < 1e-12) {
                    double heading = std::atan2(s.e1.y, s.e1.x);
                    ss << "arc_vert " << s.center.x << " " << s.center.y << " " << s.center.z
                       << " " << heading * r2d << " " << s.R << " " << s.ang0 * r2d << " "
                       << s.ang1 * r2d << " " << s.tube_r;
                } else {
                    ss << "arc_xy " << s.center.x << " " << s.center.y << " " << s.center.z
                       << " " << s.R << " " << s.ang0 * r2d << " " << s.ang1 * r2d << " "
                       << s.tube_r;
                }
            }
        },
        prim);
    return ss.str();
}

// ---------------------------------------------------------------------------
// ObjectModel
// ---------------------------------------------------------------------------

ObjectModel::ObjectModel(std::string name, std::vector<SolidPrimitive> primitives, double mass,
                         double friction_mu)
    : name_(std::move(name)),
      primitives_(std::move(primitives)),
      mass_(mass),
      friction_mu_(friction_mu) {
    if (primitives_.empty()) throw ConfigError("object '" + name_ + "' has no primitives");
    if (mass_ <= 0.0) throw ConfigError("object '" + name_ + "' mass must be > 0");
    if (friction_mu_ <= 0.0 || friction_mu_ > 2.0)
        throw ConfigError("object '" + name_ + "' friction_mu must be in (0, 2]");
    bounds_ = primitive_bounds(primitives_[0]);
    for (size_t i = 1; i < primitives_.size(); ++i) bounds_.expand(primitive_bounds(primitives_[i]));
    volume_ = 0.0;
    Vec3 weighted{0, 0, 0};
    for (const auto& prim : primitives_) {
        double v = primitive_volume(prim);
        weighted = weighted + primitive_centroid(prim) * v;
        volume_ += v;
    }
    centroid_ = volume_ > 0.0 ? weighted * (1.0 / volume_) : Vec3{0, 0, 0};
}

double ObjectModel::sdf(const Vec3& p) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& prim : primitives_) d = std::min(d, primitive_sdf(prim, p));
    return d;
}

namespace {

// Marching squares over the slice signed-distance field. Vertices are keyed
// by grid edge so loops stitch exactly.
struct EdgeKey {
    int i, j, dir;  // dir 0: edge from (i,j) to (i+1,j); dir 1: to (i,j+1)
    bool operator<(const EdgeKey& o) const {
        return std::tie(i, j, dir) < std::tie(o.i, o.j, o.dir);
    }
    bool operator==(const EdgeKey& o) const { return i == o.i && j == o.j && dir == o.dir; }
};

}  // namespace

Contour ObjectModel::cross_section(double z, double resolution) const {
    Contour empty;
    if (z < bounds_.lo.z - 1e-12 || z > bounds_.hi.z + 1e-12) return empty;

    double margin = 3.0 * resolution;
    double x0 = bounds_.lo.x - margin, y0 = bounds_.lo.y - margin;
    int nx = static_cast<int>(std::ceil((bounds_.hi.x + margin - x0) / resolution)) + 1;
    int ny = static_cast<int>(std::ceil((bounds_.hi.y + margin - y0) / resolution)) + 1;
    if (nx < 2 || ny < 2 || static_cast<long>(nx) * ny > 16'000'000) return empty;

    std::vector<double> f(static_cast<size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double v = sdf({x0 + i * resolution, y0 + j * resolution, z});
            if (v == 0.0) v = -1e-15;
            f[static_cast<size_t>(j) * nx + i] = v;
        }
    auto val = [&](int i, int j) { return f[static_cast<size_t>(j) * nx + i]; };
    auto interp = [&](int i, int j, int dir) -> Vec2 {
        double va = val(i, j);
        double vb = dir == 0 ? val(i + 1, j) : val(i, j + 1);
        double t = va / (va - vb);
        if (dir == 0) return {x0 + (i + t) * resolution, y0 + j * resolution};
        return {x0 + i * resolution, y0 + (j + t) * resolution};
    };

    // collect crossing segments per cell
    std::map<EdgeKey, std::vector<EdgeKey>> adjacency;
    auto link = [&](const EdgeKey& a, const EdgeKey& b) {
        adjacency[a].push_back(b);
        adjacency[b].push_back(a);
    };
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            int code = 0;
            if (val(i, j) < 0) code |= 1;
            if (val(i + 1, j) < 0) code |= 2;
            if (val(i + 1, j + 1) < 0) code |= 4;
            if (val(i, j + 1) < 0) code |= 8;
            if (code == 0 || code == 15) continue;
            EdgeKey bottom{i, j, 0}, right{i + 1, j, 1}, top{i, j + 1, 0}, left{i, j, 1};
            switch (code) {
                case 1: case 14: link(bottom, left); break;
                case 2: case 13: link(bottom, right); break;
                case 3: case 12: link(left, right); break;
                case 4: case 11: link(right, top); break;
                case 6: case 9: link(bottom, top); break;
                case 7: case 8: link(left, top); break;
                case 5: case 10: {
                    // ambiguous saddle: disambiguate with the cell center
                    double center = sdf({x0 + (i + 0.5) * resolution,
                                         y0 + (j + 0.5) * resolution, z});
                    bool center_in = center < 0.0;
                    bool diag_case5 = (code == 5);
                    if (diag_case5 == center_in) {
                        link(bottom, right);
                        link(left, top);
                    } else {
                        link(bottom, left);
                        link(right, top);
                    }
                    break;
                }
                default: break;
            }
        }
    }
    if (adjacency.empty()) return empty;

    // walk closed loops
    std::map<EdgeKey, bool> visited;
    Contour best;
    double best_area = 0.0;
    for (const auto& [start, nbrs] : adjacency) {
        if (visited[start]) continue;
        Contour loop;
        EdgeKey cur = start;
        EdgeKey prev = start;
        bool first = true;
        while (true) {
            visited[cur] = true;
            loop.vertices.push_back(interp(cur.i, cur.j, cur.dir));
            const auto& adj = adjacency[cur];
            if (adj.size() < 2) break;  // dangling chain, cannot close
            EdgeKey next = first ? adj[0] : (adj[0] == prev ? adj[1] : adj[0]);
            prev = cur;
            cur = next;
            first = false;
            if (cur == start) break;
            if (loop.vertices.size() > static_cast<size_t>(nx) * ny) break;  // safety
        }
        double a = std::abs(signed_area(loop));
        if (a > best_area) {
            best_area = a;
            best = std::move(loop);
        }
    }
    if (best.vertices.size() < 3) return empty;
    make_ccw(best);
    return best;
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

namespace {
ObjectModel make_clamp(const std::string& name, double s, double mass) {
    // flat C-shaped outline: a spine with two jaws leaving an open slot
    std::vector<SolidPrimitive> prims = {
        BoxSolid{{0.0, -0.030 * s, 0.010 * s}, {0.045 * s, 0.015 * s, 0.010 * s}, 0.0},
        BoxSolid{{-0.0325 * s, 0.005 * s, 0.010 * s}, {0.0125 * s, 0.022 * s, 0.010 * s}, 0.0},
        BoxSolid{{0.0325 * s, 0.005 * s, 0.010 * s}, {0.0125 * s, 0.022 * s, 0.010 * s}, 0.0},
    };
    return ObjectModel(name, std::move(prims), mass, 0.45);
}
}  // namespace

std::map<std::string, ObjectModel> default_object_catalog() {
    std::map<std::string, ObjectModel> cat;
    auto add = [&](ObjectModel m) { cat.emplace(m.name(), std::move(m)); };

    add(ObjectModel("ball", {SphereSolid{{0, 0, 0.0335}, 0.0335}}, 0.058, 0.6));

    add(ObjectModel("screwdriver",
                    {CapsuleSolid{{-0.085, 0, 0.016}, {0.015, 0, 0.016}, 0.016},
                     CapsuleSolid{{0.015, 0, 0.006}, {0.100, 0, 0.006}, 0.006}},
                    0.098, 0.5));

    add(make_clamp("clamp_medium", 0.7, 0.059));
    add(make_clamp("clamp_large", 1.0, 0.125));
    add(make_clamp("clamp_xl", 1.3, 0.202));

    add(ObjectModel("banana",
                    {SweptArcSolid{{0, 0, 0.018}, {1, 0, 0}, {0, 1, 0}, 0.060,
                                   20.0 * kPi / 180.0, 160.0 * kPi / 180.0, 0.018}},
                    0.066, 0.45));

    add(ObjectModel("strawberry",
                    {CylinderSolid{{0, 0}, 0.0, 0.030, 0.025, 0.014, 0.0},
                     SphereSolid{{0, 0, 0.030}, 0.014}},
                    0.018, 0.3));

    add(ObjectModel("pear",
                    {SphereSolid{{0, 0, 0.032}, 0.032}, SphereSolid{{0, 0, 0.058}, 0.023}},
                    0.049, 0.3));

    add(ObjectModel("mug",
                    {CylinderSolid{{0, 0}, 0.0, 0.078, 0.039, 0.039, 0.033},
                     CylinderSolid{{0, 0}, 0.0, 0.008, 0.039, 0.039, 0.0},
                     SweptArcSolid{{0.032, 0, 0.039}, {1, 0, 0}, {0, 0, 1}, 0.026,
                                   -75.0 * kPi / 180.0, 75.0 * kPi / 180.0, 0.007}},
                    0.118, 0.5));

    add(ObjectModel("mustard",
                    {BoxSolid{{0, 0, 0.075}, {0.048, 0.029, 0.075}, 0.0},
                     CylinderSolid{{0, 0}, 0.150, 0.175, 0.0165, 0.0165, 0.0}},
                    0.603, 0.45));

    return cat;
}

}  // namespace graspbench
