#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "graspbench/alpha_shape.hpp"
#include "graspbench/rng.hpp"
#include "graspbench/topsurface.hpp"

using namespace graspbench;

namespace {

Contour circle_contour(double radius, int n, Vec2 center = {0, 0}) {
    Contour c;
    for (int i = 0; i < n; ++i) {
        double t = 2.0 * kPi * i / n;
        c.vertices.push_back({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
    }
    return c;
}

Contour square_contour(double side, Vec2 center = {0, 0}) {
    double h = side / 2;
    Contour c;
    c.vertices = {{center.x - h, center.y - h},
                  {center.x + h, center.y - h},
                  {center.x + h, center.y + h},
                  {center.x - h, center.y + h}};
    return c;
}

double distance_to_contour(const Contour& c, const Vec2& p) {
    double best = 1e300;
    for (size_t i = 0; i < c.size(); ++i) {
        Vec2 a = c.vertices[i];
        Vec2 b = c.vertices[(i + 1) % c.size()];
        Vec2 ab = b - a;
        double t = std::clamp((p - a).dot(ab) / ab.squared_norm(), 0.0, 1.0);
        best = std::min(best, (p - (a + ab * t)).norm());
    }
    return best;
}

}  // namespace

TEST_CASE("extract_top_layer keeps the z_max slab and matches a direct filter") {
    Rng rng(21);
    PointCloud cloud;
    for (int i = 0; i < 2000; ++i)
        cloud.points.push_back({rng.uniform(-0.03, 0.03), rng.uniform(-0.03, 0.03),
                                rng.uniform(0.0, 0.06)});
    PointCloud top = extract_top_layer(cloud, 0.02);
    double z_max = 0.0;
    for (const Vec3& p : cloud.points) z_max = std::max(z_max, p.z);

    size_t expected = 0;
    for (const Vec3& p : cloud.points)
        if (p.z >= z_max - 0.02) ++expected;
    CHECK(top.size() == expected);
    for (const Vec3& p : top.points) CHECK(p.z >= z_max - 0.02);

    // thickness covering everything is the identity
    CHECK(extract_top_layer(cloud, 1.0).size() == cloud.size());
    CHECK_THROWS_AS(extract_top_layer(PointCloud{}, 0.02), EmptyCloud);
}

TEST_CASE("project_to_plane drops z and preserves count") {
    PointCloud cloud;
    cloud.points.push_back({0.1, 0.2, 0.05});
    auto flat = project_to_plane(cloud);
    REQUIRE(flat.size() == 1);
    CHECK(flat[0].x == 0.1);
    CHECK(flat[0].y == 0.2);
    CHECK(project_to_plane(PointCloud{}).empty());
}

// ---------------------------------------------------------------------------
// Concave hull
// ---------------------------------------------------------------------------

TEST_CASE("concave hull of a grid with large alpha is the convex square") {
    std::vector<Vec2> pts;
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j) pts.push_back({i * 0.01, j * 0.01});
    Contour hull = concave_hull(pts, 10.0);
    CHECK(std::abs(signed_area(hull) - 0.01) < 1e-9);  // 0.1 x 0.1 square
    CHECK(hull.size() == 4);
}

TEST_CASE("concave hull captures the C-shape cavity") {
    std::vector<Vec2> pts;
    Rng rng(17);
    // C: ring sector with a bite on the +x side
    for (int i = 0; i < 3000; ++i) {
        double a = rng.uniform(0.25 * kPi, 1.75 * kPi);
        double r = rng.uniform(0.04, 0.06);
        pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    Contour hull = concave_hull(pts, 0.012);
    Contour convex = convex_hull(pts);
    CHECK(signed_area(hull) > 0.0);
    CHECK(signed_area(hull) < 0.8 * signed_area(convex));
    for (const Vec2& p : pts) CHECK(point_in_polygon(hull, p, 1e-7));
    CHECK(is_simple_polygon(hull));
}

TEST_CASE("concave hull degenerate inputs") {
    CHECK_THROWS_AS(concave_hull({{0, 0}, {1, 1}}, 0.1), Degenerate);
    CHECK_THROWS_AS(concave_hull({{0, 0}, {1, 1}, {2, 2}, {3, 3}}, 0.1), Degenerate);
}

// ---------------------------------------------------------------------------
// EFD
// ---------------------------------------------------------------------------

TEST_CASE("EFD of a circle: first harmonic carries the radius") {
    const double R = 0.05;
    EFDCoefficients efd = fit_efd(circle_contour(R, 256), 8);
    auto [major, minor] = first_harmonic_semi_axes(efd);
    CHECK(std::abs(major - R) < 1e-3 * R);
    CHECK(std::abs(minor - R) < 1e-3 * R);
    for (size_t n = 1; n < efd.order(); ++n) {
        const auto& h = efd.harmonics[n];
        double mag = std::sqrt(h.a * h.a + h.b * h.b + h.c * h.c + h.d * h.d);
        CHECK(mag < 1e-3 * R);
    }
    CHECK(efd.A0 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(efd.C0 == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("EFD translation moves only the DC terms") {
    Contour base = circle_contour(0.04, 128);
    Contour moved = circle_contour(0.04, 128, {0.3, -0.2});
    EFDCoefficients a = fit_efd(base, 10);
    EFDCoefficients b = fit_efd(moved, 10);
    CHECK(b.A0 - a.A0 == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(b.C0 - a.C0 == doctest::Approx(-0.2).epsilon(1e-9));
    for (size_t n = 0; n < a.order(); ++n) {
        CHECK(a.harmonics[n].a == doctest::Approx(b.harmonics[n].a).epsilon(1e-12));
        CHECK(a.harmonics[n].b == doctest::Approx(b.harmonics[n].b).epsilon(1e-12));
        CHECK(a.harmonics[n].c == doctest::Approx(b.harmonics[n].c).epsilon(1e-12));
        CHECK(a.harmonics[n].d == doctest::Approx(b.harmonics[n].d).epsilon(1e-12));
    }
}

TEST_CASE("EFD of a square with 40 harmonics reconstructs within 1% of the side") {
    const double side = 0.06;
    Contour square = square_contour(side);
    EFDCoefficients efd = fit_efd(square, 40);
    double max_dev = 0.0;
    for (int i = 0; i < 2000; ++i) {
        Vec2 p = efd.evaluate(static_cast<double>(i) / 2000);
        max_dev = std::max(max_dev, distance_to_contour(square, p));
    }
    CHECK(max_dev < 0.01 * side);
}

TEST_CASE("EFD reconstruction error is non-increasing in the harmonic count") {
    // irregular but smooth-ish star contour
    Contour star;
    for (int i = 0; i < 72; ++i) {
        double t = 2.0 * kPi * i / 72;
        double r = 0.05 + 0.012 * std::sin(3 * t) + 0.006 * std::cos(5 * t);
        star.vertices.push_back({r * std::cos(t), r * std::sin(t)});
    }
    double prev = 1e300;
    for (int n : {2, 4, 8, 16, 32}) {
        EFDCoefficients efd = fit_efd(star, n);
        double sum_sq = 0.0;
        for (int i = 0; i < 1000; ++i) {
            Vec2 p = efd.evaluate(static_cast<double>(i) / 1000);
            double d = distance_to_contour(star, p);
            sum_sq += d * d;
        }
        double rms = std::sqrt(sum_sq / 1000);
        CHECK(rms <= prev * 1.0001);
        prev = rms;
    }
}

// ---------------------------------------------------------------------------
// Curve sampling
// ---------------------------------------------------------------------------

TEST_CASE("sampled circle: radial normals, curvature 1/R, uniform spacing") {
    const double R = 0.04;
    EFDCoefficients efd = fit_efd(circle_contour(R, 512), 6);
    auto samples = sample_curve(efd, 180);
    REQUIRE(samples.size() == 180);
    for (const auto& s : samples) {
        Vec2 radial = s.point.normalized();
        CHECK(radial.dot(s.normal) > std::cos(0.5 * kPi / 180.0));
        CHECK(s.curvature == doctest::Approx(1.0 / R).epsilon(1e-4));
        CHECK(std::abs(s.normal.norm() - 1.0) < 1e-12);
    }
    // uniform arc-length spacing within 0.1%
    double total = 0.0;
    std::vector<double> gaps;
    for (size_t i = 0; i < samples.size(); ++i) {
        double gap = (samples[(i + 1) % samples.size()].point - samples[i].point).norm();
        gaps.push_back(gap);
        total += gap;
    }
    double mean = total / gaps.size();
    for (double gap : gaps) CHECK(std::abs(gap - mean) < 0.001 * mean);
}

TEST_CASE("curvature of a pure-first-harmonic circle is exactly 1/R") {
    EFDCoefficients efd;
    efd.harmonics.push_back({0.03, 0.0, 0.0, 0.03});  // exact circle, R = 0.03
    auto samples = sample_curve(efd, 64);
    for (const auto& s : samples) CHECK(s.curvature == doctest::Approx(1.0 / 0.03).epsilon(1e-6));
}

TEST_CASE("ellipse curvature at the major-axis ends") {
    const double a = 0.06, b = 0.03;
    EFDCoefficients efd;
    efd.harmonics.push_back({a, 0.0, 0.0, b});  // exact ellipse
    auto samples = sample_curve(efd, 4000);
    double best_k = 0.0, best_dist = 1e300;
    for (const auto& s : samples) {
        double d = (s.point - Vec2{a, 0}).norm();
        if (d < best_dist) {
            best_dist = d;
            best_k = s.curvature;
        }
    }
    CHECK(best_k == doctest::Approx(a / (b * b)).epsilon(1e-4));
}

TEST_CASE("analytic normals agree with central finite differences") {
    Contour star;
    for (int i = 0; i < 128; ++i) {
        double t = 2.0 * kPi * i / 128;
        double r = 0.05 + 0.01 * std::sin(4 * t);
        star.vertices.push_back({r * std::cos(t), r * std::sin(t)});
    }
    EFDCoefficients efd = fit_efd(star, 12);
    auto samples = sample_curve(efd, 720);
    for (size_t i = 0; i < samples.size(); ++i) {
        Vec2 prev = samples[(i + samples.size() - 1) % samples.size()].point;
        Vec2 next = samples[(i + 1) % samples.size()].point;
        Vec2 tangent_fd = (next - prev).normalized();
        Vec2 normal_fd{tangent_fd.y, -tangent_fd.x};
        double cos_err = std::clamp(normal_fd.dot(samples[i].normal), -1.0, 1.0);
        CHECK(std::acos(cos_err) < 0.5 * kPi / 180.0);
    }
}

// ---------------------------------------------------------------------------
// Pair search
// ---------------------------------------------------------------------------

TEST_CASE("circle grasp: diametral, through the centroid") {
    EFDCoefficients efd = fit_efd(circle_contour(0.02, 256), 6);
    auto samples = sample_curve(efd, 360);
    Grasp g = best_grasp_pair(samples, franka_like_gripper(), 0.5, {0, 0}, 0.02);
    // grasp line passes through the centroid
    Vec2 dir{std::cos(g.angle), std::sin(g.angle)};
    double d_c = std::abs((Vec2{0, 0} - g.center.xy()).cross(dir));
    CHECK(d_c < 1e-4);
    CHECK(g.width == doctest::Approx(0.04 + 0.01).epsilon(0.01));  // diameter + clearance
}

TEST_CASE("rectangle grasp closes across the short side") {
    Contour rect;
    rect.vertices = {{-0.06, -0.025}, {0.06, -0.025}, {0.06, 0.025}, {-0.06, 0.025}};
    EFDCoefficients efd = fit_efd(rect, 30);
    auto samples = sample_curve(efd, 360);
    Grasp g = best_grasp_pair(samples, franka_like_gripper(), 0.5, {0, 0}, 0.01);
    // the 0.12 side exceeds the 0.08 stroke, so the closing axis crosses the
    // 0.05 dimension (angle near pi/2)
    CHECK(std::abs(g.angle - kPi / 2) < 0.1);
    CHECK(g.width == doctest::Approx(0.05 + 0.01).epsilon(0.05));
}

namespace {
/// Independent exhaustive argmin over the same candidate set.
double oracle_min_cost(const std::vector<ContactCandidate>& samples, const GripperSpec& gripper,
                       double mu, Vec2 centroid) {
    double cone = std::atan(mu);
    double best = 1e300;
    for (size_t i = 0; i < samples.size(); ++i) {
        for (size_t j = 0; j < samples.size(); ++j) {
            if (i == j) continue;
            Vec2 d = samples[j].point - samples[i].point;
            double w = d.norm();
            if (w < gripper.min_opening || w > gripper.max_opening || w <= 0) continue;
            Vec2 u = d * (1.0 / w);
            double b1 = std::acos(std::clamp(-(samples[i].normal.dot(u)), -1.0, 1.0));
            double b2 = std::acos(std::clamp(samples[j].normal.dot(u), -1.0, 1.0));
            if (b1 > cone || b2 > cone) continue;
            double na =
                std::acos(std::clamp(samples[i].normal.dot(samples[j].normal), -1.0, 1.0));
            double dc = std::abs((centroid - samples[i].point).cross(u));
            best = std::min(best, (kPi - na) + (b1 + b2) + 10.0 * dc);
        }
    }
    return best;
}
}  // namespace

TEST_CASE("L-shaped contour: returned cost equals the exhaustive minimum") {
    Contour ell;
    ell.vertices = {{0, 0}, {0.06, 0}, {0.06, 0.02}, {0.02, 0.02}, {0.02, 0.07}, {0, 0.07}};
    EFDCoefficients efd = fit_efd(ell, 25);
    auto samples = sample_curve(efd, 240);
    Vec2 centroid = polygon_centroid(ell);
    GripperSpec gripper = franka_like_gripper();
    Grasp g = best_grasp_pair(samples, gripper, 0.5, centroid, 0.01);
    double min_cost = oracle_min_cost(samples, gripper, 0.5, centroid);
    // quality encodes the cost as 1/(1+J)
    double J = 1.0 / g.quality - 1.0;
    CHECK(std::abs(J - min_cost) < 1e-9);
}

TEST_CASE("force-closure soundness: the returned pair satisfies the cone condition") {
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        Contour blob;
        double base = rng.uniform(0.02, 0.035);
        double wobble = rng.uniform(0.0, 0.008);
        int harmonics = 2 + static_cast<int>(rng.next_below(4));
        double phase = rng.uniform(0, 2 * kPi);
        for (int i = 0; i < 96; ++i) {
            double t = 2.0 * kPi * i / 96;
            double r = base + wobble * std::sin(harmonics * t + phase);
            blob.vertices.push_back({r * std::cos(t), r * std::sin(t)});
        }
        EFDCoefficients efd = fit_efd(blob, 15);
        auto samples = sample_curve(efd, 180);
        double mu = rng.uniform(0.3, 0.8);
        Grasp g;
        try {
            g = best_grasp_pair(samples, franka_like_gripper(), mu, polygon_centroid(blob), 0.01);
        } catch (const NoGraspFound&) {
            continue;
        }
        // recover the chosen pair from the grasp geometry and re-check
        Vec2 c = g.center.xy();
        double cone = std::atan(mu) + 1e-6;
        bool found = false;
        for (size_t i = 0; i < samples.size() && !found; ++i) {
            for (size_t j = 0; j < samples.size() && !found; ++j) {
                if (i == j) continue;
                Vec2 mid = (samples[i].point + samples[j].point) * 0.5;
                if ((mid - c).norm() > 1e-9) continue;
                double w = (samples[j].point - samples[i].point).norm();
                // commanded width = span + clearance, capped at the stroke
                if (std::abs(std::min(w + 0.01, 0.08) - g.width) > 1e-9) continue;
                Vec2 u = (samples[j].point - samples[i].point) * (1.0 / w);
                double b1 = std::acos(std::clamp(-(samples[i].normal.dot(u)), -1.0, 1.0));
                double b2 = std::acos(std::clamp(samples[j].normal.dot(u), -1.0, 1.0));
                CHECK(b1 <= cone);
                CHECK(b2 <= cone);
                found = true;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("friction monotonicity: larger mu admits a superset of pairs") {
    EFDCoefficients efd = fit_efd(square_contour(0.05), 20);
    auto samples = sample_curve(efd, 120);
    GripperSpec gripper = franka_like_gripper();
    auto feasible_pairs = [&](double mu) {
        std::vector<std::pair<size_t, size_t>> out;
        double cone = std::atan(mu);
        for (size_t i = 0; i < samples.size(); ++i)
            for (size_t j = i + 1; j < samples.size(); ++j) {
                Vec2 d = samples[j].point - samples[i].point;
                double w = d.norm();
                if (w < gripper.min_opening || w > gripper.max_opening || w <= 0) continue;
                Vec2 u = d * (1.0 / w);
                double b1 = std::acos(std::clamp(-(samples[i].normal.dot(u)), -1.0, 1.0));
                double b2 = std::acos(std::clamp(samples[j].normal.dot(u), -1.0, 1.0));
                if (b1 <= cone && b2 <= cone) out.emplace_back(i, j);
            }
        return out;
    };
    auto lo = feasible_pairs(0.3);
    auto hi = feasible_pairs(0.7);
    CHECK(lo.size() <= hi.size());
    CHECK(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
}

TEST_CASE("rigid-motion equivariance of the full chain") {
    Rng rng(41);
    std::vector<Vec2> pts;
    for (int i = 0; i < 800; ++i) {
        double a = rng.uniform(0, 2 * kPi);
        double r = 0.03 * std::sqrt(rng.next_double());
        pts.push_back({0.035 * std::cos(a) * (r / 0.03 + 0.3), 0.02 * std::sin(a)});
    }
    auto plan_for = [&](const std::vector<Vec2>& input, Vec2 centroid) {
        Contour hull = concave_hull(input, 0.015);
        EFDCoefficients efd = fit_efd(hull, 12);
        auto samples = sample_curve(efd, 240);
        return best_grasp_pair(samples, franka_like_gripper(), 0.5, centroid, 0.01);
    };
    Vec2 centroid{0, 0};
    for (const Vec2& p : pts) centroid = centroid + p;
    centroid = centroid / static_cast<double>(pts.size());

    const double phi = 0.6;
    const Vec2 shift{0.12, -0.07};
    std::vector<Vec2> moved;
    for (const Vec2& p : pts) moved.push_back(p.rotated(phi) + shift);
    Vec2 moved_centroid = centroid.rotated(phi) + shift;

    Grasp a = plan_for(pts, centroid);
    Grasp b = plan_for(moved, moved_centroid);

    Vec2 a_center_moved = a.center.xy().rotated(phi) + shift;
    double spacing = 2 * kPi * 0.035 / 240;  // curve spacing upper bound
    CHECK((b.center.xy() - a_center_moved).norm() < spacing);
    double want_angle = normalize_grasp_angle(a.angle + phi);
    double diff = std::abs(b.angle - want_angle);
    diff = std::min(diff, kPi - diff);
    CHECK(diff < 2 * kPi / 240);
}
