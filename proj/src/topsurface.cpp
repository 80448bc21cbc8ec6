#include "graspbench/topsurface.hpp"

#include <algorithm>
#include <cmath>

#include "graspbench/alpha_shape.hpp"

namespace graspbench {

PointCloud extract_top_layer(const PointCloud& cloud, double thickness) {
    if (cloud.empty()) throw EmptyCloud("extract_top_layer needs points");
    double z_max = -1e300;
    for (const Vec3& p : cloud.points) z_max = std::max(z_max, p.z);
    PointCloud out;
    for (const Vec3& p : cloud.points)
        if (p.z >= z_max - thickness) out.points.push_back(p);
    return out;
}

std::vector<Vec2> project_to_plane(const PointCloud& cloud) {
    std::vector<Vec2> out;
    out.reserve(cloud.size());
    for (const Vec3& p : cloud.points) out.push_back({p.x, p.y});
    return out;
}

std::vector<ContactCandidate> sample_curve(const EFDCoefficients& efd, int count) {
    if (count < 8) throw ConfigError("sample_curve needs >= 8 samples");

    // arc-length table for uniform spacing via numeric inversion
    const int fine = std::max(8192, 32 * count);
    std::vector<double> cumulative(static_cast<size_t>(fine) + 1, 0.0);
    double prev_speed = efd.derivative(0.0).norm();
    for (int i = 1; i <= fine; ++i) {
        double t = static_cast<double>(i) / fine;
        double speed = efd.derivative(t).norm();
        cumulative[static_cast<size_t>(i)] =
            cumulative[static_cast<size_t>(i) - 1] + 0.5 * (prev_speed + speed) / fine;
        prev_speed = speed;
    }
    const double total = cumulative.back();

    std::vector<ContactCandidate> out;
    out.reserve(static_cast<size_t>(count));
    size_t hi = 1;
    for (int k = 0; k < count; ++k) {
        double target = total * static_cast<double>(k) / count;
        while (hi < cumulative.size() - 1 && cumulative[hi] < target) ++hi;
        double s0 = cumulative[hi - 1], s1 = cumulative[hi];
        double frac = s1 > s0 ? (target - s0) / (s1 - s0) : 0.0;
        double t = (static_cast<double>(hi - 1) + frac) / fine;

        Vec2 p = efd.evaluate(t);
        Vec2 d1 = efd.derivative(t);
        double speed = d1.norm();
        Vec2 tangent = speed > 0.0 ? d1 * (1.0 / speed) : Vec2{1.0, 0.0};
        // CCW curve: outward normal is the clockwise rotation of the tangent
        Vec2 normal{tangent.y, -tangent.x};
        out.push_back({p, normal, efd_curvature(efd, t), target / total});
    }
    return out;
}

Grasp best_grasp_pair(const std::vector<ContactCandidate>& samples, const GripperSpec& gripper,
                      double mu, const Vec2& centroid, double grasp_z,
                      const PairSearchWeights& weights) {
    if (samples.size() < 2) throw NoGraspFound("fewer than two contact candidates");
    const double cone_limit = std::atan(mu);

    bool have_best = false;
    double best_cost = 0.0;
    Grasp best;

    auto clamped_acos = [](double v) { return std::acos(std::clamp(v, -1.0, 1.0)); };

    for (size_t i = 0; i < samples.size(); ++i) {
        for (size_t j = i + 1; j < samples.size(); ++j) {
            Vec2 span = samples[j].point - samples[i].point;
            double width = span.norm();
            if (width < gripper.min_opening || width > gripper.max_opening || width <= 0.0)
                continue;
            Vec2 u = span * (1.0 / width);

            // inward finger forces must lie inside both friction cones
            double beta_i = clamped_acos(-(samples[i].normal.dot(u)));
            double beta_j = clamped_acos(samples[j].normal.dot(u));
            if (beta_i > cone_limit || beta_j > cone_limit) continue;

            double normal_angle = clamped_acos(samples[i].normal.dot(samples[j].normal));
            double d_c = std::abs((centroid - samples[i].point).cross(u));
            double cost = weights.antipodal * (kPi - normal_angle) +
                          weights.cone * (beta_i + beta_j) + weights.moment * d_c;

            Vec2 mid = (samples[i].point + samples[j].point) * 0.5;
            Grasp g;
            g.center = {mid.x, mid.y, grasp_z};
            g.angle = normalize_grasp_angle(std::atan2(u.y, u.x));
            g.width = std::min(width + weights.clearance, gripper.max_opening);
            g.quality = 1.0 / (1.0 + cost);

            if (!have_best || cost < best_cost ||
                (cost == best_cost && g.tie_break_before(best))) {
                have_best = true;
                best_cost = cost;
                best = g;
            }
        }
    }
    if (!have_best) throw NoGraspFound("no feasible antipodal pair");
    return best;
}

Grasp TopSurfacePlanner::plan(const Observation& obs, const GripperSpec& gripper) const {
    if (obs.cloud.empty()) throw NoGraspFound("no object points after preprocessing");

    PointCloud top = extract_top_layer(obs.cloud, params_.thickness);
    std::vector<Vec2> flat = project_to_plane(top);

    // moment balance aims at the perceived object centroid (all points, not
    // just the slab)
    Vec2 centroid{0, 0};
    for (const Vec3& p : obs.cloud.points) centroid = centroid + p.xy();
    centroid = centroid / static_cast<double>(obs.cloud.size());

    double z_max = -1e300;
    for (const Vec3& p : obs.cloud.points) z_max = std::max(z_max, p.z);
    double grasp_z = std::max(z_max - params_.thickness / 2.0, 0.0);

    Contour hull;
    try {
        hull = concave_hull(flat, params_.alpha);
    } catch (const Degenerate& e) {
        throw NoGraspFound(std::string("degenerate top surface: ") + e.what());
    }

    EFDCoefficients efd = fit_efd(hull, params_.harmonics);
    std::vector<ContactCandidate> samples = sample_curve(efd, params_.samples);
    Grasp g = best_grasp_pair(samples, gripper, params_.planner_mu, centroid, grasp_z,
                              params_.weights);
    validate_grasp(g, gripper);
    return g;
}

}  // namespace graspbench
