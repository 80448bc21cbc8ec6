#include "graspbench/stability.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace graspbench {

namespace {

struct Interval {
    double lo, hi;
};

/// Inside-intervals of the object slice along the line origin + t*dir at
/// height z (object frame). Sign-scan on the exact SDF with bisection
/// refinement; deterministic.
std::vector<Interval> slice_line_intervals(const ObjectModel& object, double z,
                                           const Vec2& origin, const Vec2& dir, double t_min,
                                           double t_max) {
    auto f = [&](double t) {
        return object.sdf({origin.x + t * dir.x, origin.y + t * dir.y, z});
    };
    const double step = 5e-4;
    std::vector<double> crossings;
    double t_prev = t_min;
    double f_prev = f(t_prev);
    for (double t = t_min + step; t <= t_max + step; t += step) {
        double tc = std::min(t, t_max);
        double fc = f(tc);
        if ((f_prev <= 0.0) != (fc <= 0.0)) {
            double lo = t_prev, hi = tc;
            bool lo_inside = f_prev <= 0.0;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                if ((f(mid) <= 0.0) == lo_inside)
                    lo = mid;
                else
                    hi = mid;
            }
            crossings.push_back(0.5 * (lo + hi));
        }
        t_prev = tc;
        f_prev = fc;
        if (tc >= t_max) break;
    }

    std::vector<Interval> intervals;
    bool start_inside = f(t_min) <= 0.0;
    double open = start_inside ? t_min : 0.0;
    bool is_open = start_inside;
    for (double c : crossings) {
        if (is_open) {
            intervals.push_back({open, c});
            is_open = false;
        } else {
            open = c;
            is_open = true;
        }
    }
    if (is_open) intervals.push_back({open, t_max});
    return intervals;
}

Vec2 slice_normal(const ObjectModel& object, const Vec2& p, double z) {
    const double h = 1e-6;
    double gx = object.sdf({p.x + h, p.y, z}) - object.sdf({p.x - h, p.y, z});
    double gy = object.sdf({p.x, p.y + h, z}) - object.sdf({p.x, p.y - h, z});
    Vec2 g{gx, gy};
    double n = g.norm();
    return n > 0.0 ? g * (1.0 / n) : Vec2{1.0, 0.0};
}

}  // namespace

ContactSet realize_contacts(const ObjectModel& object, const ScenePose& pose, const Grasp& grasp,
                            const GripperSpec& gripper) {
    // grasp into the object frame
    double cos_yaw = std::cos(pose.yaw), sin_yaw = std::sin(pose.yaw);
    Vec2 rel{grasp.center.x - pose.x, grasp.center.y - pose.y};
    Vec2 origin{cos_yaw * rel.x + sin_yaw * rel.y, -sin_yaw * rel.x + cos_yaw * rel.y};
    Vec2 dir = Vec2{std::cos(grasp.angle), std::sin(grasp.angle)}.rotated(-pose.yaw);
    const double z = grasp.center.z;

    Aabb b = object.bounds();
    if (z <= b.lo.z || z >= b.hi.z + 1e-12)
        throw MissedObject("grasp height outside the object");

    double reach = std::hypot(std::max(std::abs(b.lo.x), std::abs(b.hi.x)) + std::abs(origin.x),
                              std::max(std::abs(b.lo.y), std::abs(b.hi.y)) + std::abs(origin.y));
    double t_lim = std::max(reach, grasp.width / 2.0 + gripper.finger_thickness) + 0.01;
    const double half = grasp.width / 2.0;
    const double ft = gripper.finger_thickness;

    // Fingers are flat pads of lateral extent finger_width, not points: scan
    // parallel lines across the pad. A pad closing on a convex region seats
    // on its support point, so wider pads tolerate off-axis detections.
    const Vec2 lateral{-dir.y, dir.x};
    const int pad_lines = 9;
    const double pad_half = gripper.finger_width / 2.0;

    bool any_material = false;
    double t_left = 1e300, t_right = -1e300;
    std::vector<std::pair<Vec2, double>> left_hits, right_hits;  // (point, t)

    for (int k = 0; k < pad_lines; ++k) {
        double s = pad_half * (2.0 * k / (pad_lines - 1) - 1.0);
        Vec2 line_origin = origin + lateral * s;
        std::vector<Interval> intervals =
            slice_line_intervals(object, z, line_origin, dir, -t_lim, t_lim);
        if (intervals.empty()) continue;

        // a connected piece running through both finger planes cannot fit
        // the commanded opening
        for (const Interval& iv : intervals)
            if (iv.lo < -half - 1e-9 && iv.hi > half + 1e-9)
                throw WidthExceeded("object spans " + std::to_string(iv.hi - iv.lo) +
                                    " m across the commanded opening");

        // finger bodies occupy [-half - ft, -half] and [half, half + ft];
        // material farther out than that is cleared entirely
        for (const Interval& iv : intervals) {
            if (iv.lo < -half - 1e-9 && iv.hi > -half - ft - 1e-9)
                throw Collision("finger placement intersects the object");
            if (iv.hi > half + 1e-9 && iv.lo < half + ft + 1e-9)
                throw Collision("finger placement intersects the object");
        }

        for (const Interval& iv : intervals) {
            double lo = std::max(iv.lo, -half);
            double hi = std::min(iv.hi, half);
            if (lo > hi) continue;
            any_material = true;
            if (lo < t_left) t_left = lo;
            if (hi > t_right) t_right = hi;
            left_hits.push_back({line_origin + dir * lo, lo});
            right_hits.push_back({line_origin + dir * hi, hi});
        }
    }
    if (!any_material) throw MissedObject("fingers close without touching the object");
    if (t_right - t_left < 1e-9) throw MissedObject("grazing contact only");

    // Each pad first touches the extreme material across its width (the
    // support point), which is the contact location. The pad then complies:
    // hits within the fingertip compliance depth of the extreme share the
    // load, so the effective normal is their average (flat, curved, and
    // bridged contacts all get the seated normal).
    const double seat_window = std::max(5e-4, gripper.contact_patch_radius);
    auto seat = [&](const std::vector<std::pair<Vec2, double>>& hits, double extreme,
                    bool left) -> Contact {
        Vec2 point_sum{0, 0}, normal_sum{0, 0};
        int touching = 0;
        for (const auto& [p, t] : hits) {
            if (std::abs(t - extreme) > seat_window) continue;
            normal_sum = normal_sum + slice_normal(object, p, z);
            if (std::abs(t - extreme) <= 1e-7) {
                point_sum = point_sum + p;
                ++touching;
            }
        }
        Vec2 point = point_sum / static_cast<double>(std::max(touching, 1));
        Vec2 normal = normal_sum.norm() > 0.0 ? normal_sum.normalized()
                                              : (left ? dir * -1.0 : dir);
        return {point, normal, gripper.contact_patch_radius};
    };
    ContactSet contacts;
    contacts.z = z;
    contacts.closing_dir = dir;
    contacts.first = seat(left_hits, t_left, true);
    contacts.second = seat(right_hits, t_right, false);
    return contacts;
}

bool stage_check(const ContactSet& contacts, const ObjectModel& object,
                 const GripperSpec& gripper, Stage stage, const StabilityParams& params) {
    const double mu = object.friction_mu();
    const double load = object.mass() * kGravity;
    const double squeeze = gripper.max_force;
    const double tangential_capacity = 2.0 * mu * squeeze;

    // squeeze forces act along the closing axis (the pads translate along
    // it); the antipodal friction-cone condition is checked against it
    Vec2 u = contacts.closing_dir.normalized();
    if (u.norm() <= 0.0) return false;
    const double cone = std::atan(mu);
    double beta1 = std::acos(std::clamp(-(contacts.first.normal.dot(u)), -1.0, 1.0));
    double beta2 = std::acos(std::clamp(contacts.second.normal.dot(u), -1.0, 1.0));
    bool cone_ok = beta1 <= cone + 1e-12 && beta2 <= cone + 1e-12;

    switch (stage) {
        case Stage::lift:
            return cone_ok && tangential_capacity >= params.k_lift * load;
        case Stage::yaw: {
            Vec2 centroid = object.centroid().xy();
            Vec2 mid = (contacts.first.point + contacts.second.point) * 0.5;
            double d_off = std::abs((centroid - mid).cross(u));
            double torsional_capacity =
                2.0 * mu * squeeze *
                std::min(contacts.first.patch_radius, contacts.second.patch_radius);
            return cone_ok && tangential_capacity >= params.k_lift * load &&
                   torsional_capacity >= params.k_yaw * load * d_off;
        }
        case Stage::shake:
            return cone_ok && tangential_capacity >= params.k_shake * load;
    }
    return false;
}

GraspOutcome run_stability_test(const ObjectModel& object, const ScenePose& pose,
                                const Grasp& grasp, const GripperSpec& gripper,
                                const StabilityParams& params, std::string* failure_reason) {
    ContactSet contacts;
    try {
        contacts = realize_contacts(object, pose, grasp, gripper);
    } catch (const Error& e) {
        if (failure_reason) *failure_reason = e.code();
        return make_outcome(false, false, false);
    }
    bool lifted = stage_check(contacts, object, gripper, Stage::lift, params);
    bool yawed = lifted && stage_check(contacts, object, gripper, Stage::yaw, params);
    bool shaken = yawed && stage_check(contacts, object, gripper, Stage::shake, params);
    if (!lifted && failure_reason) *failure_reason = "LiftFailed";
    return make_outcome(lifted, yawed, shaken);
}

}  // namespace graspbench
