#include "graspbench/scene.hpp"

#include <algorithm>
#include <cmath>

#include "graspbench/rng.hpp"

namespace graspbench {

std::array<ScenePose, 6> protocol_poses(double r, double theta) {
    if (r < 0.0) throw ConfigError("protocol radius must be >= 0");
    // fixed bearings; the protocol's power is consistency, not placement
    const double bearings[3] = {kPi / 2.0, kPi * 7.0 / 6.0, kPi * 11.0 / 6.0};
    Vec2 a{r * std::cos(bearings[0]), r * std::sin(bearings[0])};
    Vec2 b{r * std::cos(bearings[1]), r * std::sin(bearings[1])};
    Vec2 c{r * std::cos(bearings[2]), r * std::sin(bearings[2])};
    return {ScenePose{a.x, a.y, 0.0},   ScenePose{a.x, a.y, theta},
            ScenePose{b.x, b.y, 0.0},   ScenePose{c.x, c.y, 0.0},
            ScenePose{b.x, b.y, theta}, ScenePose{c.x, c.y, theta}};
}

std::map<std::string, NoiseProfile> default_noise_profiles() {
    std::map<std::string, NoiseProfile> out;
    out["none"] = NoiseProfile{"none", 0.0, 0.0, 0, 0};
    out["realsense@340lux"] = NoiseProfile{"realsense@340lux", 0.003, 0.02, 0, 0};
    out["realsense@60lux"] = NoiseProfile{"realsense@60lux", 0.001, 0.005, 0, 0};
    out["zed"] = NoiseProfile{"zed", 0.0005, 0.0, 2, 0};
    return out;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

struct PosedObject {
    const ObjectModel& object;
    ScenePose pose;
    double cos_yaw;
    double sin_yaw;

    PosedObject(const ObjectModel& obj, const ScenePose& p)
        : object(obj), pose(p), cos_yaw(std::cos(p.yaw)), sin_yaw(std::sin(p.yaw)) {}

    Vec3 to_object(const Vec3& world) const {
        double dx = world.x - pose.x;
        double dy = world.y - pose.y;
        return {cos_yaw * dx + sin_yaw * dy, -sin_yaw * dx + cos_yaw * dy, world.z};
    }

    double sdf(const Vec3& world) const { return object.sdf(to_object(world)); }

    Aabb world_bounds() const {
        Aabb ob = object.bounds();
        Vec2 corners[4] = {{ob.lo.x, ob.lo.y}, {ob.hi.x, ob.lo.y},
                           {ob.hi.x, ob.hi.y}, {ob.lo.x, ob.hi.y}};
        double xmin = 1e30, xmax = -1e30, ymin = 1e30, ymax = -1e30;
        for (const Vec2& c : corners) {
            Vec2 w = c.rotated(pose.yaw) + Vec2{pose.x, pose.y};
            xmin = std::min(xmin, w.x);
            xmax = std::max(xmax, w.x);
            ymin = std::min(ymin, w.y);
            ymax = std::max(ymax, w.y);
        }
        return {{xmin, ymin, ob.lo.z}, {xmax, ymax, ob.hi.z}};
    }
};

}  // namespace

DepthImage render_depth(const ObjectModel& object, const ScenePose& pose,
                        const CameraModel& camera) {
    if (!camera.valid()) throw ConfigError("invalid camera model");
    DepthImage depth(camera.width, camera.height, static_cast<float>(camera.standoff));

    PosedObject posed(object, pose);
    Aabb wb = posed.world_bounds().inflated(0.002);
    if (wb.hi.z <= 0.0) return depth;

    // conservative pixel rect: project all bounding-box corners
    double u_min = 1e30, u_max = -1e30, v_min = 1e30, v_max = -1e30;
    for (double z : {std::max(wb.lo.z, 0.0), wb.hi.z}) {
        double d = camera.standoff - z;
        if (d <= 1e-6) d = 1e-6;
        for (double x : {wb.lo.x, wb.hi.x})
            for (double y : {wb.lo.y, wb.hi.y}) {
                u_min = std::min(u_min, camera.cx + camera.fx * x / d);
                u_max = std::max(u_max, camera.cx + camera.fx * x / d);
                v_min = std::min(v_min, camera.cy + camera.fy * y / d);
                v_max = std::max(v_max, camera.cy + camera.fy * y / d);
            }
    }
    int px0 = std::max(0, static_cast<int>(std::floor(u_min)) - 1);
    int px1 = std::min(camera.width - 1, static_cast<int>(std::ceil(u_max)) + 1);
    int py0 = std::max(0, static_cast<int>(std::floor(v_min)) - 1);
    int py1 = std::min(camera.height - 1, static_cast<int>(std::ceil(v_max)) + 1);

    const double z_top = wb.hi.z + 0.004;
    const double min_step = 2e-4;
    const int max_iters = 512;

    for (int py = py0; py <= py1; ++py) {
        for (int px = px0; px <= px1; ++px) {
            Vec3 dir{(px - camera.cx) / camera.fx, (py - camera.cy) / camera.fy, -1.0};
            dir = dir.normalized();
            Vec3 origin{0.0, 0.0, camera.standoff};
            // march only from just above the object down to the table
            double t = (camera.standoff - z_top) / -dir.z;
            double t_table = camera.standoff / -dir.z;

            double t_prev = t;
            bool hit = false;
            double t_lo = t, t_hi = t;
            for (int it = 0; it < max_iters && t < t_table; ++it) {
                double s = posed.sdf(origin + dir * t);
                if (s <= 0.0) {
                    hit = true;
                    t_lo = t_prev;
                    t_hi = t;
                    break;
                }
                t_prev = t;
                t += std::max(s, min_step);
            }
            if (!hit) continue;
            for (int it = 0; it < 48; ++it) {
                double tm = 0.5 * (t_lo + t_hi);
                if (posed.sdf(origin + dir * tm) <= 0.0)
                    t_hi = tm;
                else
                    t_lo = tm;
            }
            double z_hit = origin.z + dir.z * 0.5 * (t_lo + t_hi);
            depth.at(px, py) = static_cast<float>(camera.standoff - z_hit);
        }
    }
    return depth;
}

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

DepthImage apply_noise(const DepthImage& depth, const NoiseProfile& profile) {
    if (!profile.valid()) throw ConfigError("invalid noise profile");
    DepthImage out = depth;

    // independent streams so the dropout pattern does not depend on whether
    // gaussian noise is enabled
    if (profile.sigma_z > 0.0) {
        Rng rng(hash_combine(profile.seed, 1));
        for (float& d : out.data)
            if (DepthImage::is_valid(d))
                d = static_cast<float>(d + profile.sigma_z * rng.next_gaussian());
    }

    if (profile.dropout_rate > 0.0) {
        Rng rng(hash_combine(profile.seed, 2));
        size_t n = out.size();
        auto k = static_cast<size_t>(std::llround(profile.dropout_rate * static_cast<double>(n)));
        std::vector<uint32_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = static_cast<uint32_t>(i);
        for (size_t i = 0; i < k; ++i) {
            size_t j = i + static_cast<size_t>(rng.next_below(n - i));
            std::swap(idx[i], idx[j]);
            out.data[idx[i]] = DepthImage::invalid_value();
        }
    }

    if (profile.smoothing > 0) {
        int r = profile.smoothing;
        DepthImage smoothed = out;
        for (int y = 0; y < out.height; ++y) {
            for (int x = 0; x < out.width; ++x) {
                if (!DepthImage::is_valid(out.at(x, y))) continue;
                double sum = 0.0;
                int count = 0;
                for (int dy = -r; dy <= r; ++dy) {
                    int yy = y + dy;
                    if (yy < 0 || yy >= out.height) continue;
                    for (int dx = -r; dx <= r; ++dx) {
                        int xx = x + dx;
                        if (xx < 0 || xx >= out.width) continue;
                        float v = out.at(xx, yy);
                        if (DepthImage::is_valid(v)) {
                            sum += v;
                            ++count;
                        }
                    }
                }
                if (count > 0) smoothed.at(x, y) = static_cast<float>(sum / count);
            }
        }
        out = std::move(smoothed);
    }
    return out;
}

PointCloud depth_to_cloud(const DepthImage& depth, const CameraModel& camera) {
    if (!camera.valid()) throw ConfigError("invalid camera model");
    PointCloud cloud;
    cloud.points.reserve(depth.valid_count());
    for (int y = 0; y < depth.height; ++y) {
        for (int x = 0; x < depth.width; ++x) {
            float d = depth.at(x, y);
            if (!DepthImage::is_valid(d)) continue;
            double dd = d;
            cloud.points.push_back({(x - camera.cx) * dd / camera.fx,
                                    (y - camera.cy) * dd / camera.fy,
                                    camera.standoff - dd});
        }
    }
    return cloud;
}

}  // namespace graspbench
