#ifndef GRASPBENCH_SCENE_HPP
#define GRASPBENCH_SCENE_HPP

#include <array>
#include <map>
#include <string>

#include "graspbench/objects.hpp"
#include "graspbench/types.hpp"

namespace graspbench {

/// Placement of an object on the table.
struct ScenePose {
    double x = 0.0;
    double y = 0.0;
    double yaw = 0.0;

    bool in_workspace() const {
        return x >= -0.4 && x <= 0.4 && y >= -0.4 && y <= 0.4;
    }
};

/// The six protocol placements: three positions evenly spaced on the circle
/// of radius r about the workspace center (bearings 90, 210, 330 degrees),
/// each used once at yaw 0 and once at yaw theta. Indices are fixed so that
/// P4 and P6 form the repeated-position pair differing in yaw by theta.
std::array<ScenePose, 6> protocol_poses(double r, double theta);

constexpr double kProtocolRadiusDefault = 0.25;
constexpr double kProtocolThetaDefault = kPi / 2.0;

/// Sensor imperfection model: additive Gaussian depth noise, pixel dropout,
/// and low-pass smoothing, all seeded.
struct NoiseProfile {
    std::string name = "none";
    double sigma_z = 0.0;       // m
    double dropout_rate = 0.0;  // fraction of pixels invalidated
    int smoothing = 0;          // low-pass radius in pixels
    uint64_t seed = 0;

    bool valid() const { return sigma_z >= 0.0 && dropout_rate >= 0.0 && dropout_rate < 1.0; }
};

/// Presets reproducing the relative depth-quality ordering of the cameras and
/// lighting levels used in the experiments (not absolute sensor physics).
std::map<std::string, NoiseProfile> default_noise_profiles();

/// Renders the top-down depth image of one object at the given pose by ray
/// casting the exact signed-distance field through the pinhole model. Table
/// pixels read exactly `camera.standoff`.
DepthImage render_depth(const ObjectModel& object, const ScenePose& pose,
                        const CameraModel& camera);

/// Applies the noise profile: Gaussian depth noise, then exact-count dropout
/// (sampling without replacement), then smoothing. Deterministic per seed.
DepthImage apply_noise(const DepthImage& depth, const NoiseProfile& profile);

/// Back-projects every valid pixel through the pinhole model into the table
/// frame (z = standoff - depth for the top-down camera).
PointCloud depth_to_cloud(const DepthImage& depth, const CameraModel& camera);

}  // namespace graspbench

#endif
