#ifndef GRASPBENCH_TOPSURFACE_HPP
#define GRASPBENCH_TOPSURFACE_HPP

#include <vector>

#include "graspbench/efd.hpp"
#include "graspbench/planner.hpp"
#include "graspbench/types.hpp"

namespace graspbench {

/// Returns the points with z in [z_max - thickness, z_max].
PointCloud extract_top_layer(const PointCloud& cloud, double thickness);

/// Drops z (the table normal is +z in the table frame).
std::vector<Vec2> project_to_plane(const PointCloud& cloud);

/// Candidate finger placement on the fitted curve.
struct ContactCandidate {
    Vec2 point;
    Vec2 normal;       // unit, outward
    double curvature;  // 1/m, signed (positive = convex for a CCW curve)
    double arc_param;  // normalized arc length in [0, 1)
};

/// `count` points at uniform arc-length spacing along the fitted curve, with
/// analytic normals (first derivative) and curvature (first and second
/// derivatives).
std::vector<ContactCandidate> sample_curve(const EFDCoefficients& efd, int count);

/// Cost weights for the pair search. The moment weight converts the
/// centroid-to-grasp-line distance (meters) onto the same scale as the
/// angular terms (radians).
struct PairSearchWeights {
    double antipodal = 1.0;  // (pi - angle between normals)
    double cone = 1.0;       // friction-cone deviation angles
    double moment = 10.0;    // 1/m
    double clearance = 0.01; // added to the contact span for the commanded width
};

/// Exhaustive scoring of all sample pairs: feasible pairs satisfy the
/// gripper stroke limits and the two-contact antipodal friction-cone
/// condition; the returned grasp minimizes
///   J = w_a*(pi - angle(n_i, n_j)) + w_b*(beta_i + beta_j) + w_c*d_c
/// with ties broken by the deterministic grasp ordering.
Grasp best_grasp_pair(const std::vector<ContactCandidate>& samples, const GripperSpec& gripper,
                      double mu, const Vec2& centroid, double grasp_z,
                      const PairSearchWeights& weights = {});

struct TopSurfaceParams {
    double thickness = 0.02;  // top-layer slab
    double alpha = 0.015;     // concave hull scale
    int harmonics = 20;
    int samples = 360;
    double planner_mu = 0.5;  // perception-side friction assumption
    PairSearchWeights weights;
};

/// Top-surface pipeline: top-layer filter, 2D projection, concave hull, EFD
/// fit, dense normal sampling, force/moment-balance pair search.
class TopSurfacePlanner : public Planner {
public:
    explicit TopSurfacePlanner(TopSurfaceParams params = {}) : params_(params) {}

    std::string name() const override { return "topsurface"; }
    Grasp plan(const Observation& obs, const GripperSpec& gripper) const override;

    const TopSurfaceParams& params() const { return params_; }

private:
    TopSurfaceParams params_;
};

}  // namespace graspbench

#endif
