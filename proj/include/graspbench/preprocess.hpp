#ifndef GRASPBENCH_PREPROCESS_HPP
#define GRASPBENCH_PREPROCESS_HPP

#include "graspbench/types.hpp"

namespace graspbench {

/// Fills every invalid pixel with the depth of its exact nearest valid pixel
/// (image-plane Euclidean distance; ties go to the smallest row, then
/// column). Valid pixels are unchanged. Throws AllInvalid when the image has
/// no valid pixel.
DepthImage complete_depth(const DepthImage& depth);

struct PlaneModel {
    Vec3 normal;   // unit, oriented toward +z
    double offset; // plane: normal . p = offset

    double distance(const Vec3& p) const { return std::abs(normal.dot(p) - offset); }
};

struct PlaneRemovalResult {
    PointCloud remaining;
    PlaneModel plane;
    size_t inlier_count = 0;
};

/// Fits the dominant plane by seeded random-sample consensus (>= 500
/// iterations, least-squares refit on the consensus set) and removes all
/// points within tol of it. Throws NoPlane when fewer than 30% of the points
/// support any plane.
PlaneRemovalResult remove_plane(const PointCloud& cloud, double tol,
                                uint64_t seed = 0x5eed0f17u, int iterations = 500);

/// Keeps points whose (x, y) lies inside the box, preserving order.
PointCloud roi_filter(const PointCloud& cloud, const RoiBox& roi);

/// One centroid per occupied voxel of the given edge length; output ordered
/// by voxel index.
PointCloud downsample(const PointCloud& cloud, double voxel);

constexpr double kPlaneTolDefault = 0.005;
constexpr double kVoxelDefault = 0.004;

/// Knobs for the full input-enhancement chain (completion, back-projection,
/// ROI filter, downsampling, plane removal).
struct PreprocessParams {
    RoiBox roi;
    double plane_tol = kPlaneTolDefault;
    double voxel = kVoxelDefault;
    int ransac_iters = 500;
    uint64_t ransac_seed = 0x5eed0f17u;
};

}  // namespace graspbench

#endif
