#ifndef GRASPBENCH_MASKGRASP_HPP
#define GRASPBENCH_MASKGRASP_HPP

#include <vector>

#include "graspbench/planner.hpp"
#include "graspbench/types.hpp"

namespace graspbench {

/// Per-pixel object height above the table, derived from a completed depth
/// image. Carries the camera geometry needed to map pixels back to table
/// coordinates.
struct HeightMap {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // row-major, meters, >= 0
    double meters_per_pixel = 0.0;  // scale at the table plane
    double standoff = 0.0;
    double cx = 0.0;
    double cy = 0.0;

    double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    double max_height() const;
};

/// h = max(0, standoff - depth). Throws InvalidPixels when the image still
/// has holes.
HeightMap height_map(const DepthImage& depth, const CameraModel& camera);

/// Gripper-shaped correlation template: a positive-weight rectangle between
/// the fingers (reward object in the jaw) flanked by negative-weight finger
/// rectangles (penalize object under the fingers). Positive weights sum to
/// +1 and negative weights to -1; dimensions are odd in both axes.
struct GraspMask {
    int width = 0;
    int height = 0;
    std::vector<double> weights;  // row-major, zero-padded canvas
    double angle = 0.0;
    int opening_px = 0;

    double at(int x, int y) const { return weights[static_cast<size_t>(y) * width + x]; }
};

GraspMask build_mask(const GripperSpec& gripper, double opening, double angle, double scale);

struct ScoreMap {
    int width = 0;
    int height = 0;
    std::vector<double> data;
    // inclusive bounds of the region that can hold nonzero scores; empty
    // (x1 < x0) for an object-free map
    int x0 = 0, y0 = 0, x1 = -1, y1 = -1;

    double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
};

/// Top-band occupancy used by the mask scoring: 1 inside h >= h_max - band
/// when the scene contains an object, all zeros otherwise.
std::vector<uint8_t> binarize_top_band(const HeightMap& hm, double band,
                                       double min_object_height = 0.005);

/// Dense stride-1 cross-correlation of the binarized height map with the
/// mask, mask centered on each output pixel; out-of-image support counts as
/// empty. Pixels binarize to 1 inside the object's top band (h >= h_max -
/// band) when the scene contains an object at all.
ScoreMap score_map(const HeightMap& hm, const GraspMask& mask, double band = 0.02);

struct MaskPlannerParams {
    int angle_count = 16;
    // max_opening is appended at plan time; the grid is dense enough that
    // tube-like objects (~0.035 m across) get a snug opening
    std::vector<double> openings = {0.03, 0.04, 0.05, 0.06, 0.07};
    double band = 0.02;              // binarization band below the object top
    double engagement_depth = 0.015; // finger descent below the top, capped at h/2
    double min_object_height = 0.005;
    double clearance = 0.01;  // approach margin added to the commanded width
    RoiBox roi;
};

/// Global argmax over every (angle, opening) score map, as a Grasp. Throws
/// NoGraspFound when no placement scores above zero.
Grasp best_mask_grasp(const HeightMap& hm, const GripperSpec& gripper,
                      const MaskPlannerParams& params);

class MaskPlanner : public Planner {
public:
    explicit MaskPlanner(MaskPlannerParams params = {}) : params_(std::move(params)) {}

    std::string name() const override { return "mask"; }
    Grasp plan(const Observation& obs, const GripperSpec& gripper) const override;

    const MaskPlannerParams& params() const { return params_; }

private:
    MaskPlannerParams params_;
};

}  // namespace graspbench

#endif
