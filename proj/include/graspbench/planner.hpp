#ifndef GRASPBENCH_PLANNER_HPP
#define GRASPBENCH_PLANNER_HPP

#include <memory>
#include <string>

#include "graspbench/types.hpp"

namespace graspbench {

/// Preprocessed sensor input handed to planners: the completed depth image,
/// the filtered table-frame cloud (plane removed), and the camera.
struct Observation {
    DepthImage depth;
    PointCloud cloud;
    CameraModel camera;
};

/// Grasp synthesis contract: pure function of the observation, deterministic
/// for identical input, throws NoGraspFound when no feasible candidate
/// exists.
class Planner {
public:
    virtual ~Planner() = default;
    virtual std::string name() const = 0;
    virtual Grasp plan(const Observation& obs, const GripperSpec& gripper) const = 0;
};

}  // namespace graspbench

#endif
