#include <cmath>
#include <sstream>

#include "graspbench/types.hpp"

namespace graspbench {

GripperSpec franka_like_gripper() {
    GripperSpec g;
    g.name = "franka-like";
    g.max_opening = 0.08;
    g.min_opening = 0.0;
    g.max_force = 70.0;
    g.finger_width = 0.018;
    g.finger_thickness = 0.010;
    g.contact_patch_radius = 0.005;
    return g;
}

GripperSpec robotiq_like_gripper() {
    GripperSpec g;
    g.name = "robotiq-like";
    g.max_opening = 0.085;
    g.min_opening = 0.0;
    g.max_force = 100.0;
    g.finger_width = 0.030;
    g.finger_thickness = 0.008;  // thin pad plates, unlike the blocky franka fingers
    g.contact_patch_radius = 0.0075;
    return g;
}

void validate_grasp(const Grasp& g, const GripperSpec& gripper) {
    std::ostringstream why;
    if (!(std::isfinite(g.center.x) && std::isfinite(g.center.y) && std::isfinite(g.center.z)))
        why << "non-finite center; ";
    if (g.center.z < 0.0) why << "center below the table; ";
    if (!(g.angle >= 0.0 && g.angle < kPi)) why << "angle outside [0, pi); ";
    if (!(g.width > 0.0 && g.width <= gripper.max_opening + 1e-12))
        why << "width outside (0, max_opening]; ";
    if (!std::isfinite(g.quality)) why << "non-finite quality; ";
    std::string msg = why.str();
    if (!msg.empty()) throw ProtocolError("grasp violates invariants: " + msg);
}

}  // namespace graspbench
