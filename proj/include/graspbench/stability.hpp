#ifndef GRASPBENCH_STABILITY_HPP
#define GRASPBENCH_STABILITY_HPP

#include <string>

#include "graspbench/objects.hpp"
#include "graspbench/scene.hpp"
#include "graspbench/types.hpp"

namespace graspbench {

/// Two finger contacts on the object cross-section at the grasp height,
/// expressed in the object frame (the physics is frame-invariant).
struct Contact {
    Vec2 point;
    Vec2 normal;  // unit, outward surface normal
    double patch_radius = 0.0;
};

struct ContactSet {
    Contact first;
    Contact second;
    double z = 0.0;           // cross-section height
    Vec2 closing_dir{1, 0};   // unit squeeze direction, first pad -> second pad
};

/// Outcome of the three-stage protocol test. Stages are sequential: a later
/// stage can only pass if every earlier one did, and points counts the
/// passed stages.
struct GraspOutcome {
    bool lifted = false;
    bool yaw_held = false;
    bool shake_held = false;
    int points = 0;
};

inline GraspOutcome make_outcome(bool lifted, bool yaw, bool shake) {
    GraspOutcome o;
    o.lifted = lifted;
    o.yaw_held = lifted && yaw;
    o.shake_held = o.yaw_held && shake;
    o.points = (o.lifted ? 1 : 0) + (o.yaw_held ? 1 : 0) + (o.shake_held ? 1 : 0);
    return o;
}

/// Load factors standing in for the physical 40 cm lift, +/-45 deg yaw and
/// +/-45 deg pitch shake; calibration knobs, surfaced in config. The
/// ordering of difficulty (lift < yaw < shake) is what matters.
struct StabilityParams {
    double k_lift = 1.2;
    double k_yaw = 1.5;
    double k_shake = 2.0;
};

/// Closes the fingers along the grasp axis against the analytic
/// cross-section and reports where they land. Throws MissedObject (axis or
/// opening misses the object), Collision (finger bodies at the commanded
/// opening intersect the object), or WidthExceeded (object span along the
/// axis exceeds the commanded opening).
ContactSet realize_contacts(const ObjectModel& object, const ScenePose& pose, const Grasp& grasp,
                            const GripperSpec& gripper);

enum class Stage { lift, yaw, shake };

/// Quasi-static sufficiency test with squeeze force F = max_force per
/// finger:
///   lift  — tangential capacity 2*mu*F >= k_lift*m*g and the antipodal
///           friction-cone condition;
///   yaw   — lift plus torsional capacity 2*mu*F*patch >= k_yaw*m*g*d_off,
///           d_off = horizontal distance from the grasp axis to the
///           centroid;
///   shake — the lift inequality with k_shake.
bool stage_check(const ContactSet& contacts, const ObjectModel& object,
                 const GripperSpec& gripper, Stage stage, const StabilityParams& params = {});

/// Full protocol test: realize contacts (errors fold into a zero-point
/// outcome; the code lands in failure_reason when given), then evaluate
/// lift, yaw, shake in order, stopping at the first failure.
GraspOutcome run_stability_test(const ObjectModel& object, const ScenePose& pose,
                                const Grasp& grasp, const GripperSpec& gripper,
                                const StabilityParams& params = {},
                                std::string* failure_reason = nullptr);

}  // namespace graspbench

#endif
