#ifndef GRASPBENCH_EXTERNAL_PLANNER_HPP
#define GRASPBENCH_EXTERNAL_PLANNER_HPP

#include <string>

#include "graspbench/planner.hpp"

namespace graspbench {

struct ExternalPlannerOptions {
    double timeout_seconds = 10.0;
    /// When false, a response angle outside [0, pi) is a ProtocolError; when
    /// true it is normalized.
    bool allow_angle_normalization = false;
};

/// Runs `command` as a subprocess speaking the newline-delimited JSON wire
/// protocol: one request line on stdin, one response line on stdout.
///
/// request:  {"type":"plan","width":W,"height":H,"fx":..,"fy":..,"cx":..,
///            "cy":..,"standoff_m":..,"max_opening_m":..,"depth_b64":"..."}
/// response: {"type":"grasp","x_m":..,"y_m":..,"z_m":..,"angle_rad":..,
///            "width_m":..,"quality":..}
///        or {"type":"error","message":"..."}
///
/// Throws ProtocolError (malformed or invariant-violating response), Timeout
/// (no response within the deadline), RemoteFailure (planner-reported
/// error).
Grasp external_plan(const std::string& command, const Observation& obs,
                    const GripperSpec& gripper, const ExternalPlannerOptions& options = {});

std::string build_plan_request(const Observation& obs, const GripperSpec& gripper);

/// Parses and validates a response line into a Grasp.
Grasp parse_plan_response(const std::string& line, const GripperSpec& gripper,
                          const ExternalPlannerOptions& options);

class ExternalPlanner : public Planner {
public:
    ExternalPlanner(std::string command, ExternalPlannerOptions options = {})
        : command_(std::move(command)), options_(options) {}

    std::string name() const override { return "external:" + command_; }
    Grasp plan(const Observation& obs, const GripperSpec& gripper) const override {
        return external_plan(command_, obs, gripper, options_);
    }

private:
    std::string command_;
    ExternalPlannerOptions options_;
};

}  // namespace graspbench

#endif
