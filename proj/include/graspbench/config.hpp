#ifndef GRASPBENCH_CONFIG_HPP
#define GRASPBENCH_CONFIG_HPP

#include <string>
#include <vector>

#include "graspbench/bench.hpp"

namespace graspbench {

/// Full run configuration: the experiment matrix plus every tunable the
/// pipeline exposes. Files are flat `key = value` text with '#' comments;
/// unknown keys are rejected. `graspbench dump-config` prints every default
/// in the same format.
struct RunConfig {
    BenchEnvironment env;
    std::vector<std::string> planners = {"topsurface", "mask"};
    std::vector<std::string> profiles = {"none"};
    std::vector<std::string> grippers = {"franka"};
    std::vector<std::string> objects;  // empty: whole catalog
    double protocol_r = kProtocolRadiusDefault;
    double protocol_theta = kProtocolThetaDefault;
    int trials = 3;
    uint64_t master_seed = 17;
    std::string output_dir = "out";

    std::vector<std::string> effective_objects() const;
    /// One ExperimentConfig per (planner x profile x gripper).
    std::vector<ExperimentConfig> matrix() const;
};

RunConfig default_run_config();

/// Defaults overlaid with the file's keys. Throws ConfigError on unknown
/// keys or malformed values.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& text);

std::string dump_run_config(const RunConfig& config);

}  // namespace graspbench

#endif
