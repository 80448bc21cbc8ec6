#ifndef GRASPBENCH_BENCH_HPP
#define GRASPBENCH_BENCH_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "graspbench/external_planner.hpp"
#include "graspbench/maskgrasp.hpp"
#include "graspbench/objects.hpp"
#include "graspbench/planner.hpp"
#include "graspbench/preprocess.hpp"
#include "graspbench/scene.hpp"
#include "graspbench/stability.hpp"
#include "graspbench/topsurface.hpp"

namespace graspbench {

inline constexpr const char* kSoftwareVersion = "graspbench 0.1.0";

/// One entry of the experiment matrix.
struct ExperimentConfig {
    std::string id;  // report row label; derived from the ids when empty
    std::string planner_id = "topsurface";
    std::string noise_profile = "none";
    std::string gripper_id = "franka";
    std::vector<std::string> objects;
    double r = kProtocolRadiusDefault;
    double theta = kProtocolThetaDefault;
    int trials = 3;
    uint64_t master_seed = 0;

    std::string effective_id() const;
};

struct ExperimentRecord {
    std::string object;
    int pose_index = 1;  // 1..6
    int trial = 1;       // 1..trials
    bool has_grasp = false;
    Grasp grasp;
    std::string failure;  // stable error code; empty when the trial ran clean
    GraspOutcome outcome;
    double plan_ms = 0.0;  // in-memory diagnostic; not part of the canonical report
};

/// Everything the protocol needs besides the matrix entry itself.
struct BenchEnvironment {
    CameraModel camera;
    std::map<std::string, ObjectModel> catalog;
    std::map<std::string, NoiseProfile> profiles;
    std::map<std::string, GripperSpec> grippers;
    PreprocessParams preprocess;
    TopSurfaceParams topsurface;
    MaskPlannerParams mask;
    StabilityParams stability;
    ExternalPlannerOptions external;
    unsigned threads = 0;  // 0: GRASPBENCH_THREADS or hardware
};

BenchEnvironment default_bench_environment();

/// Stable per-experiment seed from (master_seed, object, pose, trial).
uint64_t experiment_seed(uint64_t master_seed, const std::string& object, int pose_index,
                         int trial);

/// Planner ids: "topsurface", "mask", or "external:<command>".
std::unique_ptr<Planner> make_planner(const std::string& id, const BenchEnvironment& env);

/// The paper's input-enhancement chain: depth completion, back-projection,
/// ROI filter, voxel downsampling, then dominant-plane removal.
Observation preprocess_observation(const DepthImage& raw, const CameraModel& camera,
                                   const PreprocessParams& params);

/// Runs the full matrix entry: for every (object x pose x trial) renders the
/// scene, degrades it with the seeded noise profile, preprocesses, plans,
/// and scores the grasp with the stability oracle. Per-record failures are
/// captured in the records and never abort the run.
std::vector<ExperimentRecord> run_protocol(const ExperimentConfig& config,
                                           const BenchEnvironment& env);

struct Scores {
    double gs = 0.0;
    double gss = 0.0;
};

/// GS = total points / (3 * records); GSS = lifted records / records.
Scores score(const std::vector<ExperimentRecord>& records);

struct ObjectSummary {
    double gs = 0.0;
    double gss = 0.0;
    int records = 0;
    int failures = 0;
};

struct BenchReport {
    std::string version = kSoftwareVersion;
    ExperimentConfig config;
    std::vector<ExperimentRecord> records;
    double gs = 0.0;
    double gss = 0.0;
    std::map<std::string, ObjectSummary> per_object;
};

BenchReport build_report(const ExperimentConfig& config, std::vector<ExperimentRecord> records);

// Canonical serialization: identical reports give identical bytes.
std::string report_to_json(const BenchReport& report);
BenchReport report_from_json(const std::string& text);
std::string reports_to_json(const std::vector<BenchReport>& reports);
std::vector<BenchReport> reports_from_json(const std::string& text);
std::string reports_to_csv(const std::vector<BenchReport>& reports);

/// format: "json" or "csv".
void export_report(const BenchReport& report, const std::string& format,
                   const std::string& path);

}  // namespace graspbench

#endif
