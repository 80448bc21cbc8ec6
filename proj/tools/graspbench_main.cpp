// graspbench command-line tool: synthetic scene generation, grasp planning,
// and the full scored benchmarking protocol.
//
// Exit codes: 0 ok, 1 IO/config failure, 2 usage error, 3 no grasp found.

#include <sys/stat.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "graspbench/bench.hpp"
#include "graspbench/config.hpp"
#include "graspbench/io.hpp"

namespace gb = graspbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoGrasp = 3;

std::string catalog_listing(const gb::RunConfig& config) {
    std::string out;
    for (const auto& [name, obj] : config.env.catalog) out += "  " + name + "\n";
    return out;
}

gb::RunConfig load_or_default(const std::string& path) {
    if (path.empty()) return gb::default_run_config();
    return gb::load_run_config(path);
}

int cmd_scene(const std::string& config_path, const std::string& object_name, int pose_index,
              const std::string& profile_name, uint64_t seed, const std::string& out_path,
              const std::string& ply_path) {
    gb::RunConfig config = load_or_default(config_path);
    auto obj_it = config.env.catalog.find(object_name);
    if (obj_it == config.env.catalog.end()) {
        std::cerr << "unknown object '" << object_name << "'; catalog:\n"
                  << catalog_listing(config);
        return kExitUsage;
    }
    auto prof_it = config.env.profiles.find(profile_name);
    if (prof_it == config.env.profiles.end()) {
        std::cerr << "unknown noise profile '" << profile_name << "'\n";
        return kExitUsage;
    }
    if (pose_index < 1 || pose_index > 6) {
        std::cerr << "pose index must be in 1..6\n";
        return kExitUsage;
    }

    auto poses = gb::protocol_poses(config.protocol_r, config.protocol_theta);
    gb::NoiseProfile profile = prof_it->second;
    profile.seed = seed;
    gb::DepthImage depth =
        gb::render_depth(obj_it->second, poses[static_cast<size_t>(pose_index - 1)], config.env.camera);
    depth = gb::apply_noise(depth, profile);
    gb::write_gbd1(out_path, depth, config.env.camera.standoff);
    if (!ply_path.empty())
        gb::write_ply(ply_path, gb::depth_to_cloud(depth, config.env.camera));
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

int cmd_plan(const std::string& config_path, const std::string& algo,
             const std::string& in_path, const std::string& gripper_name) {
    gb::RunConfig config = load_or_default(config_path);
    auto grip_it = config.env.grippers.find(gripper_name);
    if (grip_it == config.env.grippers.end()) {
        std::cerr << "unknown gripper '" << gripper_name << "'\n";
        return kExitUsage;
    }

    double standoff = config.env.camera.standoff;
    gb::DepthImage raw = gb::read_gbd1(in_path, &standoff);
    gb::CameraModel camera = config.env.camera;
    camera.standoff = standoff;
    if (raw.width != camera.width || raw.height != camera.height) {
        // scene from another raster: keep the focal lengths, recenter
        camera.width = raw.width;
        camera.height = raw.height;
        camera.cx = raw.width / 2.0 - 0.5;
        camera.cy = raw.height / 2.0 - 0.5;
    }

    gb::Observation obs = gb::preprocess_observation(raw, camera, config.env.preprocess);
    auto planner = gb::make_planner(algo, config.env);
    try {
        gb::Grasp g = planner->plan(obs, grip_it->second);
        nlohmann::ordered_json resp{{"type", "grasp"},       {"x_m", g.center.x},
                                    {"y_m", g.center.y},     {"z_m", g.center.z},
                                    {"angle_rad", g.angle},  {"width_m", g.width},
                                    {"quality", g.quality}};
        std::cout << resp.dump() << "\n";
    } catch (const gb::NoGraspFound& e) {
        nlohmann::ordered_json resp{{"type", "error"}, {"message", e.what()}};
        std::cout << resp.dump() << "\n";
        return kExitNoGrasp;
    }
    return kExitOk;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir_override,
              bool dry_run) {
    gb::RunConfig config = load_or_default(config_path);
    if (!out_dir_override.empty()) config.output_dir = out_dir_override;
    std::vector<gb::ExperimentConfig> matrix = config.matrix();

    if (dry_run) {
        std::cout << "planned matrix (" << matrix.size() << " entries):\n";
        for (const auto& entry : matrix)
            std::cout << "  " << entry.effective_id() << ": " << entry.objects.size()
                      << " objects x 6 poses x " << entry.trials << " trials = "
                      << entry.objects.size() * 6 * static_cast<size_t>(entry.trials)
                      << " records\n";
        return kExitOk;
    }

    ::mkdir(config.output_dir.c_str(), 0755);

    std::vector<gb::BenchReport> reports;
    auto t0 = std::chrono::steady_clock::now();
    for (const auto& entry : matrix) {
        auto records = gb::run_protocol(entry, config.env);
        reports.push_back(gb::build_report(entry, std::move(records)));
    }
    auto t1 = std::chrono::steady_clock::now();

    std::string json_path = config.output_dir + "/report.json";
    std::string csv_path = config.output_dir + "/report.csv";
    {
        std::ofstream f(json_path, std::ios::binary);
        if (!f) throw gb::IoError("cannot open for write: " + json_path);
        f << gb::reports_to_json(reports);
    }
    {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw gb::IoError("cannot open for write: " + csv_path);
        f << gb::reports_to_csv(reports);
    }

    std::printf("%-36s %8s %8s %8s %9s\n", "config", "GSS", "GS", "records", "failures");
    for (const auto& report : reports) {
        int failures = 0;
        for (const auto& [name, s] : report.per_object) failures += s.failures;
        std::printf("%-36s %8.3f %8.3f %8zu %9d\n", report.config.effective_id().c_str(),
                    report.gss, report.gs, report.records.size(), failures);
    }
    double secs = std::chrono::duration<double>(t1 - t0).count();
    std::printf("wrote %s and %s (%.1f s)\n", json_path.c_str(), csv_path.c_str(), secs);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic grasp-planning benchmark"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "run configuration file")->capture_default_str();

    auto* scene = app.add_subcommand("scene", "render a depth scene to a GBD1 file");
    std::string scene_object = "ball", scene_profile = "none", scene_out, scene_ply;
    int scene_pose = 1;
    uint64_t scene_seed = 0;
    scene->add_option("--object", scene_object, "catalog object name")->capture_default_str();
    scene->add_option("--pose", scene_pose, "protocol pose index 1..6")->capture_default_str();
    scene->add_option("--profile", scene_profile, "noise profile name")->capture_default_str();
    scene->add_option("--seed", scene_seed, "noise seed")->capture_default_str();
    scene->add_option("-o,--out", scene_out, "output GBD1 path")->required();
    scene->add_option("--ply", scene_ply, "also write the back-projected cloud as PLY");

    auto* plan = app.add_subcommand("plan", "plan a grasp for a GBD1 scene");
    std::string plan_algo = "topsurface", plan_in, plan_gripper = "franka";
    plan->add_option("--algo", plan_algo, "topsurface | mask | external:<cmd>")
        ->capture_default_str();
    plan->add_option("-i,--in", plan_in, "input GBD1 path")->required();
    plan->add_option("--gripper", plan_gripper, "gripper id")->capture_default_str();

    auto* bench = app.add_subcommand("bench", "run the benchmark matrix and write reports");
    std::string bench_out;
    bool bench_dry = false;
    bench->add_option("-o,--out-dir", bench_out, "output directory (overrides config)");
    bench->add_flag("--dry-run", bench_dry, "print the planned matrix and write nothing");

    auto* dump = app.add_subcommand("dump-config", "print the effective configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (scene->parsed())
            return cmd_scene(config_path, scene_object, scene_pose, scene_profile, scene_seed,
                             scene_out, scene_ply);
        if (plan->parsed()) return cmd_plan(config_path, plan_algo, plan_in, plan_gripper);
        if (bench->parsed()) return cmd_bench(config_path, bench_out, bench_dry);
        if (dump->parsed()) {
            std::cout << gb::dump_run_config(load_or_default(config_path));
            return kExitOk;
        }
    } catch (const gb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return plan->parsed() || scene->parsed() ? kExitUsage : kExitIo;
    } catch (const gb::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const gb::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
