#include "graspbench/bench.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "graspbench/parallel.hpp"
#include "graspbench/rng.hpp"

namespace graspbench {

std::string ExperimentConfig::effective_id() const {
    if (!id.empty()) return id;
    return planner_id + "|" + noise_profile + "|" + gripper_id;
}

BenchEnvironment default_bench_environment() {
    BenchEnvironment env;
    env.catalog = default_object_catalog();
    env.profiles = default_noise_profiles();
    env.grippers["franka"] = franka_like_gripper();
    env.grippers["robotiq"] = robotiq_like_gripper();
    return env;
}

uint64_t experiment_seed(uint64_t master_seed, const std::string& object, int pose_index,
                         int trial) {
    uint64_t h = hash_combine(0xcbf29ce484222325ULL, master_seed);
    h = stable_hash64(object, h);
    h = hash_combine(h, static_cast<uint64_t>(pose_index));
    h = hash_combine(h, static_cast<uint64_t>(trial));
    return h;
}

std::unique_ptr<Planner> make_planner(const std::string& id, const BenchEnvironment& env) {
    if (id == "topsurface") return std::make_unique<TopSurfacePlanner>(env.topsurface);
    if (id == "mask") {
        MaskPlannerParams params = env.mask;
        params.roi = env.preprocess.roi;
        return std::make_unique<MaskPlanner>(params);
    }
    if (id.rfind("external:", 0) == 0)
        return std::make_unique<ExternalPlanner>(id.substr(9), env.external);
    throw ConfigError("unknown planner '" + id + "' (topsurface, mask, external:<cmd>)");
}

Observation preprocess_observation(const DepthImage& raw, const CameraModel& camera,
                                   const PreprocessParams& params) {
    Observation obs;
    obs.camera = camera;
    obs.depth = complete_depth(raw);
    PointCloud cloud = depth_to_cloud(obs.depth, camera);
    cloud = roi_filter(cloud, params.roi);
    cloud = downsample(cloud, params.voxel);
    obs.cloud = remove_plane(cloud, params.plane_tol, params.ransac_seed,
                             params.ransac_iters)
                    .remaining;
    return obs;
}

std::vector<ExperimentRecord> run_protocol(const ExperimentConfig& config,
                                           const BenchEnvironment& env) {
    if (config.trials < 1) throw ConfigError("trials must be >= 1");
    if (config.objects.empty()) throw ConfigError("experiment needs at least one object");
    for (const std::string& name : config.objects)
        if (!env.catalog.count(name)) throw ConfigError("unknown object '" + name + "'");
    auto profile_it = env.profiles.find(config.noise_profile);
    if (profile_it == env.profiles.end())
        throw ConfigError("unknown noise profile '" + config.noise_profile + "'");
    auto gripper_it = env.grippers.find(config.gripper_id);
    if (gripper_it == env.grippers.end())
        throw ConfigError("unknown gripper '" + config.gripper_id + "'");

    std::unique_ptr<Planner> planner = make_planner(config.planner_id, env);
    const GripperSpec gripper = gripper_it->second;
    const NoiseProfile base_profile = profile_it->second;
    const auto poses = protocol_poses(config.r, config.theta);

    const size_t total = config.objects.size() * poses.size() * static_cast<size_t>(config.trials);
    std::vector<ExperimentRecord> records(total);

    parallel_for(
        total,
        [&](size_t index) {
            size_t per_object = poses.size() * static_cast<size_t>(config.trials);
            size_t oi = index / per_object;
            size_t rest = index % per_object;
            int pose_index = static_cast<int>(rest / config.trials) + 1;
            int trial = static_cast<int>(rest % config.trials) + 1;

            const ObjectModel& object = env.catalog.at(config.objects[oi]);
            const ScenePose& pose = poses[static_cast<size_t>(pose_index - 1)];

            ExperimentRecord rec;
            rec.object = object.name();
            rec.pose_index = pose_index;
            rec.trial = trial;
            try {
                NoiseProfile profile = base_profile;
                profile.seed =
                    experiment_seed(config.master_seed, object.name(), pose_index, trial);
                DepthImage rendered = render_depth(object, pose, env.camera);
                DepthImage noisy = apply_noise(rendered, profile);
                Observation obs = preprocess_observation(noisy, env.camera, env.preprocess);

                auto t0 = std::chrono::steady_clock::now();
                rec.grasp = planner->plan(obs, gripper);
                auto t1 = std::chrono::steady_clock::now();
                rec.plan_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                rec.has_grasp = true;
                rec.outcome = run_stability_test(object, pose, rec.grasp, gripper,
                                                 env.stability, &rec.failure);
            } catch (const Error& e) {
                rec.failure = e.code();
                rec.outcome = GraspOutcome{};
            } catch (const std::exception& e) {
                rec.failure = std::string("InternalError: ") + e.what();
                rec.outcome = GraspOutcome{};
            }
            records[index] = std::move(rec);
        },
        env.threads);
    return records;
}

Scores score(const std::vector<ExperimentRecord>& records) {
    if (records.empty()) throw EmptyRecords("no records to score");
    double points = 0.0;
    double lifted = 0.0;
    for (const ExperimentRecord& r : records) {
        points += r.outcome.points;
        lifted += r.outcome.lifted ? 1.0 : 0.0;
    }
    double n = static_cast<double>(records.size());
    return {points / (3.0 * n), lifted / n};
}

BenchReport build_report(const ExperimentConfig& config, std::vector<ExperimentRecord> records) {
    BenchReport report;
    report.config = config;
    report.records = std::move(records);
    Scores total = score(report.records);
    report.gs = total.gs;
    report.gss = total.gss;

    std::map<std::string, std::vector<const ExperimentRecord*>> by_object;
    for (const ExperimentRecord& r : report.records) by_object[r.object].push_back(&r);
    for (const auto& [name, recs] : by_object) {
        ObjectSummary s;
        s.records = static_cast<int>(recs.size());
        double points = 0.0, lifted = 0.0;
        for (const ExperimentRecord* r : recs) {
            points += r->outcome.points;
            lifted += r->outcome.lifted ? 1.0 : 0.0;
            if (!r->failure.empty()) ++s.failures;
        }
        s.gs = points / (3.0 * s.records);
        s.gss = lifted / s.records;
        report.per_object[name] = s;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

using Json = nlohmann::ordered_json;

Json grasp_to_json(const Grasp& g) {
    return Json{{"x_m", g.center.x}, {"y_m", g.center.y},     {"z_m", g.center.z},
                {"angle_rad", g.angle}, {"width_m", g.width}, {"quality", g.quality}};
}

Grasp grasp_from_json(const Json& j) {
    Grasp g;
    g.center = {j.at("x_m").get<double>(), j.at("y_m").get<double>(), j.at("z_m").get<double>()};
    g.angle = j.at("angle_rad").get<double>();
    g.width = j.at("width_m").get<double>();
    g.quality = j.at("quality").get<double>();
    return g;
}

Json json_of_report(const BenchReport& report) {
    Json j;
    j["version"] = report.version;
    j["config"] = Json{{"id", report.config.effective_id()},
                       {"planner", report.config.planner_id},
                       {"noise_profile", report.config.noise_profile},
                       {"gripper", report.config.gripper_id},
                       {"objects", report.config.objects},
                       {"r_m", report.config.r},
                       {"theta_rad", report.config.theta},
                       {"trials", report.config.trials},
                       {"master_seed", report.config.master_seed}};
    Json records = Json::array();
    for (const ExperimentRecord& r : report.records) {
        Json rec{{"object", r.object}, {"pose", r.pose_index}, {"trial", r.trial}};
        rec["grasp"] = r.has_grasp ? grasp_to_json(r.grasp) : Json(nullptr);
        rec["failure"] = r.failure;
        rec["outcome"] = Json{{"lifted", r.outcome.lifted},
                              {"yaw_held", r.outcome.yaw_held},
                              {"shake_held", r.outcome.shake_held},
                              {"points", r.outcome.points}};
        records.push_back(std::move(rec));
    }
    j["records"] = std::move(records);
    Json per_object = Json::object();
    for (const auto& [name, s] : report.per_object)
        per_object[name] =
            Json{{"gs", s.gs}, {"gss", s.gss}, {"records", s.records}, {"failures", s.failures}};
    j["summary"] = Json{{"gs", report.gs}, {"gss", report.gss}, {"per_object", per_object}};
    return j;
}

BenchReport report_of_json(const Json& j) {
    BenchReport report;
    report.version = j.at("version").get<std::string>();
    const Json& c = j.at("config");
    report.config.id = c.at("id").get<std::string>();
    report.config.planner_id = c.at("planner").get<std::string>();
    report.config.noise_profile = c.at("noise_profile").get<std::string>();
    report.config.gripper_id = c.at("gripper").get<std::string>();
    report.config.objects = c.at("objects").get<std::vector<std::string>>();
    report.config.r = c.at("r_m").get<double>();
    report.config.theta = c.at("theta_rad").get<double>();
    report.config.trials = c.at("trials").get<int>();
    report.config.master_seed = c.at("master_seed").get<uint64_t>();
    for (const Json& jr : j.at("records")) {
        ExperimentRecord r;
        r.object = jr.at("object").get<std::string>();
        r.pose_index = jr.at("pose").get<int>();
        r.trial = jr.at("trial").get<int>();
        if (!jr.at("grasp").is_null()) {
            r.has_grasp = true;
            r.grasp = grasp_from_json(jr.at("grasp"));
        }
        r.failure = jr.at("failure").get<std::string>();
        const Json& o = jr.at("outcome");
        r.outcome.lifted = o.at("lifted").get<bool>();
        r.outcome.yaw_held = o.at("yaw_held").get<bool>();
        r.outcome.shake_held = o.at("shake_held").get<bool>();
        r.outcome.points = o.at("points").get<int>();
        report.records.push_back(std::move(r));
    }
    const Json& s = j.at("summary");
    report.gs = s.at("gs").get<double>();
    report.gss = s.at("gss").get<double>();
    for (const auto& [name, js] : s.at("per_object").items()) {
        ObjectSummary os;
        os.gs = js.at("gs").get<double>();
        os.gss = js.at("gss").get<double>();
        os.records = js.at("records").get<int>();
        os.failures = js.at("failures").get<int>();
        report.per_object[name] = os;
    }
    return report;
}

}  // namespace

std::string report_to_json(const BenchReport& report) {
    return json_of_report(report).dump(2) + "\n";
}

BenchReport report_from_json(const std::string& text) {
    return report_of_json(Json::parse(text));
}

std::string reports_to_json(const std::vector<BenchReport>& reports) {
    Json j;
    j["version"] = kSoftwareVersion;
    Json arr = Json::array();
    for (const BenchReport& r : reports) arr.push_back(json_of_report(r));
    j["reports"] = std::move(arr);
    return j.dump(2) + "\n";
}

std::vector<BenchReport> reports_from_json(const std::string& text) {
    Json j = Json::parse(text);
    std::vector<BenchReport> out;
    for (const Json& jr : j.at("reports")) out.push_back(report_of_json(jr));
    return out;
}

std::string reports_to_csv(const std::vector<BenchReport>& reports) {
    std::string out = "config_id,object,gss,gs,records,failures\n";
    char line[256];
    for (const BenchReport& report : reports) {
        for (const auto& [name, s] : report.per_object) {
            std::snprintf(line, sizeof(line), "%s,%s,%.6f,%.6f,%d,%d\n",
                          report.config.effective_id().c_str(), name.c_str(), s.gss, s.gs,
                          s.records, s.failures);
            out += line;
        }
    }
    return out;
}

void export_report(const BenchReport& report, const std::string& format,
                   const std::string& path) {
    std::string payload;
    if (format == "json")
        payload = report_to_json(report);
    else if (format == "csv")
        payload = reports_to_csv({report});
    else
        throw ConfigError("unknown export format '" + format + "' (json, csv)");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for write: " + path);
    f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!f) throw IoError("write failed: " + path);
}

}  // namespace graspbench
