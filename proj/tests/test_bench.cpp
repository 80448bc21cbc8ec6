#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "graspbench/bench.hpp"
#include "graspbench/config.hpp"
#include "graspbench/rng.hpp"

using namespace graspbench;

#ifndef ECHO_PLANNER_PATH
#define ECHO_PLANNER_PATH "./echo_planner"
#endif

namespace {
ExperimentConfig small_config() {
    ExperimentConfig c;
    c.planner_id = "topsurface";
    c.noise_profile = "realsense@60lux";
    c.gripper_id = "franka";
    c.objects = {"ball", "banana"};
    c.trials = 2;
    c.master_seed = 99;
    return c;
}
}  // namespace

TEST_CASE("run_protocol emits objects x 6 x trials records") {
    BenchEnvironment env = default_bench_environment();
    ExperimentConfig config = small_config();
    auto records = run_protocol(config, env);
    CHECK(records.size() == 2 * 6 * 2);
    for (const auto& r : records) {
        CHECK(r.pose_index >= 1);
        CHECK(r.pose_index <= 6);
        CHECK(r.trial >= 1);
        CHECK(r.trial <= 2);
    }
}

TEST_CASE("same master seed reproduces the record list bit for bit") {
    BenchEnvironment env = default_bench_environment();
    ExperimentConfig config = small_config();
    config.objects = {"ball"};
    auto a = run_protocol(config, env);
    auto b = run_protocol(config, env);
    BenchReport ra = build_report(config, a);
    BenchReport rb = build_report(config, b);
    CHECK(report_to_json(ra) == report_to_json(rb));
}

TEST_CASE("failing planner still yields complete zero-point records") {
    BenchEnvironment env = default_bench_environment();
    ExperimentConfig config;
    config.planner_id = std::string("external:") + ECHO_PLANNER_PATH + " error";
    config.objects = {"ball"};
    config.trials = 1;
    auto records = run_protocol(config, env);
    CHECK(records.size() == 6);
    for (const auto& r : records) {
        CHECK(r.outcome.points == 0);
        CHECK(r.failure == "RemoteFailure");
        CHECK_FALSE(r.has_grasp);
    }
    // scoring still works
    Scores s = score(records);
    CHECK(s.gs == 0.0);
    CHECK(s.gss == 0.0);
}

TEST_CASE("seed isolation: the trial count does not disturb earlier trials") {
    BenchEnvironment env = default_bench_environment();
    ExperimentConfig one = small_config();
    one.objects = {"ball"};
    one.trials = 1;
    ExperimentConfig two = one;
    two.trials = 2;
    auto r1 = run_protocol(one, env);
    auto r2 = run_protocol(two, env);
    REQUIRE(r1.size() == 6);
    REQUIRE(r2.size() == 12);
    for (size_t pose = 0; pose < 6; ++pose) {
        const auto& a = r1[pose * 1];
        const auto& b = r2[pose * 2];  // trial 1 of each pose
        REQUIRE(a.pose_index == b.pose_index);
        REQUIRE(a.trial == 1);
        REQUIRE(b.trial == 1);
        CHECK(a.has_grasp == b.has_grasp);
        if (a.has_grasp) {
            CHECK(a.grasp.center.x == b.grasp.center.x);
            CHECK(a.grasp.angle == b.grasp.angle);
        }
        CHECK(a.outcome.points == b.outcome.points);
    }
}

// ---------------------------------------------------------------------------
// Scoring arithmetic
// ---------------------------------------------------------------------------

namespace {
ExperimentRecord record_with_points(int points, const std::string& object = "obj",
                                    int pose = 1) {
    ExperimentRecord r;
    r.object = object;
    r.pose_index = pose;
    r.outcome = make_outcome(points >= 1, points >= 2, points >= 3);
    return r;
}
}  // namespace

TEST_CASE("score: all-perfect records give GS 1 and GSS 1") {
    std::vector<ExperimentRecord> records(10, record_with_points(3));
    Scores s = score(records);
    CHECK(s.gs == 1.0);
    CHECK(s.gss == 1.0);
}

TEST_CASE("score: lifted-only records give GS 1/3, GSS 1") {
    std::vector<ExperimentRecord> records(60, record_with_points(1));
    Scores s = score(records);
    CHECK(s.gs == doctest::Approx(1.0 / 3.0));
    CHECK(s.gss == 1.0);
}

TEST_CASE("score: the {3,3,3,3,3,0} pose set gives 15/18 and 5/6") {
    std::vector<ExperimentRecord> records;
    for (int pose = 1; pose <= 5; ++pose) records.push_back(record_with_points(3, "obj", pose));
    records.push_back(record_with_points(0, "obj", 6));
    Scores s = score(records);
    CHECK(s.gs == doctest::Approx(15.0 / 18.0));
    CHECK(s.gss == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("score: empty record list throws") {
    CHECK_THROWS_AS(score({}), EmptyRecords);
}

TEST_CASE("GS <= GSS and permutation invariance on random record sets") {
    Rng rng(314);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<ExperimentRecord> records;
        size_t n = 1 + rng.next_below(50);
        for (size_t i = 0; i < n; ++i)
            records.push_back(record_with_points(static_cast<int>(rng.next_below(4))));
        Scores s = score(records);
        CHECK(s.gs <= s.gss + 1e-12);

        std::vector<ExperimentRecord> shuffled = records;
        std::mt19937 gen(7);
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        Scores s2 = score(shuffled);
        CHECK(s.gs == s2.gs);
        CHECK(s.gss == s2.gss);
    }
}

TEST_CASE("per-experiment seeds are stable and isolated") {
    uint64_t a = experiment_seed(42, "ball", 1, 1);
    CHECK(experiment_seed(42, "ball", 1, 1) == a);
    CHECK(experiment_seed(42, "ball", 1, 2) != a);
    CHECK(experiment_seed(42, "ball", 2, 1) != a);
    CHECK(experiment_seed(42, "pear", 1, 1) != a);
    CHECK(experiment_seed(43, "ball", 1, 1) != a);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

namespace {
BenchReport sample_report() {
    ExperimentConfig config = small_config();
    config.objects = {"obj"};
    std::vector<ExperimentRecord> records;
    for (int pose = 1; pose <= 6; ++pose) {
        ExperimentRecord r = record_with_points(pose % 4, "obj", pose);
        r.trial = 1;
        if (pose % 4 != 0) {
            r.has_grasp = true;
            r.grasp.center = {0.01 * pose, -0.02, 0.03};
            r.grasp.angle = 0.3;
            r.grasp.width = 0.05;
            r.grasp.quality = 0.9;
        } else {
            r.failure = "NoGraspFound";
        }
        records.push_back(r);
    }
    return build_report(config, records);
}
}  // namespace

TEST_CASE("report JSON round trip preserves everything") {
    BenchReport report = sample_report();
    std::string text = report_to_json(report);
    BenchReport back = report_from_json(text);
    CHECK(report_to_json(back) == text);
    CHECK(back.gs == report.gs);
    CHECK(back.gss == report.gss);
    CHECK(back.records.size() == report.records.size());
    CHECK(back.per_object.at("obj").failures == report.per_object.at("obj").failures);
    CHECK(back.config.master_seed == report.config.master_seed);
}

TEST_CASE("summary scores come from the same records") {
    BenchReport report = sample_report();
    Scores s = score(report.records);
    CHECK(report.gs == s.gs);
    CHECK(report.gss == s.gss);
    CHECK(report.gs <= report.gss + 1e-12);
}

TEST_CASE("CSV has one row per (config, object) with gss,gs columns") {
    BenchReport a = sample_report();
    BenchReport b = sample_report();
    b.config.planner_id = "mask";
    std::string csv = reports_to_csv({a, b});
    CHECK(csv.rfind("config_id,object,gss,gs,records,failures\n", 0) == 0);
    size_t rows = static_cast<size_t>(std::count(csv.begin(), csv.end(), '\n'));
    CHECK(rows == 3);  // header + one row per (config, object)
    CHECK(csv.find("topsurface|realsense@60lux|franka,obj,") != std::string::npos);
    CHECK(csv.find("mask|realsense@60lux|franka,obj,") != std::string::npos);
}

TEST_CASE("export_report writes json and csv files") {
    BenchReport report = sample_report();
    export_report(report, "json", "/tmp/gb_test_report.json");
    export_report(report, "csv", "/tmp/gb_test_report.csv");
    CHECK_THROWS_AS(export_report(report, "xml", "/tmp/x"), ConfigError);
    std::ifstream jf("/tmp/gb_test_report.json");
    std::stringstream ss;
    ss << jf.rdbuf();
    CHECK(report_to_json(report_from_json(ss.str())) == report_to_json(report));
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

TEST_CASE("config: dump and reparse round trip") {
    RunConfig config = default_run_config();
    std::string text = dump_run_config(config);
    RunConfig back = parse_run_config(text);
    CHECK(dump_run_config(back) == text);
}

TEST_CASE("config: unknown keys are rejected") {
    CHECK_THROWS_AS(parse_run_config("no_such_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("topsurface.bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("gripper.franka.bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("object.ball.bogus = 1\n"), ConfigError);
}

TEST_CASE("config: malformed values are rejected") {
    CHECK_THROWS_AS(parse_run_config("protocol.trials = banana\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("preprocess.roi = 1 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("bench.objects = not_an_object\n"), ConfigError);
}

TEST_CASE("config: overrides land in the environment") {
    std::string text =
        "protocol.trials = 5\n"
        "camera.fx = 500\n"
        "stability.k_shake = 3.5\n"
        "object.cube.mass_kg = 0.2\n"
        "object.cube.mu = 0.6\n"
        "object.cube.primitive.1 = box 0 0 0.03 0.03 0.03 0.03 0\n"
        "noise.custom.sigma_z_m = 0.002\n"
        "noise.custom.dropout = 0.01\n";
    RunConfig config = parse_run_config(text);
    CHECK(config.trials == 5);
    CHECK(config.env.camera.fx == 500.0);
    CHECK(config.env.stability.k_shake == 3.5);
    REQUIRE(config.env.catalog.count("cube") == 1);
    CHECK(config.env.catalog.at("cube").mass() == 0.2);
    CHECK(config.env.catalog.at("cube").height() == doctest::Approx(0.06));
    REQUIRE(config.env.profiles.count("custom") == 1);
    CHECK(config.env.profiles.at("custom").sigma_z == 0.002);
}

TEST_CASE("config: matrix enumerates planner x profile x gripper") {
    RunConfig config = default_run_config();
    config.planners = {"topsurface", "mask"};
    config.profiles = {"none", "zed"};
    config.grippers = {"franka"};
    auto matrix = config.matrix();
    CHECK(matrix.size() == 4);
    CHECK(matrix[0].effective_id() == "topsurface|none|franka");
    for (const auto& entry : matrix) CHECK(entry.objects.size() == config.env.catalog.size());
}
