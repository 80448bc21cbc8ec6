#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "graspbench/rng.hpp"
#include "graspbench/stability.hpp"

using namespace graspbench;

namespace {

ObjectModel cylinder_object(double r, double height, double mass, double mu) {
    return ObjectModel("cyl", {CylinderSolid{{0, 0}, 0.0, height, r, r, 0.0}}, mass, mu);
}

Grasp make_grasp(double x, double y, double z, double angle, double width) {
    Grasp g;
    g.center = {x, y, z};
    g.angle = normalize_grasp_angle(angle);
    g.width = width;
    g.quality = 1.0;
    return g;
}

ContactSet diametral_contacts(double r, double patch = 0.005) {
    ContactSet c;
    c.first = {{-r, 0.0}, {-1.0, 0.0}, patch};
    c.second = {{r, 0.0}, {1.0, 0.0}, patch};
    c.closing_dir = {1.0, 0.0};
    c.z = 0.01;
    return c;
}

}  // namespace

TEST_CASE("diametral grasp on a cylinder lands radial contacts") {
    ObjectModel cyl = cylinder_object(0.02, 0.05, 0.1, 0.5);
    Grasp g = make_grasp(0, 0, 0.025, 0.0, 0.06);
    ContactSet c = realize_contacts(cyl, {0, 0, 0}, g, franka_like_gripper());
    CHECK(c.first.point.x == doctest::Approx(-0.02).epsilon(1e-5));
    CHECK(std::abs(c.first.point.y) < 1e-6);
    CHECK(c.second.point.x == doctest::Approx(0.02).epsilon(1e-5));
    CHECK(c.first.normal.x == doctest::Approx(-1.0).epsilon(1e-5));
    CHECK(c.second.normal.x == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("grasp far from the object misses") {
    ObjectModel cyl = cylinder_object(0.015, 0.05, 0.1, 0.5);
    Grasp g = make_grasp(0.05, 0.0, 0.025, kPi / 2, 0.06);
    CHECK_THROWS_AS(realize_contacts(cyl, {0, 0, 0}, g, franka_like_gripper()), MissedObject);
}

TEST_CASE("commanded width narrower than the object is WidthExceeded") {
    ObjectModel cube("cube", {BoxSolid{{0, 0, 0.03}, {0.03, 0.03, 0.03}, 0.0}}, 0.1, 0.5);
    Grasp g = make_grasp(0, 0, 0.03, 0.0, 0.05);
    CHECK_THROWS_AS(realize_contacts(cube, {0, 0, 0}, g, franka_like_gripper()), WidthExceeded);
}

TEST_CASE("finger body intersecting the object is a Collision") {
    ObjectModel cube("cube", {BoxSolid{{0, 0, 0.03}, {0.03, 0.03, 0.03}, 0.0}}, 0.1, 0.5);
    // off-center so the left finger descends onto material
    Grasp g = make_grasp(0.012, 0.0, 0.03, 0.0, 0.062);
    CHECK_THROWS_AS(realize_contacts(cube, {0, 0, 0}, g, franka_like_gripper()), Collision);
}

TEST_CASE("grasp height above the object misses") {
    ObjectModel cyl = cylinder_object(0.02, 0.04, 0.1, 0.5);
    Grasp g = make_grasp(0, 0, 0.08, 0.0, 0.06);
    CHECK_THROWS_AS(realize_contacts(cyl, {0, 0, 0}, g, franka_like_gripper()), MissedObject);
}

TEST_CASE("pose transform: contacts realized in the object frame") {
    ObjectModel cube("cube", {BoxSolid{{0, 0, 0.02}, {0.02, 0.04, 0.02}, 0.0}}, 0.1, 0.5);
    ScenePose pose{0.1, -0.05, kPi / 4};
    // close across the 0.04-wide dimension, axis rotated with the pose
    Grasp g = make_grasp(0.1, -0.05, 0.02, normalize_grasp_angle(kPi / 4), 0.06);
    ContactSet c = realize_contacts(cube, pose, g, franka_like_gripper());
    // in the object frame the closing axis is +x
    CHECK(std::abs(c.first.point.x - (-0.02)) < 1e-5);
    CHECK(std::abs(c.second.point.x - 0.02) < 1e-5);
}

// ---------------------------------------------------------------------------
// Stage checks
// ---------------------------------------------------------------------------

TEST_CASE("massless object passes every stage") {
    ObjectModel feather = cylinder_object(0.02, 0.05, 1e-9, 0.5);
    ContactSet c = diametral_contacts(0.02);
    CHECK(stage_check(c, feather, franka_like_gripper(), Stage::lift));
    CHECK(stage_check(c, feather, franka_like_gripper(), Stage::yaw));
    CHECK(stage_check(c, feather, franka_like_gripper(), Stage::shake));
}

TEST_CASE("capacity boundary: m*g = 2*mu*F exactly") {
    GripperSpec gripper = franka_like_gripper();
    const double mu = 0.5;
    double mass = 2.0 * mu * gripper.max_force / kGravity;
    ObjectModel heavy = cylinder_object(0.02, 0.05, mass, mu);
    ContactSet c = diametral_contacts(0.02);

    StabilityParams exact{1.0, 1.5, 2.0};  // k_lift = 1: boundary holds with >=
    CHECK(stage_check(c, heavy, gripper, Stage::lift, exact));
    CHECK_FALSE(stage_check(c, heavy, gripper, Stage::shake, exact));  // k_shake = 2
}

TEST_CASE("centroid-aligned grasp makes yaw equivalent to lift") {
    ObjectModel cyl = cylinder_object(0.02, 0.05, 0.5, 0.5);
    ContactSet c = diametral_contacts(0.02);  // through the centroid: d_off = 0
    StabilityParams params;
    CHECK(stage_check(c, cyl, franka_like_gripper(), Stage::lift, params) ==
          stage_check(c, cyl, franka_like_gripper(), Stage::yaw, params));
}

TEST_CASE("cone violation fails the lift") {
    ObjectModel slick = cylinder_object(0.02, 0.05, 0.05, 0.2);  // narrow cone
    ContactSet c = diametral_contacts(0.02);
    // tilt the normals well outside atan(0.2) ~ 11 deg
    c.first.normal = Vec2{-1.0, 0.6}.normalized();
    c.second.normal = Vec2{1.0, -0.6}.normalized();
    CHECK_FALSE(stage_check(c, slick, franka_like_gripper(), Stage::lift));
}

// ---------------------------------------------------------------------------
// Full protocol test
// ---------------------------------------------------------------------------

TEST_CASE("good diametral grasp on a light ball earns 3 points") {
    ObjectModel ball("ball", {SphereSolid{{0, 0, 0.03}, 0.03}}, 0.058, 0.6);
    Grasp g = make_grasp(0, 0, 0.035, 0.3, 0.07);
    GraspOutcome out = run_stability_test(ball, {0, 0, 0}, g, franka_like_gripper());
    CHECK(out.lifted);
    CHECK(out.yaw_held);
    CHECK(out.shake_held);
    CHECK(out.points == 3);
}

TEST_CASE("off-centroid grasp on the heavy analog lifts but fails the yaw") {
    // tall heavy box; grasp near one end so the torque arm is large
    ObjectModel heavy("heavy", {BoxSolid{{0, 0, 0.075}, {0.048, 0.029, 0.075}, 0.0}}, 0.603,
                      0.45);
    Grasp g = make_grasp(0.044, 0.0, 0.05, kPi / 2, 0.068);
    std::string why;
    GraspOutcome out = run_stability_test(heavy, {0, 0, 0}, g, franka_like_gripper(), {}, &why);
    CHECK(out.lifted);
    CHECK_FALSE(out.yaw_held);
    CHECK(out.points == 1);
}

TEST_CASE("missed grasp folds into a zero-point outcome with the failure code") {
    ObjectModel ball("ball", {SphereSolid{{0, 0, 0.03}, 0.03}}, 0.058, 0.6);
    Grasp g = make_grasp(0.2, 0.2, 0.03, 0.0, 0.06);
    std::string why;
    GraspOutcome out = run_stability_test(ball, {0, 0, 0}, g, franka_like_gripper(), {}, &why);
    CHECK(out.points == 0);
    CHECK_FALSE(out.lifted);
    CHECK(why == "MissedObject");
}

TEST_CASE("stage nesting holds across random scenarios") {
    Rng rng(2024);
    ObjectModel ball("ball", {SphereSolid{{0, 0, 0.03}, 0.03}}, 0.058, 0.6);
    for (int i = 0; i < 60; ++i) {
        Grasp g = make_grasp(rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05),
                             rng.uniform(0.005, 0.07), rng.uniform(0, kPi),
                             rng.uniform(0.02, 0.08));
        GraspOutcome out = run_stability_test(ball, {0, 0, 0}, g, franka_like_gripper());
        if (out.yaw_held) CHECK(out.lifted);
        if (out.shake_held) CHECK(out.yaw_held);
        CHECK(out.points == (out.lifted ? 1 : 0) + (out.yaw_held ? 1 : 0) +
                                (out.shake_held ? 1 : 0));
    }
}

TEST_CASE("mass monotonicity: heavier never scores more for fixed contacts") {
    ContactSet c = diametral_contacts(0.02);
    GripperSpec gripper = franka_like_gripper();
    int prev_points = 3;
    for (double mass : {0.05, 0.5, 2.0, 5.0, 8.0, 12.0}) {
        ObjectModel obj = cylinder_object(0.02, 0.05, mass, 0.5);
        int points = 0;
        bool lift = stage_check(c, obj, gripper, Stage::lift);
        bool yaw = lift && stage_check(c, obj, gripper, Stage::yaw);
        bool shake = yaw && stage_check(c, obj, gripper, Stage::shake);
        points = (lift ? 1 : 0) + (yaw ? 1 : 0) + (shake ? 1 : 0);
        CHECK(points <= prev_points);
        prev_points = points;
    }
}

TEST_CASE("friction monotonicity: more friction never scores less") {
    ContactSet c = diametral_contacts(0.02);
    // slightly tilted normals so low mu fails the cone
    c.first.normal = Vec2{-1.0, 0.25}.normalized();
    c.second.normal = Vec2{1.0, -0.25}.normalized();
    GripperSpec gripper = franka_like_gripper();
    int prev_points = 0;
    for (double mu : {0.1, 0.3, 0.5, 0.8, 1.2}) {
        ObjectModel obj = cylinder_object(0.02, 0.05, 1.5, mu);
        bool lift = stage_check(c, obj, gripper, Stage::lift);
        bool yaw = lift && stage_check(c, obj, gripper, Stage::yaw);
        bool shake = yaw && stage_check(c, obj, gripper, Stage::shake);
        int points = (lift ? 1 : 0) + (yaw ? 1 : 0) + (shake ? 1 : 0);
        CHECK(points >= prev_points);
        prev_points = points;
    }
}

TEST_CASE("isotropy: rotating object and grasp together changes nothing") {
    ObjectModel banana("banana",
                       {SweptArcSolid{{0, 0, 0.018}, {1, 0, 0}, {0, 1, 0}, 0.060,
                                      20.0 * kPi / 180.0, 160.0 * kPi / 180.0, 0.018}},
                       0.066, 0.45);
    // a grasp across the mid-arc tube in the object frame
    Vec2 local_center{0.0, 0.06};
    double local_angle = kPi / 2;
    Rng rng(8);
    GraspOutcome base;
    for (int i = 0; i < 8; ++i) {
        double yaw = i == 0 ? 0.0 : rng.uniform(0, 2 * kPi);
        ScenePose pose{0.05, -0.02, yaw};
        Vec2 world_center = local_center.rotated(yaw) + Vec2{pose.x, pose.y};
        Grasp g = make_grasp(world_center.x, world_center.y, 0.024,
                             normalize_grasp_angle(local_angle + yaw), 0.05);
        GraspOutcome out = run_stability_test(banana, pose, g, franka_like_gripper());
        if (i == 0) {
            base = out;
            CHECK(out.lifted);  // sanity: this is a good grasp
        } else {
            CHECK(out.lifted == base.lifted);
            CHECK(out.yaw_held == base.yaw_held);
            CHECK(out.shake_held == base.shake_held);
        }
    }
}

TEST_CASE("wider pads tolerate an off-axis grasp that narrow pads cannot") {
    // ball grasped 8 mm off its vertical axis: the support point lies within
    // the robotiq-like pad but outside a very narrow pad
    ObjectModel ball("ball", {SphereSolid{{0, 0, 0.03}, 0.03}}, 0.058, 0.3);
    Grasp g = make_grasp(0.0, 0.008, 0.03, 0.0, 0.07);
    GripperSpec narrow = franka_like_gripper();
    narrow.finger_width = 0.004;
    narrow.contact_patch_radius = 0.002;
    GripperSpec wide = robotiq_like_gripper();
    GraspOutcome out_narrow = run_stability_test(ball, {0, 0, 0}, g, narrow);
    GraspOutcome out_wide = run_stability_test(ball, {0, 0, 0}, g, wide);
    CHECK(out_wide.points >= out_narrow.points);
    CHECK(out_wide.lifted);
}
