#ifndef GRASPBENCH_TYPES_HPP
#define GRASPBENCH_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace graspbench {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGravity = 9.80665;

// ---------------------------------------------------------------------------
// Small vector types
// ---------------------------------------------------------------------------

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double squared_norm() const { return x * x + y * y; }
    Vec2 normalized() const {
        double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
    // counter-clockwise rotation
    Vec2 rotated(double angle) const {
        double c = std::cos(angle), s = std::sin(angle);
        return {c * x - s * y, s * x + c * y};
    }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec3 normalized() const {
        double n = norm();
        return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{0.0, 0.0, 0.0};
    }
    Vec2 xy() const { return {x, y}; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// ---------------------------------------------------------------------------
// Errors
//
// Every failure that can show up in a benchmark record carries a short stable
// code; records preserve it verbatim for failure-mode analysis.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + (msg.empty() ? "" : ": " + msg)), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define GRASPBENCH_ERROR(Name)                                           \
    struct Name : Error {                                                \
        explicit Name(const std::string& msg = "") : Error(#Name, msg) {} \
    }

GRASPBENCH_ERROR(NoGraspFound);
GRASPBENCH_ERROR(ProtocolError);
GRASPBENCH_ERROR(Timeout);
GRASPBENCH_ERROR(RemoteFailure);
GRASPBENCH_ERROR(AllInvalid);
GRASPBENCH_ERROR(NoPlane);
GRASPBENCH_ERROR(EmptyCloud);
GRASPBENCH_ERROR(Degenerate);
GRASPBENCH_ERROR(MissedObject);
GRASPBENCH_ERROR(Collision);
GRASPBENCH_ERROR(WidthExceeded);
GRASPBENCH_ERROR(InvalidPixels);
GRASPBENCH_ERROR(TooSmall);
GRASPBENCH_ERROR(EmptyRecords);
GRASPBENCH_ERROR(IoError);
GRASPBENCH_ERROR(ConfigError);

#undef GRASPBENCH_ERROR

// ---------------------------------------------------------------------------
// Sensor observations
// ---------------------------------------------------------------------------

/// Metric depth image. Depth is distance from the camera along the optical
/// axis, in meters. Invalid pixels carry a quiet NaN.
struct DepthImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;  // row-major, width*height

    static float invalid_value() { return std::numeric_limits<float>::quiet_NaN(); }
    static bool is_valid(float d) { return std::isfinite(d); }

    DepthImage() = default;
    DepthImage(int w, int h, float fill = invalid_value())
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

    float& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    float at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return data.size(); }

    size_t valid_count() const {
        size_t n = 0;
        for (float d : data) n += is_valid(d) ? 1 : 0;
        return n;
    }
};

/// Pinhole intrinsics for the fixed top-down camera. `standoff` is the
/// camera-to-table distance along the optical axis. The default focal
/// length keeps every protocol pose (r = 0.25 m) of the tallest catalog
/// object inside the frustum at 640x480.
struct CameraModel {
    double fx = 450.0;
    double fy = 450.0;
    double cx = 319.5;
    double cy = 239.5;
    int width = 640;
    int height = 480;
    double standoff = 0.8;

    bool valid() const {
        return fx > 0.0 && fy > 0.0 && cx >= 0.0 && cx < width && cy >= 0.0 && cy < height &&
               width > 0 && height > 0 && standoff > 0.0;
    }
};

/// Points in the table frame: z = 0 at the table plane, z up, meters.
struct PointCloud {
    std::vector<Vec3> points;

    size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

// ---------------------------------------------------------------------------
// Grasps and grippers
// ---------------------------------------------------------------------------

/// Maps any angle to the canonical [0, pi) range; a grasp rotated by pi is
/// the same physical grasp.
inline double normalize_grasp_angle(double angle) {
    double a = std::fmod(angle, kPi);
    if (a < 0.0) a += kPi;
    if (a >= kPi) a = 0.0;  // guard fmod landing exactly on pi
    return a;
}

/// Planar top-down grasp: closing-axis direction `angle` in the table plane,
/// commanded opening `width`, fingertip center at `center`.
struct Grasp {
    Vec3 center;
    double angle = 0.0;   // radians, [0, pi)
    double width = 0.0;   // meters
    double quality = 0.0; // dimensionless, higher is better

    /// Deterministic tie-breaking order: lowest (angle, center.y, center.x).
    bool tie_break_before(const Grasp& o) const {
        if (angle != o.angle) return angle < o.angle;
        if (center.y != o.center.y) return center.y < o.center.y;
        return center.x < o.center.x;
    }
};

struct GripperSpec {
    std::string name = "franka-like";
    double max_opening = 0.08;
    double min_opening = 0.0;
    double max_force = 70.0;           // N per finger
    double finger_width = 0.018;       // lateral fingertip extent
    double finger_thickness = 0.010;   // extent along the closing axis
    double contact_patch_radius = 0.005;

    bool valid() const {
        return min_opening >= 0.0 && min_opening < max_opening && max_force > 0.0;
    }
};

/// Configuration defaults, not ground truth for any specific hardware; the
/// controlled contrast between the two is finger contact area.
GripperSpec franka_like_gripper();
GripperSpec robotiq_like_gripper();

/// Throws if the grasp violates the planner output contract.
void validate_grasp(const Grasp& g, const GripperSpec& gripper);

// ---------------------------------------------------------------------------
// Region of interest (table frame, meters)
// ---------------------------------------------------------------------------

// Default covers the protocol circle (r = 0.25 m) plus the largest catalog
// object half-extent, with margin, inside the [-0.4, 0.4] workspace.
struct RoiBox {
    double x_min = -0.36;
    double x_max = 0.36;
    double y_min = -0.36;
    double y_max = 0.36;

    bool valid() const { return x_min < x_max && y_min < y_max; }
    bool contains(double x, double y) const {
        return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
    }
};

}  // namespace graspbench

#endif
