#ifndef GRASPBENCH_OBJECTS_HPP
#define GRASPBENCH_OBJECTS_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "graspbench/contour.hpp"
#include "graspbench/types.hpp"

namespace graspbench {

// Solid primitives in the object frame (object rests on the table, z = 0 at
// the table plane). All signed distances are true Euclidean distances, which
// the renderer relies on for sphere tracing.

struct BoxSolid {
    Vec3 center;
    Vec3 half;    // half extents
    double yaw = 0.0;
};

/// Vertical-axis cylinder, optionally tapered (truncated cone) and hollow.
struct CylinderSolid {
    Vec2 center;
    double z0 = 0.0;
    double z1 = 0.0;
    double r_bottom = 0.0;
    double r_top = 0.0;
    double r_inner = 0.0;
};

struct SphereSolid {
    Vec3 center;
    double r = 0.0;
};

struct CapsuleSolid {
    Vec3 a;
    Vec3 b;
    double r = 0.0;
};

/// Tube of radius `tube_r` swept along a circular arc. The arc lies in the
/// plane spanned by (e1, e2) about `center`, parameterized center +
/// R*(cos(t) e1 + sin(t) e2) for t in [ang0, ang1].
struct SweptArcSolid {
    Vec3 center;
    Vec3 e1{1, 0, 0};
    Vec3 e2{0, 1, 0};
    double R = 0.0;
    double ang0 = 0.0;
    double ang1 = 0.0;
    double tube_r = 0.0;
};

using SolidPrimitive =
    std::variant<BoxSolid, CylinderSolid, SphereSolid, CapsuleSolid, SweptArcSolid>;

struct Aabb {
    Vec3 lo;
    Vec3 hi;
    void expand(const Aabb& o);
    Aabb inflated(double m) const;
};

double primitive_sdf(const SolidPrimitive& prim, const Vec3& p);
Aabb primitive_bounds(const SolidPrimitive& prim);
double primitive_volume(const SolidPrimitive& prim);
Vec3 primitive_centroid(const SolidPrimitive& prim);

/// Parses the config-file primitive grammar, e.g. "sphere 0 0 0.0335 0.0335".
SolidPrimitive parse_primitive(const std::string& text);
std::string format_primitive(const SolidPrimitive& prim);

// ---------------------------------------------------------------------------

/// Parametric solid (union of primitives) with mass and friction; serves as
/// ground truth for rendering and for the grasp-stability oracle.
class ObjectModel {
public:
    ObjectModel() = default;
    ObjectModel(std::string name, std::vector<SolidPrimitive> primitives, double mass,
                double friction_mu);

    const std::string& name() const { return name_; }
    const std::vector<SolidPrimitive>& primitives() const { return primitives_; }
    double mass() const { return mass_; }
    double friction_mu() const { return friction_mu_; }

    /// Signed distance to the union (exact outside, sign-exact inside).
    double sdf(const Vec3& p) const;
    bool inside(const Vec3& p) const { return sdf(p) <= 0.0; }

    Aabb bounds() const { return bounds_; }
    double height() const { return bounds_.hi.z; }

    /// Volume-weighted centroid of the primitives (overlap regions counted
    /// once per primitive; the catalog overlaps are small).
    Vec3 centroid() const { return centroid_; }
    double volume() const { return volume_; }

    /// Closed outer polygon of the horizontal slice at height z, CCW, traced
    /// from the exact signed-distance field at the given grid resolution.
    /// Empty contour when the slice is empty.
    Contour cross_section(double z, double resolution = 0.001) const;

private:
    std::string name_;
    std::vector<SolidPrimitive> primitives_;
    double mass_ = 0.0;
    double friction_mu_ = 0.5;
    Aabb bounds_{};
    Vec3 centroid_;
    double volume_ = 0.0;
};

/// The ten parametric analogs of the benchmark object set. Dimensions and
/// masses are configuration defaults; the relative contrasts (clamp scale
/// triplet, heavy mustard with a narrow cap, low-friction fruit) are the
/// properties the experiments rely on.
std::map<std::string, ObjectModel> default_object_catalog();

}  // namespace graspbench

#endif
