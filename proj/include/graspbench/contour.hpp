#ifndef GRASPBENCH_CONTOUR_HPP
#define GRASPBENCH_CONTOUR_HPP

#include <vector>

#include "graspbench/types.hpp"

namespace graspbench {

/// Closed planar polyline, counter-clockwise, implicitly closed (last vertex
/// connects back to the first).
struct Contour {
    std::vector<Vec2> vertices;

    bool empty() const { return vertices.empty(); }
    size_t size() const { return vertices.size(); }
};

/// Positive for counter-clockwise contours.
double signed_area(const Contour& c);

Vec2 polygon_centroid(const Contour& c);

double perimeter(const Contour& c);

/// Even-odd test; boundary points count as inside within `eps`.
bool point_in_polygon(const Contour& c, const Vec2& p, double eps = 1e-12);

bool is_simple_polygon(const Contour& c);

/// Reverses vertex order if needed so the signed area is positive.
void make_ccw(Contour& c);

/// `n` points at uniform arc-length spacing along the contour, starting at
/// vertex 0. Also reports the outward normal of the edge each sample lies on.
struct BoundarySample {
    Vec2 point;
    Vec2 outward_normal;
};
std::vector<BoundarySample> sample_boundary_uniform(const Contour& c, int n);

}  // namespace graspbench

#endif
