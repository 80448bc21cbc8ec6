#ifndef GRASPBENCH_ALPHA_SHAPE_HPP
#define GRASPBENCH_ALPHA_SHAPE_HPP

#include <vector>

#include "graspbench/contour.hpp"

namespace graspbench {

/// Alpha-shape boundary of a planar point set, oriented CCW. For alpha large
/// relative to the point-set diameter this equals the convex hull. When the
/// requested alpha fragments the set (islands, dangling chains, or points
/// left outside), alpha is escalated geometrically until the boundary is a
/// single closed loop enclosing every input point; hollow interiors keep
/// only the outer boundary. Throws Degenerate for < 3 points or collinear
/// input.
Contour concave_hull(const std::vector<Vec2>& points, double alpha);

/// Andrew monotone-chain convex hull (CCW).
Contour convex_hull(const std::vector<Vec2>& points);

}  // namespace graspbench

#endif
