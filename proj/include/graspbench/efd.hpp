#ifndef GRASPBENCH_EFD_HPP
#define GRASPBENCH_EFD_HPP

#include <utility>
#include <vector>

#include "graspbench/contour.hpp"

namespace graspbench {

/// Elliptical Fourier series of a closed contour: per-harmonic coefficient
/// quadruple (a_n, b_n) for x and (c_n, d_n) for y, plus the DC offsets.
struct EFDCoefficients {
    struct Harmonic {
        double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    };
    double A0 = 0.0;
    double C0 = 0.0;
    std::vector<Harmonic> harmonics;

    size_t order() const { return harmonics.size(); }

    /// Point on the reconstructed curve at parameter t in [0, 1).
    Vec2 evaluate(double t) const;
    /// d/dt of the reconstruction.
    Vec2 derivative(double t) const;
    Vec2 second_derivative(double t) const;
};

/// Standard elliptical Fourier analysis of the arc-length-parameterized
/// closed contour (piecewise-linear between vertices).
EFDCoefficients fit_efd(const Contour& contour, int harmonic_count);

/// Semi-axes (major, minor) of the first-harmonic ellipse.
std::pair<double, double> first_harmonic_semi_axes(const EFDCoefficients& efd);

/// Signed curvature at parameter t (positive for CCW-convex regions).
double efd_curvature(const EFDCoefficients& efd, double t);

}  // namespace graspbench

#endif
