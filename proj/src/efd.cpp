#include "graspbench/efd.hpp"

#include <cmath>

namespace graspbench {

Vec2 EFDCoefficients::evaluate(double t) const {
    double x = A0, y = C0;
    for (size_t n = 0; n < harmonics.size(); ++n) {
        double w = 2.0 * kPi * static_cast<double>(n + 1) * t;
        double cw = std::cos(w), sw = std::sin(w);
        x += harmonics[n].a * cw + harmonics[n].b * sw;
        y += harmonics[n].c * cw + harmonics[n].d * sw;
    }
    return {x, y};
}

Vec2 EFDCoefficients::derivative(double t) const {
    double x = 0.0, y = 0.0;
    for (size_t n = 0; n < harmonics.size(); ++n) {
        double wn = 2.0 * kPi * static_cast<double>(n + 1);
        double w = wn * t;
        double cw = std::cos(w), sw = std::sin(w);
        x += wn * (-harmonics[n].a * sw + harmonics[n].b * cw);
        y += wn * (-harmonics[n].c * sw + harmonics[n].d * cw);
    }
    return {x, y};
}

Vec2 EFDCoefficients::second_derivative(double t) const {
    double x = 0.0, y = 0.0;
    for (size_t n = 0; n < harmonics.size(); ++n) {
        double wn = 2.0 * kPi * static_cast<double>(n + 1);
        double w = wn * t;
        double cw = std::cos(w), sw = std::sin(w);
        x += wn * wn * (-harmonics[n].a * cw - harmonics[n].b * sw);
        y += wn * wn * (-harmonics[n].c * cw - harmonics[n].d * sw);
    }
    return {x, y};
}

EFDCoefficients fit_efd(const Contour& contour, int harmonic_count) {
    const auto& v = contour.vertices;
    if (v.size() < 3) throw Degenerate("EFD needs a closed contour with >= 3 vertices");
    if (harmonic_count < 1) throw ConfigError("harmonic count must be >= 1");

    const size_t k = v.size();
    std::vector<double> dx(k), dy(k), dt(k), t(k + 1, 0.0);
    for (size_t p = 0; p < k; ++p) {
        Vec2 d = v[(p + 1) % k] - v[p];
        dx[p] = d.x;
        dy[p] = d.y;
        dt[p] = d.norm();
        if (dt[p] <= 0.0) dt[p] = 1e-15;  // duplicate vertex guard
        t[p + 1] = t[p] + dt[p];
    }
    const double T = t[k];

    EFDCoefficients efd;
    efd.harmonics.resize(static_cast<size_t>(harmonic_count));

    // DC terms: mean of the piecewise-linear curve over arc length
    double sx = 0.0, sy = 0.0;
    for (size_t p = 0; p < k; ++p) {
        sx += dt[p] * (v[p].x + v[(p + 1) % k].x) * 0.5;
        sy += dt[p] * (v[p].y + v[(p + 1) % k].y) * 0.5;
    }
    efd.A0 = sx / T;
    efd.C0 = sy / T;

    for (int n = 1; n <= harmonic_count; ++n) {
        double coef = T / (2.0 * kPi * kPi * n * n);
        double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
        for (size_t p = 0; p < k; ++p) {
            double w0 = 2.0 * kPi * n * t[p] / T;
            double w1 = 2.0 * kPi * n * t[p + 1] / T;
            double dcos = std::cos(w1) - std::cos(w0);
            double dsin = std::sin(w1) - std::sin(w0);
            a += (dx[p] / dt[p]) * dcos;
            b += (dx[p] / dt[p]) * dsin;
            c += (dy[p] / dt[p]) * dcos;
            d += (dy[p] / dt[p]) * dsin;
        }
        efd.harmonics[static_cast<size_t>(n - 1)] = {coef * a, coef * b, coef * c, coef * d};
    }
    return efd;
}

std::pair<double, double> first_harmonic_semi_axes(const EFDCoefficients& efd) {
    if (efd.harmonics.empty()) return {0.0, 0.0};
    const auto& h = efd.harmonics[0];
    // singular values of [[a, b], [c, d]]
    double e = (h.a + h.d) * 0.5, f = (h.a - h.d) * 0.5;
    double g = (h.c + h.b) * 0.5, q = (h.c - h.b) * 0.5;
    double s1 = std::hypot(e, q) + std::hypot(f, g);
    double s2 = std::abs(std::hypot(e, q) - std::hypot(f, g));
    return {s1, s2};
}

double efd_curvature(const EFDCoefficients& efd, double t) {
    Vec2 d1 = efd.derivative(t);
    Vec2 d2 = efd.second_derivative(t);
    double speed2 = d1.squared_norm();
    if (speed2 <= 0.0) return 0.0;
    return d1.cross(d2) / (speed2 * std::sqrt(speed2));
}

}  // namespace graspbench
