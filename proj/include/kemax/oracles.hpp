#pragma once

// Closed-form optima and limit laws used as test oracles. Constants follow
// the halved convention of the formal energy definition (see energy.hpp);
// the two-interval constants are stored as exact rationals.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "energy.hpp"
#include "geometry.hpp"
#include "kernels.hpp"
#include "pointset.hpp"

namespace kemax {

// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d) {
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

struct IntervalOptimum {
    double center_length = 0.0;  // |B_plus|, centered at 0 on [-1,1]
    double rho_plus = 0.0;
    double rho_minus = 0.0;
};

// Optimal density on [-1,1] for the bridge bounds: rho_plus = 1/r on a
// centered interval of length 2r(R-1)/(2R-r), rho_minus = 1/(2R) outside.
inline IntervalOptimum interval_optimum(double r, double R) {
    if (!(r > 0) || !(r < 2) || !(R > 1))
        throw std::invalid_argument("interval_optimum: requires 0 < r < 2 and R > 1");
    IntervalOptimum res;
    res.center_length = 2.0 * r * (R - 1.0) / (2.0 * R - r);
    res.rho_plus = 1.0 / r;
    res.rho_minus = 1.0 / (2.0 * R);
    return res;
}

// Radius of the centered rho_plus ball on the ball domain of given radius.
inline double ball_optimum_radius(double domain_radius, int d, double rho_plus,
                                  double rho_minus) {
    if (!(domain_radius > 0) || d < 1)
        throw std::invalid_argument("ball_optimum_radius: invalid domain");
    const double beta = unit_ball_volume(d);
    const double total = beta * std::pow(domain_radius, d);
    const double slack = 1e-12 * std::max(1.0, 1.0 / total);
    if (!(rho_minus > 0) || rho_plus < 1.0 / total - slack || rho_minus > 1.0 / total + slack)
        throw std::invalid_argument("ball_optimum_radius: bounds incompatible with domain");
    const double m_plus = detail::plus_mass_formula(total, rho_plus, rho_minus);
    return std::pow(m_plus / beta, 1.0 / d);
}

// Arc length of the optimal cap on S^1 (|Omega| = 2*pi); its location is free.
inline double circle_cap_measure(double rho_plus, double rho_minus) {
    const double total = 2.0 * std::numbers::pi;
    const double slack = 1e-12;
    if (!(rho_minus > 0) || rho_plus < 1.0 / total - slack || rho_minus > 1.0 / total + slack)
        throw std::invalid_argument("circle_cap_measure: bounds incompatible with S^1");
    return detail::plus_mass_formula(total, rho_plus, rho_minus);
}

// Two-interval family on [-2,-1] u [1,2] with rho_plus=2/3, rho_minus=1/3 and
// the truncated-linear kernel f(r) = max(2-r, 0):
//   E[rho_t] = 185/432 + (5/9)(t - 1/4)^2  for t in [0, 1/2].
inline double two_interval_energy(double t) {
    if (!(t >= 0.0) || !(t <= 0.5))
        throw std::invalid_argument("two_interval_energy: t must lie in [0, 1/2]");
    const double base = 185.0 / 432.0;
    const double curv = 5.0 / 9.0;
    return base + curv * (t - 0.25) * (t - 0.25);
}

// Half-length of each centered plus-segment on the unit cross (|Omega| = 4).
inline double cross_optimum_t(double rho_plus, double rho_minus) {
    if (!(rho_minus < 0.25) || !(rho_plus > 0.25))
        throw std::invalid_argument("cross_optimum_t: requires rho_minus < 1/4 < rho_plus");
    return (1.0 - 4.0 * rho_minus) / (4.0 * (rho_plus - rho_minus));
}

struct Interval4Optimum {
    Configuration config;        // left-anchored representative, x1 < x2 < x3 < x4
    int case_id = 0;             // 1..4 per the four-point theorem
    bool has_distinct_mirror = false;  // cases 2 and 3 are asymmetric
};

// Reflection through the origin with point order reversed, so a sorted 1-D
// configuration stays sorted.
inline Configuration mirror_configuration(const Configuration& X) {
    Configuration m = X;
    const int p = X.ambient_dim;
    const std::size_t n = X.n();
    for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < p; ++k)
            m.coords[(n - 1 - i) * p + k] = -X.coords[i * p + k];
    return m;
}

// Exact n=4 maximizer on [-1,1] under separation r/4 and covering R/4.
// Case boundaries follow the four-point theorem; feasibility additionally
// needs r <= 2R (an adjacent gap must satisfy r/4 <= g <= R/2), which the
// theorem's stated iff omits. Case (i) returns the symmetric representative
// (always feasible there since 3r + 2R >= 8 puts -3r/8 <= -1 + R/4).
inline Interval4Optimum interval4_optimum(double r, double R, const KernelSpec& kernel) {
    (void)kernel;  // the maximizer's geometry is kernel-free for decreasing kernels
    if (!(r > 0) || !(R >= 1) || r > 8.0 / 3.0 + 1e-15)
        throw std::invalid_argument("interval4_optimum: requires 0 < r <= 8/3 and R >= 1");
    if (r > 2.0 * R + 1e-15)
        throw std::invalid_argument("interval4_optimum: requires r <= 2R (gap feasibility)");
    Interval4Optimum res;
    res.config.ambient_dim = 1;
    auto& x = res.config.coords;
    if (3.0 * r + 2.0 * R >= 8.0) {
        res.case_id = 1;
        const double x1 = -3.0 * r / 8.0;
        x = {x1, x1 + r / 4.0, x1 + r / 2.0, x1 + 3.0 * r / 4.0};
    } else if (2.0 * r + 4.0 * R >= 8.0) {
        res.case_id = 2;
        res.has_distinct_mirror = true;
        const double x1 = -1.0 + R / 4.0;
        x = {x1, x1 + r / 4.0, x1 + r / 2.0, 1.0 - R / 4.0};
    } else if (6.0 * R + r >= 8.0) {
        res.case_id = 3;
        res.has_distinct_mirror = true;
        const double x1 = -1.0 + R / 4.0;
        const double x4 = 1.0 - R / 4.0;
        const double x3 = x4 - R / 2.0;
        x = {x1, x3 - r / 4.0, x3, x4};
    } else {
        res.case_id = 4;
        const double x1 = -1.0 + R / 4.0;
        const double x4 = 1.0 - R / 4.0;
        x = {x1, x1 + R / 2.0, x4 - R / 2.0, x4};
    }
    return res;
}

// Node maximizing the potential V(y) = integral of k(x,y) dx (lowest index
// on ties); the weak-* limit concentrates the excess mass there.
inline std::size_t delta_limit_center(const Domain& dom, const KernelSpec& kernel) {
    return potential(dom, kernel).argmax;
}

// Mass of the concentrating atom in the rho_plus -> infinity limit.
inline double concentration_mass(double rho_minus, double total_measure) {
    return 1.0 - rho_minus * total_measure;
}

}  // namespace kemax
