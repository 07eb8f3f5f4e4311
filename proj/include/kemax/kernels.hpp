#pragma once

// Radial kernel families k(x,y) = f(|x-y|) and the complete-monotonicity
// sampling check. The family set is closed so monotonicity assumptions stay
// auditable.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace kemax {

enum class KernelFamily { riesz, exponential, gaussian, truncated_linear, constant };

struct KernelSpec {
    KernelFamily family = KernelFamily::constant;
    double param = 0.0;  // riesz: s, exponential: sigma, gaussian: tau, truncated_linear: c

    bool singular_at_zero() const { return family == KernelFamily::riesz; }

    static KernelSpec riesz(double s) {
        if (!(s > 0)) throw std::invalid_argument("riesz kernel: s must be > 0");
        return {KernelFamily::riesz, s};
    }
    static KernelSpec exponential(double sigma) {
        if (!(sigma > 0)) throw std::invalid_argument("exponential kernel: sigma must be > 0");
        return {KernelFamily::exponential, sigma};
    }
    static KernelSpec gaussian(double tau) {
        if (!(tau > 0)) throw std::invalid_argument("gaussian kernel: tau must be > 0");
        return {KernelFamily::gaussian, tau};
    }
    static KernelSpec truncated_linear(double c) {
        if (!(c > 0)) throw std::invalid_argument("truncated_linear kernel: c must be > 0");
        return {KernelFamily::truncated_linear, c};
    }
    static KernelSpec constant() { return {KernelFamily::constant, 0.0}; }

    std::string name() const {
        switch (family) {
            case KernelFamily::riesz: return "riesz(s=" + std::to_string(param) + ")";
            case KernelFamily::exponential: return "exponential(sigma=" + std::to_string(param) + ")";
            case KernelFamily::gaussian: return "gaussian(tau=" + std::to_string(param) + ")";
            case KernelFamily::truncated_linear:
                return "truncated_linear(c=" + std::to_string(param) + ")";
            case KernelFamily::constant: return "constant";
        }
        return "?";
    }
};

// f(r); d enters only through the gaussian normalization (4*pi*tau)^(-d/2).
inline double kernel_eval(const KernelSpec& k, double r, int d) {
    if (r < 0) throw std::invalid_argument("kernel_eval: r must be >= 0");
    switch (k.family) {
        case KernelFamily::riesz:
            if (r == 0.0) throw std::domain_error("kernel_eval: riesz kernel singular at r = 0");
            return std::pow(r, -k.param);
        case KernelFamily::exponential:
            return std::exp(-r / k.param);
        case KernelFamily::gaussian:
            return std::pow(4.0 * std::numbers::pi * k.param, -0.5 * d) *
                   std::exp(-r * r / (4.0 * k.param));
        case KernelFamily::truncated_linear:
            return std::max(k.param - r, 0.0);
        case KernelFamily::constant:
            return 1.0;
    }
    return 0.0;
}

// Validity of the kernel for an intrinsic dimension d (riesz needs s < d so
// the energy integral converges); called at operator-assembly time.
inline void validate_kernel_for_dim(const KernelSpec& k, int d) {
    if (k.family == KernelFamily::riesz && !(k.param < d))
        throw std::invalid_argument("riesz kernel: requires s < intrinsic dimension d");
}

// Samples forward divided differences of f on r_grid and checks the
// alternating-sign pattern (-1)^l DD^l >= -1e-9 for l = 0..order. A
// completely monotone profile passes; truncated_linear fails at order 2 on
// grids spanning its kink (positive definite but not completely monotone).
inline bool check_complete_monotonicity(const KernelSpec& k, const std::vector<double>& r_grid,
                                        int order, int d = 1) {
    if (order < 0 || order > 4)
        throw std::invalid_argument("check_complete_monotonicity: order must be in [0,4]");
    if (r_grid.size() < static_cast<std::size_t>(order) + 1)
        throw std::invalid_argument("check_complete_monotonicity: grid too small for order");
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > 0))
            throw std::invalid_argument("check_complete_monotonicity: grid must be positive");
        if (i > 0 && !(r_grid[i] > r_grid[i - 1]))
            throw std::invalid_argument("check_complete_monotonicity: grid must be increasing");
    }
    constexpr double tol = 1e-9;
    std::vector<double> dd(r_grid.size());
    for (std::size_t i = 0; i < r_grid.size(); ++i) dd[i] = kernel_eval(k, r_grid[i], d);
    for (int level = 0; level <= order; ++level) {
        const double sign = (level % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t i = 0; i + level < r_grid.size(); ++i)
            if (sign * dd[i] < -tol) return false;
        // next-level forward divided differences on the (possibly nonuniform) grid
        for (std::size_t i = 0; i + level + 1 < r_grid.size(); ++i)
            dd[i] = (dd[i + 1] - dd[i]) / (r_grid[i + level + 1] - r_grid[i]);
    }
    return true;
}

}  // namespace kemax
