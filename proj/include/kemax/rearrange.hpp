#pragma once

// Volume-preserving threshold step and the rearrangement iteration.
//
// The threshold step maximizes <phi, rho> over the admissible polytope
// (bathtub principle): nodes take rho_plus in descending phi order until the
// target plus-mass is filled; one node may take an interior value so the
// discrete mass is exactly 1. Stationarity of the iteration is detected on
// the plus-set as an integer set, which is robust to the fractional cell.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "energy.hpp"
#include "geometry.hpp"
#include "kernels.hpp"

namespace kemax {

enum class StopReason { stationary_set, l1_below_tol, max_iter };

inline const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::stationary_set: return "stationary_set";
        case StopReason::l1_below_tol: return "l1_below_tol";
        case StopReason::max_iter: return "max_iter";
    }
    return "?";
}

struct SolveReport {
    std::vector<double> energies;    // E[rho_0], E[rho_1], ...
    std::vector<double> l1_changes;  // ||rho_s - rho_{s-1}||_L1, one per step
    int iterations = 0;
    StopReason stop_reason = StopReason::max_iter;
    double kkt_alpha = 0.0;
    double kkt_violating_mass = 0.0;
    bool used_fft = false;
};

inline double target_plus_mass(const Domain& dom, double rho_plus, double rho_minus) {
    const double total = dom.total_measure();
    const double slack = 1e-12 * std::max(1.0, 1.0 / total);
    if (!(rho_minus > 0) || rho_plus < rho_minus ||
        rho_plus < 1.0 / total - slack || rho_minus > 1.0 / total + slack)
        throw std::invalid_argument(
            "target_plus_mass: requires rho_plus >= 1/|Omega| >= rho_minus > 0");
    return detail::plus_mass_formula(total, rho_plus, rho_minus);
}

inline DensityField volume_threshold(const Domain& dom, const Field& phi, double rho_plus,
                                     double rho_minus) {
    if (phi.size() != dom.node_count())
        throw std::invalid_argument("volume_threshold: field length does not match domain");
    for (double v : phi)
        if (!std::isfinite(v)) throw std::invalid_argument("volume_threshold: phi must be finite");
    const double m_plus = target_plus_mass(dom, rho_plus, rho_minus);
    const std::size_t n = dom.node_count();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (phi[a] != phi[b]) return phi[a] > phi[b];
        return a < b;  // ties by ascending node index
    });

    DensityField rho;
    rho.rho_plus = rho_plus;
    rho.rho_minus = rho_minus;
    rho.values.assign(n, rho_minus);
    long double cum = 0.0L;
    std::size_t frac_node = n;  // n = no fractional cell
    for (std::size_t i : order) {
        if (static_cast<double>(cum + dom.weights[i]) <= m_plus + 1e-15) {
            rho.values[i] = rho_plus;
            cum += dom.weights[i];
        } else {
            if (static_cast<double>(cum) < m_plus - 1e-15) frac_node = i;
            break;
        }
    }
    if (frac_node < n) {
        // the unique interior value making the index-order mass sum exactly 1
        long double mass_rest = 0.0L;
        for (std::size_t i = 0; i < n; ++i)
            if (i != frac_node)
                mass_rest += static_cast<long double>(rho.values[i]) * dom.weights[i];
        double v = static_cast<double>((1.0L - mass_rest) / dom.weights[frac_node]);
        v = std::min(std::max(v, rho_minus), rho_plus);
        rho.values[frac_node] = v;
    }
    return rho;
}

inline std::vector<std::uint8_t> plus_set_mask(const DensityField& rho) {
    const double pad = 1e-12 * std::max(1.0, rho.rho_plus);
    std::vector<std::uint8_t> mask(rho.values.size());
    for (std::size_t i = 0; i < rho.values.size(); ++i)
        mask[i] = rho.values[i] >= rho.rho_plus - pad ? 1 : 0;
    return mask;
}

inline double l1_distance(const Domain& dom, const Field& a, const Field& b) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::abs(static_cast<long double>(a[i]) - b[i]) * dom.weights[i];
    return static_cast<double>(s);
}

// Per-iteration observer; receives the new iterate after each threshold step.
using IterationCallback = std::function<void(int, const DensityField&, const Field&)>;

// Algorithm: phi = K rho_s, rho_{s+1} = volume_threshold(phi). Stops on
// plus-set stationarity, on ||rho_{s+1}-rho_s||_L1 <= tol (only when tol > 0),
// or on max_iter. Energies cover every iterate including the final one.
inline std::pair<DensityField, SolveReport> solve(const Domain& dom, const KernelSpec& kernel,
                                                  double rho_plus, double rho_minus,
                                                  const DensityField& init, double tol = 0.0,
                                                  int max_iter = 500,
                                                  const IterationCallback& on_iterate = {}) {
    if (tol < 0) throw std::invalid_argument("solve: tol must be >= 0");
    if (max_iter < 1) throw std::invalid_argument("solve: max_iter must be >= 1");
    validate_admissible(dom, init);
    if (init.rho_plus != rho_plus || init.rho_minus != rho_minus)
        throw std::invalid_argument("solve: init bounds disagree with solver bounds");
    const KOperator op(dom, kernel);

    SolveReport report;
    report.used_fft = op.uses_fft();
    DensityField rho = init;
    std::vector<std::uint8_t> cur_set = plus_set_mask(rho);
    Field phi = op.apply(rho.values);
    report.energies.push_back(0.5 * inner_product(dom, rho.values, phi));
    report.stop_reason = StopReason::max_iter;

    for (int s = 0; s < max_iter; ++s) {
        DensityField next = volume_threshold(dom, phi, rho_plus, rho_minus);
        const double l1 = l1_distance(dom, rho.values, next.values);
        report.l1_changes.push_back(l1);
        std::vector<std::uint8_t> next_set = plus_set_mask(next);
        const bool stationary = next_set == cur_set;
        rho = std::move(next);
        cur_set = std::move(next_set);
        report.iterations = s + 1;
        phi = op.apply(rho.values);
        report.energies.push_back(0.5 * inner_product(dom, rho.values, phi));
        if (on_iterate) on_iterate(s + 1, rho, phi);
        if (stationary) {
            report.stop_reason = StopReason::stationary_set;
            break;
        }
        if (tol > 0 && l1 <= tol) {
            report.stop_reason = StopReason::l1_below_tol;
            break;
        }
    }

    const double m_plus = target_plus_mass(dom, rho_plus, rho_minus);
    const KktResult kkt = kkt_residual_from_phi(dom, phi, rho, m_plus);
    report.kkt_alpha = kkt.alpha_star;
    report.kkt_violating_mass = kkt.violating_mass;
    return {std::move(rho), std::move(report)};
}

namespace detail {
// Bounded uniform draw by rejection; unbiased and identical on every platform
// (std::uniform_int_distribution is implementation-defined).
inline std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}
}  // namespace detail

// Seeded Fisher-Yates shuffle of the node indices, then a threshold on the
// induced ranking. Same seed gives a bit-identical field.
inline DensityField random_admissible_init(const Domain& dom, double rho_plus, double rho_minus,
                                           std::uint64_t seed) {
    const std::size_t n = dom.node_count();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[detail::bounded_rand(rng, i)]);
    Field score(n);
    for (std::size_t rank = 0; rank < n; ++rank)
        score[perm[rank]] = static_cast<double>(n - rank);
    return volume_threshold(dom, score, rho_plus, rho_minus);
}

inline DensityField uniform_init(const Domain& dom, double rho_plus, double rho_minus) {
    const double total = dom.total_measure();
    DensityField rho;
    rho.rho_plus = rho_plus;
    rho.rho_minus = rho_minus;
    rho.values.assign(dom.node_count(), 1.0 / total);
    validate_admissible(dom, rho);
    return rho;
}

}  // namespace kemax
