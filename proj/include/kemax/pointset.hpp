#pragma once

// The discrete side: point configurations, separation/covering/mesh ratio,
// admissibility under the (r, R) constraints, the discrete pair energy, an
// exact-ish brute-force search for tiny n on the interval, the parameter
// bridge to density bounds, and the constructive 1-D sequence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "kernels.hpp"

namespace kemax {

struct Configuration {
    std::vector<double> coords;  // flattened, ambient_dim values per point
    int ambient_dim = 1;

    std::size_t n() const { return coords.size() / ambient_dim; }
    const double* point(std::size_t i) const { return coords.data() + i * ambient_dim; }

    static Configuration from_1d(std::vector<double> xs) {
        Configuration c;
        c.ambient_dim = 1;
        c.coords = std::move(xs);
        return c;
    }
};

inline double separation(const Configuration& X, Metric metric = Metric::euclidean) {
    const std::size_t n = X.n();
    if (n < 2) throw std::invalid_argument("separation: needs at least 2 points");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            best = std::min(best, point_distance(X.point(i), X.point(j), X.ambient_dim, metric));
    return best;
}

struct CoveringResult {
    double radius = 0.0;     // max over domain nodes of the distance to X
    double tolerance = 0.0;  // half cell diameter: continuum error bound
};

inline CoveringResult covering_radius(const Configuration& X, const Domain& dom) {
    if (dom.node_count() == 0) throw std::invalid_argument("covering_radius: empty domain");
    if (X.n() == 0) throw std::invalid_argument("covering_radius: empty configuration");
    if (X.ambient_dim != dom.ambient_dim)
        throw std::invalid_argument("covering_radius: ambient dimension mismatch");
    CoveringResult res;
    double max_cell = 0.0;
    for (std::size_t i = 0; i < dom.node_count(); ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < X.n(); ++j)
            nearest = std::min(nearest, point_distance(dom.node(i), X.point(j),
                                                       dom.ambient_dim, dom.metric));
        res.radius = std::max(res.radius, nearest);
        max_cell = std::max(max_cell, dom.weights[i]);
    }
    // a cell of measure w has diameter w^(1/d) (segments) or sqrt(2) w^(1/2) (squares)
    const double cell_side = std::pow(max_cell, 1.0 / dom.intrinsic_dim);
    res.tolerance = 0.5 * (dom.intrinsic_dim == 2 ? cell_side * std::numbers::sqrt2 : cell_side);
    return res;
}

inline double mesh_ratio(const Configuration& X, const Domain& dom) {
    return covering_radius(X, dom).radius / separation(X, dom.metric);
}

struct AdmissibleParams {
    double r = 0.0;
    double R = 0.0;
    int d = 1;
};

struct AdmissibilityReport {
    bool admissible = false;
    double separation_margin = 0.0;  // delta - r n^(-1/d)
    double covering_margin = 0.0;    // R n^(-1/d) - eta
    double covering_tolerance = 0.0;
    bool uncertain = false;  // covering margin within the grid tolerance
};

// delta(X) >= r n^(-1/d) and eta(X) <= R n^(-1/d), with eta measured on the
// domain's quadrature nodes. A 1e-12 slack absorbs float roundoff on exact
// boundary-of-feasibility configurations.
inline AdmissibilityReport is_admissible(const Configuration& X, const AdmissibleParams& params,
                                         const Domain& dom) {
    if (params.d != dom.intrinsic_dim)
        throw std::invalid_argument("is_admissible: parameter d disagrees with domain");
    const double scale = std::pow(static_cast<double>(X.n()), -1.0 / params.d);
    AdmissibilityReport rep;
    rep.separation_margin = separation(X, dom.metric) - params.r * scale;
    const CoveringResult cov = covering_radius(X, dom);
    rep.covering_margin = params.R * scale - cov.radius;
    rep.covering_tolerance = cov.tolerance;
    constexpr double eps = 1e-12;
    rep.admissible = rep.separation_margin >= -eps && rep.covering_margin >= -eps;
    rep.uncertain = std::abs(rep.covering_margin) <= cov.tolerance;
    return rep;
}

// (1/(2 n^2)) sum over ordered pairs i != j of k(x_i, x_j).
inline double discrete_energy(const Configuration& X, const KernelSpec& kernel, int d = 1,
                              Metric metric = Metric::euclidean) {
    const std::size_t n = X.n();
    if (n < 2) throw std::invalid_argument("discrete_energy: needs at least 2 points");
    long double s = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            s += kernel_eval(kernel, point_distance(X.point(i), X.point(j), X.ambient_dim, metric),
                             d);
    return static_cast<double>(s / (static_cast<long double>(n) * n));
}

struct BruteForceResult {
    Configuration config;
    double energy = 0.0;
    double final_step = 0.0;  // lattice step after the last refinement level
};

namespace detail {

// Depth-first enumeration of ordered tuples over per-coordinate candidate
// lists, pruned by the admissibility constraints on [-1,1]:
//   x_1 <= -1 + R/n, x_n >= 1 - R/n, gaps in [r/n, 2R/n].
// Lexicographic order + strict improvement keeps the first (smallest) of any
// energy ties, making the search deterministic.
inline void brute_force_recurse(const std::vector<std::vector<double>>& cands, std::size_t level,
                                std::vector<double>& current, double sep_min, double gap_max,
                                double edge_max, const KernelSpec& kernel,
                                std::vector<double>& best, double& best_energy) {
    const std::size_t n = cands.size();
    constexpr double eps = 1e-12;
    if (level == n) {
        long double s = 0.0L;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                s += kernel_eval(kernel, current[j] - current[i], 1);
        const double e = static_cast<double>(s / (static_cast<long double>(n) * n));
        if (e > best_energy) {
            best_energy = e;
            best = current;
        }
        return;
    }
    for (double x : cands[level]) {
        if (x < -1.0 - eps || x > 1.0 + eps) continue;
        if (level == 0) {
            if (x > -1.0 + edge_max + eps) continue;  // covering of the left endpoint
        } else {
            const double gap = x - current[level - 1];
            if (gap < sep_min - eps) continue;
            if (gap > gap_max + eps) break;  // candidates ascend; larger x only widens the gap
        }
        if (level == n - 1 && x < 1.0 - edge_max - eps) continue;  // covering of the right endpoint
        current[level] = x;
        brute_force_recurse(cands, level + 1, current, sep_min, gap_max, edge_max, kernel, best,
                            best_energy);
    }
}

}  // namespace detail

// Grid search over ordered n-tuples on [-1,1], then refine_levels rounds of
// local refinement (step/4 per round, +-1 old step window) around the
// incumbent. Pair distances large relative to the gaps bound are only pruned
// via per-gap checks, which is exact for the interval geometry.
inline BruteForceResult brute_force_interval(int n, const AdmissibleParams& params,
                                             const KernelSpec& kernel, int coarse = 81,
                                             int refine_levels = 3) {
    if (n < 2 || n > 6) throw std::invalid_argument("brute_force_interval: n must be in [2,6]");
    if (coarse < 3) throw std::invalid_argument("brute_force_interval: coarse lattice too small");
    if (params.d != 1) throw std::invalid_argument("brute_force_interval: d must be 1");
    const double sep_min = params.r / n;
    const double edge_max = params.R / n;
    const double gap_max = 2.0 * params.R / n;

    double step = 2.0 / (coarse - 1);
    std::vector<double> lattice(coarse);
    for (int i = 0; i < coarse; ++i) lattice[i] = -1.0 + i * step;
    std::vector<std::vector<double>> cands(n, lattice);

    std::vector<double> best;
    std::vector<double> current(n);
    double best_energy = -std::numeric_limits<double>::infinity();
    detail::brute_force_recurse(cands, 0, current, sep_min, gap_max, edge_max, kernel, best,
                                best_energy);
    if (best.empty())
        throw std::runtime_error("brute_force_interval: infeasible at this lattice resolution");

    for (int level = 0; level < refine_levels; ++level) {
        const double fine = step / 4.0;
        for (int k = 0; k < n; ++k) {
            cands[k].clear();
            for (int off = -4; off <= 4; ++off) {
                const double x = best[k] + off * fine;
                if (x >= -1.0 - 1e-12 && x <= 1.0 + 1e-12) cands[k].push_back(x);
            }
        }
        std::vector<double> refined;
        double refined_energy = -std::numeric_limits<double>::infinity();
        detail::brute_force_recurse(cands, 0, current, sep_min, gap_max, edge_max, kernel, refined,
                                    refined_energy);
        if (refined_energy > best_energy) {
            best = refined;
            best_energy = refined_energy;
        }
        step = fine;
    }

    BruteForceResult res;
    res.config = Configuration::from_1d(best);
    res.energy = best_energy;
    res.final_step = step;
    return res;
}

// Packing density Delta_d and covering density Theta_d. d=1: intervals tile
// the line. d=2: the triangular lattice is optimal for both packing (Fejes
// Toth / Thue, pi/sqrt(12)) and covering (Kershner, 2*pi/sqrt(27)).
inline double packing_density(int d) {
    if (d == 1) return 1.0;
    if (d == 2) return std::numbers::pi / std::sqrt(12.0);
    throw std::invalid_argument("packing_density: only d in {1,2} supported");
}

inline double covering_density(int d) {
    if (d == 1) return 1.0;
    if (d == 2) return 2.0 * std::numbers::pi / std::sqrt(27.0);
    throw std::invalid_argument("covering_density: only d in {1,2} supported");
}

struct BridgeBounds {
    double rho_plus = 0.0;
    double rho_minus = 0.0;
};

// rho_plus = 2^d Delta_d / (r^d beta_d), rho_minus = Theta_d / (R^d beta_d).
inline BridgeBounds parameter_bridge(double r, double R, int d) {
    if (d != 1 && d != 2) throw std::invalid_argument("parameter_bridge: only d in {1,2}");
    if (!(r > 0) || !(R > 0)) throw std::invalid_argument("parameter_bridge: r, R must be > 0");
    const double beta = std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
    BridgeBounds b;
    b.rho_plus = std::pow(2.0, d) * packing_density(d) / (std::pow(r, d) * beta);
    b.rho_minus = covering_density(d) / (std::pow(R, d) * beta);
    return b;
}

// Documentation-only constant of the bridge: the mesh ratio of a sequence
// saturating both constraints, (1/2)(Theta_d/Delta_d)^(1/d).
inline double bridge_mesh_ratio_constant(int d) {
    return 0.5 * std::pow(covering_density(d) / packing_density(d), 1.0 / d);
}

// Admissible n-point configuration on [-1,1] mimicking the constructive
// sequence: a centered block packed at spacing r/n inside the optimal plus
// interval, and per-side blocks at spacing <= 2R/n covering the remainder.
// The o(n) slack is resolved by trimming the packed block.
inline Configuration construct_1d_sequence(int n, double r, double R) {
    if (!(r > 0) || !(r < 2) || !(R > 1))
        throw std::invalid_argument("construct_1d_sequence: requires 0 < r < 2 and R > 1");
    const double L = 2.0 * r * (R - 1.0) / (2.0 * R - r);  // plus-interval length
    const double ell = 1.0 - L / 2.0;                      // per-side remainder length
    const int pack_max = static_cast<int>(std::floor(L * n / r + 1e-12)) + 1;
    int m = static_cast<int>(std::ceil(n * ell / (2.0 * R) - 1e-12));
    m = std::max(m, static_cast<int>(std::ceil((n - pack_max) / 2.0)));
    const int n_plus = n - 2 * m;
    if (m < 1 || n_plus < 1)
        throw std::invalid_argument("construct_1d_sequence: n too small for both constraints");
    const double side_h = ell / m;
    if (side_h < r / n - 1e-12)
        throw std::invalid_argument("construct_1d_sequence: side spacing violates separation");
    std::vector<double> xs;
    xs.reserve(n);
    for (int k = 0; k < m; ++k) xs.push_back(-1.0 + (k + 0.5) * side_h);
    const double spacing = r / n;
    const double start = -(n_plus - 1) * spacing / 2.0;
    for (int k = 0; k < n_plus; ++k) xs.push_back(start + k * spacing);
    for (int k = m - 1; k >= 0; --k) xs.push_back(1.0 - (k + 0.5) * side_h);
    return Configuration::from_1d(std::move(xs));
}

// Box-filter histogram of X on the domain's quadrature nodes, normalized to
// unit mass: node i counts points within bandwidth_cells * w_i^(1/d).
inline std::vector<double> empirical_density(const Configuration& X, const Domain& dom,
                                             int bandwidth_cells) {
    if (bandwidth_cells < 1)
        throw std::invalid_argument("empirical_density: bandwidth must be >= 1");
    if (X.ambient_dim != dom.ambient_dim)
        throw std::invalid_argument("empirical_density: ambient dimension mismatch");
    std::vector<double> counts(dom.node_count(), 0.0);
    for (std::size_t i = 0; i < dom.node_count(); ++i) {
        const double radius =
            bandwidth_cells * std::pow(dom.weights[i], 1.0 / dom.intrinsic_dim);
        int c = 0;
        for (std::size_t j = 0; j < X.n(); ++j)
            if (point_distance(dom.node(i), X.point(j), dom.ambient_dim, dom.metric) <=
                radius + 1e-12)
                ++c;
        counts[i] = static_cast<double>(c);
    }
    long double mass = 0.0L;
    for (std::size_t i = 0; i < counts.size(); ++i)
        mass += static_cast<long double>(counts[i]) * dom.weights[i];
    if (mass <= 0.0L) return counts;  // no point near any node: all-zero field
    for (double& v : counts) v = static_cast<double>(v / mass);
    return counts;
}

}  // namespace kemax
