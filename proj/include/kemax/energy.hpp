#pragma once

// The integral operator K, the energy E = (1/2)<rho, K rho>, the potential V,
// and the KKT stationarity residual.
//
// apply_K never materializes the kernel matrix. Two evaluation paths:
//  - direct: per output row, a fixed-order streamed sum over all nodes
//    (rows parallelize; each row's sum order is independent of threading)
//  - fft: translation-invariant kernel on a regular 2-D grid, evaluated as a
//    zero-padded circular convolution (single-threaded FFTW, deterministic)
// Both paths agree to ~1e-15 relative; the contract demands 1e-10.

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "kernels.hpp"
#include "threading.hpp"

namespace kemax {

using Field = std::vector<double>;

struct DensityField {
    Field values;
    double rho_plus = 0.0;
    double rho_minus = 0.0;
};

// Mass functional sum(value_i * w_i), accumulated in index order with extended
// precision so independent re-computations agree within the 1e-12 contract.
inline double weighted_mass(const Domain& dom, const Field& values) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += static_cast<long double>(values[i]) * dom.weights[i];
    return static_cast<double>(s);
}

// Admissible-class check: bounds and unit mass. Solver inits only need this.
inline void validate_admissible(const Domain& dom, const DensityField& rho, double tol = 1e-12) {
    if (rho.values.size() != dom.node_count())
        throw std::invalid_argument("density: length does not match domain");
    if (!(rho.rho_minus > 0) || !(rho.rho_plus >= rho.rho_minus))
        throw std::invalid_argument("density: bounds must satisfy rho_plus >= rho_minus > 0");
    const double pad = tol * std::max(1.0, rho.rho_plus);
    for (double v : rho.values)
        if (v < rho.rho_minus - pad || v > rho.rho_plus + pad)
            throw std::invalid_argument("density: value outside [rho_minus, rho_plus]");
    if (std::abs(weighted_mass(dom, rho.values) - 1.0) > tol)
        throw std::invalid_argument("density: mass differs from 1 beyond tolerance");
}

// Full DensityField invariant: admissible plus at most one fractional node.
// Threshold outputs satisfy this; arbitrary admissible inits need not.
inline void validate_density(const Domain& dom, const DensityField& rho, double tol = 1e-12) {
    validate_admissible(dom, rho, tol);
    const double pad = tol * std::max(1.0, rho.rho_plus);
    int interior = 0;
    for (double v : rho.values)
        if (v > rho.rho_minus + pad && v < rho.rho_plus - pad) ++interior;
    if (interior > 1)
        throw std::invalid_argument("density: more than one fractional node");
}

namespace detail {

struct FftwPlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
struct FftwFree {
    void operator()(double* p) const { fftw_free(p); }
};
struct FftwFreeC {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

// Zero-padded convolution with the radial stencil on the domain's grid.
// Padding to (2nx, 2ny) keeps wrapped contributions out of the output window.
class GridConvolver {
  public:
    GridConvolver(const Domain& dom, const KernelSpec& kernel) : grid_(*dom.grid) {
        lx_ = 2 * grid_.nx;
        ly_ = 2 * grid_.ny;
        lxc_ = lx_ / 2 + 1;
        const std::size_t real_n = static_cast<std::size_t>(ly_) * lx_;
        const std::size_t cplx_n = static_cast<std::size_t>(ly_) * lxc_;
        buf_.reset(fftw_alloc_real(real_n));
        buf_hat_.reset(fftw_alloc_complex(cplx_n));
        stencil_hat_.reset(fftw_alloc_complex(cplx_n));
        fwd_.reset(fftw_plan_dft_r2c_2d(ly_, lx_, buf_.get(), buf_hat_.get(), FFTW_ESTIMATE));
        bwd_.reset(fftw_plan_dft_c2r_2d(ly_, lx_, buf_hat_.get(), buf_.get(), FFTW_ESTIMATE));
        if (!fwd_ || !bwd_) throw std::runtime_error("apply_K: FFT plan creation failed");

        // stencil[dy][dx] = f(h * |(dx,dy)|) * cell_area, with negative offsets wrapped
        const double cell_area = grid_.h * grid_.h;
        for (int dy = 0; dy < ly_; ++dy) {
            const int oy = dy < grid_.ny ? dy : dy - ly_;
            for (int dx = 0; dx < lx_; ++dx) {
                const int ox = dx < grid_.nx ? dx : dx - lx_;
                const double r = grid_.h * std::hypot(static_cast<double>(ox),
                                                      static_cast<double>(oy));
                buf_.get()[static_cast<std::size_t>(dy) * lx_ + dx] =
                    kernel_eval(kernel, r, 2) * cell_area;
            }
        }
        fftw_execute_dft_r2c(fwd_.get(), buf_.get(), stencil_hat_.get());
    }

    void apply(const Field& values, Field& out) const {
        const std::size_t real_n = static_cast<std::size_t>(ly_) * lx_;
        std::fill(buf_.get(), buf_.get() + real_n, 0.0);
        for (std::size_t k = 0; k < values.size(); ++k)
            buf_.get()[static_cast<std::size_t>(grid_.iy[k]) * lx_ + grid_.ix[k]] = values[k];
        fftw_execute_dft_r2c(fwd_.get(), buf_.get(), buf_hat_.get());
        const double scale = 1.0 / (static_cast<double>(lx_) * ly_);
        const std::size_t cplx_n = static_cast<std::size_t>(ly_) * lxc_;
        for (std::size_t k = 0; k < cplx_n; ++k) {
            const double ar = buf_hat_.get()[k][0], ai = buf_hat_.get()[k][1];
            const double br = stencil_hat_.get()[k][0], bi = stencil_hat_.get()[k][1];
            buf_hat_.get()[k][0] = (ar * br - ai * bi) * scale;
            buf_hat_.get()[k][1] = (ar * bi + ai * br) * scale;
        }
        fftw_execute_dft_c2r(bwd_.get(), buf_hat_.get(), buf_.get());
        out.resize(values.size());
        for (std::size_t k = 0; k < values.size(); ++k)
            out[k] = buf_.get()[static_cast<std::size_t>(grid_.iy[k]) * lx_ + grid_.ix[k]];
    }

  private:
    GridInfo grid_;
    int lx_ = 0, ly_ = 0, lxc_ = 0;
    std::unique_ptr<double, FftwFree> buf_;
    std::unique_ptr<fftw_complex, FftwFreeC> buf_hat_;
    std::unique_ptr<fftw_complex, FftwFreeC> stencil_hat_;
    std::unique_ptr<fftw_plan_s, FftwPlanDeleter> fwd_, bwd_;
};

}  // namespace detail

// Reusable K operator bound to one (domain, kernel) pair. FFT path note: this
// mutates internal scratch buffers, so apply() is not reentrant on the same
// instance; build one instance per thread if needed.
class KOperator {
  public:
    KOperator(const Domain& dom, const KernelSpec& kernel)
        : dom_(&dom), kernel_(kernel) {
        validate_kernel_for_dim(kernel, dom.intrinsic_dim);
        if (dom.grid.has_value() && dom.metric == Metric::euclidean &&
            !kernel.singular_at_zero())
            conv_ = std::make_unique<detail::GridConvolver>(dom, kernel);
    }

    bool uses_fft() const { return conv_ != nullptr; }

    Field apply(const Field& values) const {
        if (values.size() != dom_->node_count())
            throw std::invalid_argument("apply_K: field length does not match domain");
        Field out(values.size());
        if (conv_) {
            conv_->apply(values, out);  // uniform cell weights folded into the stencil
            return out;
        }
        const Domain& dom = *dom_;
        const KernelSpec kernel = kernel_;
        const int d = dom.intrinsic_dim;
        const std::size_t n = values.size();
        const bool skip_diag = kernel.singular_at_zero();
        parallel_blocks(n, 64, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                long double s = 0.0L;
                for (std::size_t j = 0; j < n; ++j) {
                    if (skip_diag && j == i) continue;
                    s += static_cast<long double>(kernel_eval(kernel, node_distance(dom, i, j), d)) *
                         values[j] * dom.weights[j];
                }
                out[i] = static_cast<double>(s);
            }
        });
        return out;
    }

  private:
    const Domain* dom_;
    KernelSpec kernel_;
    std::unique_ptr<detail::GridConvolver> conv_;
};

inline Field apply_K(const Domain& dom, const KernelSpec& kernel, const Field& values) {
    return KOperator(dom, kernel).apply(values);
}

inline Field apply_K(const Domain& dom, const KernelSpec& kernel, const DensityField& rho) {
    return apply_K(dom, kernel, rho.values);
}

inline double inner_product(const Domain& dom, const Field& a, const Field& b) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += static_cast<long double>(a[i]) * b[i] * dom.weights[i];
    return static_cast<double>(s);
}

// E = (1/2) <rho, K rho>; the diagonal is omitted inside apply_K exactly when
// the kernel is singular, matching the discrete i != j objective.
inline double energy(const Domain& dom, const KernelSpec& kernel, const Field& values) {
    const Field phi = apply_K(dom, kernel, values);
    return 0.5 * inner_product(dom, values, phi);
}

inline double energy(const Domain& dom, const KernelSpec& kernel, const DensityField& rho) {
    return energy(dom, kernel, rho.values);
}

struct PotentialResult {
    Field values;
    std::size_t argmax = 0;
};

// V_i = sum_j k(x_i,x_j) w_j; ties in the argmax break to the lowest index.
inline PotentialResult potential(const Domain& dom, const KernelSpec& kernel) {
    PotentialResult res;
    res.values = apply_K(dom, kernel, Field(dom.node_count(), 1.0));
    res.argmax = 0;
    for (std::size_t i = 1; i < res.values.size(); ++i)
        if (res.values[i] > res.values[res.argmax]) res.argmax = i;
    return res;
}

struct KktResult {
    double alpha_star = 0.0;
    double violating_mass = 0.0;
};

namespace detail {
// m_plus = ((1/|Omega| - rho_minus)/(rho_plus - rho_minus)) * |Omega|,
// clamped to [0, |Omega|]; the degenerate equal-bounds case fills the domain.
inline double plus_mass_formula(double total, double rho_plus, double rho_minus) {
    if (rho_plus == rho_minus) return total;
    const double m = (1.0 / total - rho_minus) / (rho_plus - rho_minus) * total;
    return std::min(std::max(m, 0.0), total);
}
}  // namespace detail

// alpha* per the KKT threshold rule: walking nodes by phi ascending, it is the
// phi value at which the cumulative measure first exceeds |Omega| - m_plus.
// violating_mass sums weights of bang-bang nodes on the wrong side of alpha*
// plus interior nodes off the alpha* level set, excluding the one sanctioned
// fractional cell (the interior node with phi nearest alpha*).
inline KktResult kkt_residual_from_phi(const Domain& dom, const Field& phi,
                                       const DensityField& rho, double m_plus) {
    const std::size_t n = dom.node_count();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (phi[a] != phi[b]) return phi[a] < phi[b];
        return a < b;
    });
    const double target_minus = dom.total_measure() - m_plus;
    KktResult res;
    long double cum = 0.0L;
    res.alpha_star = phi.empty() ? 0.0 : phi[order.back()];
    for (std::size_t i : order) {
        cum += dom.weights[i];
        if (static_cast<double>(cum) > target_minus + 1e-15) {
            res.alpha_star = phi[i];
            break;
        }
    }
    const double pad = 1e-12 * std::max(1.0, rho.rho_plus);
    long double viol = 0.0L;
    std::size_t fractional = n;
    double fractional_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const bool at_plus = rho.values[i] >= rho.rho_plus - pad;
        const bool at_minus = rho.values[i] <= rho.rho_minus + pad;
        if (!at_plus && !at_minus) {
            const double gap = std::abs(phi[i] - res.alpha_star);
            if (gap < fractional_gap) {
                fractional_gap = gap;
                fractional = i;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (i == fractional) continue;
        const bool at_plus = rho.values[i] >= rho.rho_plus - pad;
        const bool at_minus = rho.values[i] <= rho.rho_minus + pad;
        bool bad = false;
        if (at_plus)
            bad = phi[i] < res.alpha_star;
        else if (at_minus)
            bad = phi[i] > res.alpha_star;
        else
            bad = phi[i] != res.alpha_star;  // extra interior node off the level set
        if (bad) viol += dom.weights[i];
    }
    res.violating_mass = static_cast<double>(viol);
    return res;
}

inline KktResult kkt_residual(const Domain& dom, const KernelSpec& kernel,
                              const DensityField& rho) {
    const Field phi = apply_K(dom, kernel, rho);
    const double m_plus =
        detail::plus_mass_formula(dom.total_measure(), rho.rho_plus, rho.rho_minus);
    return kkt_residual_from_phi(dom, phi, rho, m_plus);
}

}  // namespace kemax
