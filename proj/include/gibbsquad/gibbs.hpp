#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "gibbsquad/common.hpp"
#include "gibbsquad/kernels.hpp"
#include "gibbsquad/potentials.hpp"
#include "gibbsquad/targets.hpp"

namespace gibbsquad {

using ParticleConfiguration = std::vector<Vec>;

// beta_n = u * n^exponent. The low-temperature regime needs exponent > 1;
// the paper's presets are n^2 and n^3.
struct BetaSchedule {
    double u = 1.0;
    double exponent = 2.0;

    BetaSchedule() = default;
    BetaSchedule(double u_, double exponent_) : u(u_), exponent(exponent_) {
        if (u <= 0.0 || exponent <= 1.0)
            throw std::invalid_argument("beta schedule needs u > 0 and exponent > 1");
    }

    double beta(long n) const { return u * std::pow(static_cast<double>(n), exponent); }
};

// Confining potential term of the Gibbs energy. eval returns V(z) and, when
// grad is non-null, fills the gradient. background_atoms is the per-point
// kernel-evaluation cost (0 for analytic potentials).
struct ConfiningPotential {
    std::function<double(const Vec&, Vec*)> eval;
    long background_atoms = 0;

    double value(const Vec& z) const { return eval(z, nullptr); }
    Vec grad(const Vec& z) const {
        Vec g;
        eval(z, &g);
        return g;
    }
};

inline ConfiningPotential make_quenched_potential(QuenchedPotential qp) {
    auto shared = std::make_shared<QuenchedPotential>(std::move(qp));
    ConfiningPotential p;
    p.background_atoms = static_cast<long>(shared->background().size());
    p.eval = [shared](const Vec& z, Vec* grad) {
        if (!grad) return shared->value(z);
        return shared->value_and_grad(z, *grad);
    };
    return p;
}

// V(x) = ((d-2) / (2 R^d)) |x|^2; equilibrium is the uniform ball B(0, R).
inline ConfiningPotential make_quadratic_coulomb_potential(const EquilibriumSpec& eq) {
    ConfiningPotential p;
    p.eval = [eq](const Vec& z, Vec* grad) {
        if (grad) *grad = eq.potential_grad(z);
        return eq.potential(z);
    };
    return p;
}

struct GibbsConfig {
    long n = 2;
    BetaSchedule beta_schedule;
    KernelSpec kernel;
    ConfiningPotential potential;
    int dim = 3;

    GibbsConfig(long n_, BetaSchedule schedule, KernelSpec kernel_, ConfiningPotential potential_, int dim_)
        : n(n_), beta_schedule(schedule), kernel(kernel_), potential(std::move(potential_)), dim(dim_) {
        // n = 1 is allowed as a degenerate case with an empty interaction sum.
        if (n < 1) throw std::invalid_argument("gibbs system needs n >= 1");
        if (kernel.kind == KernelSpec::Kind::CoulombRegularized && kernel.n != n)
            throw std::invalid_argument("regularized Coulomb kernel must carry the system's n");
    }

    double beta() const { return beta_schedule.beta(n); }
};

struct EnergyStats {
    std::uint64_t pair_evals = 0;
    std::uint64_t background_evals = 0;
};

inline void check_configuration(const GibbsConfig& cfg, const ParticleConfiguration& x) {
    if (static_cast<long>(x.size()) != cfg.n) throw std::invalid_argument("configuration size mismatch");
    for (const auto& p : x)
        if (static_cast<int>(p.size()) != cfg.dim) throw std::invalid_argument("dimension mismatch");
}

// Accumulation order for energy sums: lexicographic over particle
// coordinates, so relabeling the particles cannot change the floating-point
// result.
inline std::vector<std::size_t> canonical_order(const ParticleConfiguration& x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    return idx;
}

// H_n^Q(y) = (1/(2n^2)) sum_{i != j} K(y_i, y_j) + (1/n) sum_i V_n(y_i).
// The ordered-pair sum equals twice the i < j sum, so the pair term is
// (1/n^2) sum_{i<j} K, accumulated in canonical particle order.
// +inf for coincident points under the raw Coulomb kernel.
inline double hnq_energy(const GibbsConfig& cfg, const ParticleConfiguration& x,
                         EnergyStats* stats = nullptr) {
    check_configuration(cfg, x);
    const long n = cfg.n;
    const std::vector<std::size_t> ord = canonical_order(x);
    const std::uint64_t before = kernel_eval_count;
    double pair = 0.0;
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j) {
            const double k = kernel_eval_sq(cfg.kernel, sq_dist(x[ord[i]], x[ord[j]]));
            if (!std::isfinite(k)) return std::numeric_limits<double>::infinity();
            pair += k;
        }
    if (stats) stats->pair_evals = kernel_eval_count - before;
    const std::uint64_t mid = kernel_eval_count;
    double conf = 0.0;
    for (long i = 0; i < n; ++i) conf += cfg.potential.value(x[ord[i]]);
    if (stats) stats->background_evals = kernel_eval_count - mid;
    const double dn = static_cast<double>(n);
    return pair / (dn * dn) + conf / dn;
}

// Gradient of hnq_energy w.r.t. particle i:
// (1/n^2) sum_{j != i} grad_1 K(y_i, y_j) + (1/n) grad V_n(y_i).
inline std::vector<Vec> hnq_grad(const GibbsConfig& cfg, const ParticleConfiguration& x) {
    check_configuration(cfg, x);
    const long n = cfg.n;
    const double dn = static_cast<double>(n);
    const std::vector<std::size_t> ord = canonical_order(x);
    std::vector<Vec> grad(x.size(), Vec(static_cast<std::size_t>(cfg.dim), 0.0));
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j) {
            const std::size_t a = ord[i], b = ord[j];
            const double r2 = sq_dist(x[a], x[b]);
            if (cfg.kernel.singular() && r2 == 0.0) throw NumericalError("singular gradient");
            const double f = kernel_deriv_sq(cfg.kernel, r2) / (dn * dn);
            for (int k = 0; k < cfg.dim; ++k) {
                const double gk = 2.0 * (x[a][k] - x[b][k]) * f;
                grad[a][k] += gk;
                grad[b][k] -= gk;
            }
        }
    Vec pg;
    for (long i = 0; i < n; ++i) {
        cfg.potential.eval(x[ord[i]], &pg);
        for (int k = 0; k < cfg.dim; ++k) grad[ord[i]][k] += pg[k] / dn;
    }
    return grad;
}

// Energy and gradient in one sweep over pairs and background; returns +inf
// energy (and leaves the gradient unspecified) on singular configurations.
inline double hnq_energy_and_grad(const GibbsConfig& cfg, const ParticleConfiguration& x,
                                  std::vector<Vec>& grad_out) {
    check_configuration(cfg, x);
    const long n = cfg.n;
    const double dn = static_cast<double>(n);
    const std::vector<std::size_t> ord = canonical_order(x);
    grad_out.assign(x.size(), Vec(static_cast<std::size_t>(cfg.dim), 0.0));
    double pair = 0.0;
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j) {
            const std::size_t a = ord[i], b = ord[j];
            const double r2 = sq_dist(x[a], x[b]);
            const double k = kernel_eval_sq(cfg.kernel, r2);
            if (!std::isfinite(k)) return std::numeric_limits<double>::infinity();
            pair += k;
            const double f = kernel_deriv_sq(cfg.kernel, r2) / (dn * dn);
            for (int c = 0; c < cfg.dim; ++c) {
                const double gk = 2.0 * (x[a][c] - x[b][c]) * f;
                grad_out[a][c] += gk;
                grad_out[b][c] -= gk;
            }
        }
    double conf = 0.0;
    Vec pg;
    for (long i = 0; i < n; ++i) {
        conf += cfg.potential.eval(x[ord[i]], &pg);
        for (int c = 0; c < cfg.dim; ++c) grad_out[ord[i]][c] += pg[c] / dn;
    }
    return pair / (dn * dn) + conf / dn;
}

}  // namespace gibbsquad
