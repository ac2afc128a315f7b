#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "gibbsquad/common.hpp"
#include "gibbsquad/kernels.hpp"
#include "gibbsquad/measures.hpp"

namespace gibbsquad {

// Phi(z) = [|z|^2 - R^2]_+ ; quadratic growth outside B(0, R), zero inside.
inline double confinement_phi(const Vec& z, double R) {
    if (R <= 0.0) throw std::invalid_argument("confinement radius must be positive");
    const double v = sq_norm(z) - R * R;
    return v > 0.0 ? v : 0.0;
}

// Subgradient convention: 0 exactly at |z| = R.
inline Vec confinement_phi_grad(const Vec& z, double R) {
    Vec g(z.size(), 0.0);
    if (sq_norm(z) > R * R)
        for (std::size_t k = 0; k < z.size(); ++k) g[k] = 2.0 * z[k];
    return g;
}

// Quenched confining potential V_n(z) = -U_K^{nu}(z) + Phi(z) outside B(0,R),
// where nu is a finitely supported background measure and K is non-singular.
// Stateless: every evaluation is O(M_n) over the background atoms.
class QuenchedPotential {
  public:
    QuenchedPotential(WeightedSample background, KernelSpec kernel, double R)
        : background_(std::move(background)), kernel_(kernel), R_(R) {
        if (kernel_.singular())
            throw std::invalid_argument("quenched potential requires a non-singular kernel");
        if (R_ <= 0.0) throw std::invalid_argument("confinement radius must be positive");
        background_.validate();
    }

    const WeightedSample& background() const { return background_; }
    const KernelSpec& kernel() const { return kernel_; }
    double radius() const { return R_; }

    // U_K^{nu}(z) = sum_i w_i K(z, x_i)
    double embedding(const Vec& z) const {
        double u = 0.0;
        for (std::size_t i = 0; i < background_.size(); ++i)
            u += background_.weights[i] * kernel_eval_sq(kernel_, sq_dist(z, background_.points[i]));
        return u;
    }

    double value(const Vec& z) const { return -embedding(z) + confinement_phi(z, R_); }

    Vec grad(const Vec& z) const {
        Vec g = confinement_phi_grad(z, R_);
        for (std::size_t i = 0; i < background_.size(); ++i) {
            const Vec& x = background_.points[i];
            const double f = background_.weights[i] * kernel_deriv_sq(kernel_, sq_dist(z, x));
            for (std::size_t k = 0; k < z.size(); ++k) g[k] -= 2.0 * (z[k] - x[k]) * f;
        }
        return g;
    }

    // Single pass over the background for MALA steps.
    double value_and_grad(const Vec& z, Vec& grad_out) const {
        grad_out = confinement_phi_grad(z, R_);
        double u = 0.0;
        for (std::size_t i = 0; i < background_.size(); ++i) {
            const Vec& x = background_.points[i];
            const double r2 = sq_dist(z, x);
            u += background_.weights[i] * kernel_eval_sq(kernel_, r2);
            const double f = background_.weights[i] * kernel_deriv_sq(kernel_, r2);
            for (std::size_t k = 0; k < z.size(); ++k) grad_out[k] -= 2.0 * (z[k] - x[k]) * f;
        }
        return -u + confinement_phi(z, R_);
    }

  private:
    WeightedSample background_;
    KernelSpec kernel_;
    double R_;
};

// Newtonian potential of the unit-mass uniform ball B(0, R) in d = 3:
// (3R^2 - |z|^2) / (2R^3) inside, 1/|z| outside.
inline double analytic_uniform_ball_potential(double R, const Vec& z, int d = 3) {
    if (d != 3) throw std::invalid_argument("analytic form unavailable");
    if (R <= 0.0) throw std::invalid_argument("radius must be positive");
    const double r = norm(z);
    if (r <= R) return (3.0 * R * R - r * r) / (2.0 * R * R * R);
    return 1.0 / r;
}

// Regular lattice over the cube [-extent, extent]^d.
inline std::vector<Vec> make_grid(double extent, int pts_per_axis, int d) {
    if (pts_per_axis < 2 || d < 1 || extent <= 0.0) throw std::invalid_argument("bad grid spec");
    std::vector<Vec> grid;
    std::size_t total = 1;
    for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(pts_per_axis);
    grid.reserve(total);
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    const double step = 2.0 * extent / (pts_per_axis - 1);
    for (std::size_t c = 0; c < total; ++c) {
        Vec p(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) p[k] = -extent + step * idx[k];
        grid.push_back(std::move(p));
        for (int k = 0; k < d; ++k) {
            if (++idx[k] < pts_per_axis) break;
            idx[k] = 0;
        }
    }
    return grid;
}

// Grid proxy for sup_z |approx(z) - reference(z)|; order-independent max.
inline double potential_sup_error(const std::function<double(const Vec&)>& approx,
                                  const std::function<double(const Vec&)>& reference,
                                  const std::vector<Vec>& grid) {
    if (grid.empty()) throw std::invalid_argument("empty grid");
    double m = 0.0;
    for (const auto& z : grid) {
        const double e = std::abs(approx(z) - reference(z));
        if (e > m) m = e;
    }
    return m;
}

}  // namespace gibbsquad
