#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "gibbsquad/common.hpp"

namespace gibbsquad {

// Number of scalar kernel evaluations performed on this thread. Energy code
// asserts its O(n^2 + n*M_n) cost contract against this counter.
inline thread_local std::uint64_t kernel_eval_count = 0;

// Interaction kernel description. Coulomb is the only singular variant; the
// regularized Coulomb kernel carries the particle count n because its
// regularization scale is n^{-2*zeta}.
struct KernelSpec {
    enum class Kind { Coulomb, CoulombRegularized, RieszRegularized, Gaussian };

    Kind kind = Kind::Gaussian;
    int d = 3;              // Coulomb / CoulombRegularized
    double zeta = 0.0;      // CoulombRegularized
    long n = 1;             // CoulombRegularized
    double s = 1.0;         // RieszRegularized
    double eps = 0.1;       // RieszRegularized
    double bandwidth = 1.0; // Gaussian

    static KernelSpec coulomb(int d) {
        if (d < 3) throw std::invalid_argument("Coulomb kernel requires d >= 3");
        KernelSpec k;
        k.kind = Kind::Coulomb;
        k.d = d;
        return k;
    }
    static KernelSpec coulomb_reg(int d, double zeta, long n) {
        if (d < 3) throw std::invalid_argument("regularized Coulomb kernel requires d >= 3");
        if (zeta <= 0.0 || n < 1) throw std::invalid_argument("coulomb_reg needs zeta > 0 and n >= 1");
        KernelSpec k;
        k.kind = Kind::CoulombRegularized;
        k.d = d;
        k.zeta = zeta;
        k.n = n;
        return k;
    }
    static KernelSpec riesz(double s, double eps) {
        if (s <= 0.0 || eps <= 0.0) throw std::invalid_argument("riesz needs s > 0 and eps > 0");
        KernelSpec k;
        k.kind = Kind::RieszRegularized;
        k.s = s;
        k.eps = eps;
        return k;
    }
    static KernelSpec gaussian(double h) {
        if (h <= 0.0) throw std::invalid_argument("gaussian needs bandwidth > 0");
        KernelSpec k;
        k.kind = Kind::Gaussian;
        k.bandwidth = h;
        return k;
    }

    bool singular() const { return kind == Kind::Coulomb; }

    // sup_x K(x, x); +inf for the raw Coulomb kernel.
    double diag_sup() const {
        switch (kind) {
            case Kind::Coulomb:
                return std::numeric_limits<double>::infinity();
            case Kind::CoulombRegularized:
                return std::pow(static_cast<double>(n), zeta * (d - 2));
            case Kind::RieszRegularized:
                return std::pow(eps, -s);
            case Kind::Gaussian:
                return 1.0;
        }
        return 0.0;
    }

    std::string to_string() const;
};

// K as a function of the squared distance r2 = |x - y|^2.
inline double kernel_eval_sq(const KernelSpec& k, double r2) {
    ++kernel_eval_count;
    switch (k.kind) {
        case KernelSpec::Kind::Coulomb:
            if (r2 == 0.0) return std::numeric_limits<double>::infinity();
            if (k.d == 3) return 1.0 / std::sqrt(r2);
            return std::pow(r2, -0.5 * (k.d - 2));
        case KernelSpec::Kind::CoulombRegularized: {
            const double q = r2 + std::pow(static_cast<double>(k.n), -2.0 * k.zeta);
            if (k.d == 3) return 1.0 / std::sqrt(q);
            return std::pow(q, -0.5 * (k.d - 2));
        }
        case KernelSpec::Kind::RieszRegularized: {
            const double q = r2 + k.eps * k.eps;
            if (k.s == 1.0) return 1.0 / std::sqrt(q);
            return std::pow(q, -0.5 * k.s);
        }
        case KernelSpec::Kind::Gaussian:
            return std::exp(-0.5 * r2 / (k.bandwidth * k.bandwidth));
    }
    return 0.0;
}

// dK/d(r2); the gradient w.r.t. the second argument is 2 * (y - x) * this.
inline double kernel_deriv_sq(const KernelSpec& k, double r2) {
    switch (k.kind) {
        case KernelSpec::Kind::Coulomb: {
            if (r2 == 0.0) throw NumericalError("singular gradient");
            if (k.d == 3) return -0.5 / (r2 * std::sqrt(r2));
            const double p = 0.5 * (k.d - 2);
            return -p * std::pow(r2, -p - 1.0);
        }
        case KernelSpec::Kind::CoulombRegularized: {
            const double q = r2 + std::pow(static_cast<double>(k.n), -2.0 * k.zeta);
            if (k.d == 3) return -0.5 / (q * std::sqrt(q));
            const double p = 0.5 * (k.d - 2);
            return -p * std::pow(q, -p - 1.0);
        }
        case KernelSpec::Kind::RieszRegularized: {
            const double q = r2 + k.eps * k.eps;
            if (k.s == 1.0) return -0.5 / (q * std::sqrt(q));
            return -0.5 * k.s * std::pow(q, -0.5 * k.s - 1.0);
        }
        case KernelSpec::Kind::Gaussian: {
            const double h2 = k.bandwidth * k.bandwidth;
            return -0.5 / h2 * std::exp(-0.5 * r2 / h2);
        }
    }
    return 0.0;
}

inline double kernel_eval(const KernelSpec& k, const Vec& x, const Vec& y) {
    check_same_dim(x, y);
    return kernel_eval_sq(k, sq_dist(x, y));
}

// Gradient of kernel_eval with respect to the second argument.
inline Vec kernel_grad2(const KernelSpec& k, const Vec& x, const Vec& y) {
    check_same_dim(x, y);
    const double f = kernel_deriv_sq(k, sq_dist(x, y));
    Vec g(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) g[i] = 2.0 * (y[i] - x[i]) * f;
    return g;
}

inline std::string KernelSpec::to_string() const {
    switch (kind) {
        case Kind::Coulomb:
            return "coulomb(d=" + std::to_string(d) + ")";
        case Kind::CoulombRegularized:
            return "coulomb_reg(d=" + std::to_string(d) + ",zeta=" + std::to_string(zeta) +
                   ",n=" + std::to_string(n) + ")";
        case Kind::RieszRegularized:
            return "riesz(s=" + std::to_string(s) + ",eps=" + std::to_string(eps) + ")";
        case Kind::Gaussian:
            return "gaussian(h=" + std::to_string(bandwidth) + ")";
    }
    return "";
}

}  // namespace gibbsquad
