#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gibbsquad/kernels.hpp"
#include "gibbsquad/rng.hpp"

using namespace gibbsquad;

TEST_CASE("Coulomb values in d = 3") {
    const KernelSpec g = KernelSpec::coulomb(3);
    REQUIRE(kernel_eval(g, {0, 0, 0}, {2, 0, 0}) == Catch::Approx(0.5));
    REQUIRE(std::isinf(kernel_eval(g, {1, 1, 1}, {1, 1, 1})));
    REQUIRE(std::isinf(g.diag_sup()));
}

TEST_CASE("regularized Coulomb diagonal is n^{zeta (d-2)}") {
    const KernelSpec k = KernelSpec::coulomb_reg(3, 0.05, 500);
    const double expected = std::pow(500.0, 0.05);
    REQUIRE(kernel_eval(k, {0, 0, 0}, {0, 0, 0}) == Catch::Approx(expected).epsilon(1e-12));
    REQUIRE(k.diag_sup() == Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("regularized Riesz and Gaussian diagonals") {
    REQUIRE(kernel_eval(KernelSpec::riesz(1.0, 0.1), {0, 0}, {0, 0}) == Catch::Approx(10.0));
    REQUIRE(KernelSpec::riesz(2.0, 0.5).diag_sup() == Catch::Approx(4.0));
    REQUIRE(KernelSpec::gaussian(0.7).diag_sup() == 1.0);
    REQUIRE(kernel_eval(KernelSpec::gaussian(0.7), {1, 2}, {1, 2}) == 1.0);
}

TEST_CASE("symmetry is exact") {
    RngStream rng(2, 0);
    const KernelSpec variants[] = {KernelSpec::coulomb(3), KernelSpec::coulomb_reg(3, 0.1, 50),
                                   KernelSpec::riesz(1.5, 0.2), KernelSpec::gaussian(0.5)};
    for (const auto& k : variants)
        for (int trial = 0; trial < 20; ++trial) {
            const Vec x = rng.gaussian_vec(3), y = rng.gaussian_vec(3);
            REQUIRE(kernel_eval(k, x, y) == kernel_eval(k, y, x));
        }
}

TEST_CASE("regularized Coulomb is dominated by Coulomb pointwise") {
    RngStream rng(3, 0);
    const KernelSpec g = KernelSpec::coulomb(3);
    const KernelSpec kz = KernelSpec::coulomb_reg(3, 0.05, 100);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec x = rng.gaussian_vec(3), y = rng.gaussian_vec(3);
        REQUIRE(kernel_eval(kz, x, y) <= kernel_eval(g, x, y));
    }
}

TEST_CASE("regularized Coulomb converges to Coulomb as n grows") {
    RngStream rng(4, 0);
    const KernelSpec g = KernelSpec::coulomb(3);
    const KernelSpec kz = KernelSpec::coulomb_reg(3, 0.5, 1000000);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec x = rng.gaussian_vec(3), y = rng.gaussian_vec(3);
        const double exact = kernel_eval(g, x, y);
        REQUIRE(std::abs(kernel_eval(kz, x, y) - exact) < 1e-4 * exact);
    }
}

TEST_CASE("gradient vanishes at coincident points for regularized variants") {
    const Vec x{0.3, -0.2, 0.7};
    for (const auto& k : {KernelSpec::coulomb_reg(3, 0.1, 20), KernelSpec::riesz(1.0, 0.1),
                          KernelSpec::gaussian(0.4)}) {
        const Vec grad = kernel_grad2(k, x, x);
        for (double c : grad) REQUIRE(c == 0.0);
    }
}

TEST_CASE("Coulomb gradient at coincident points is an error") {
    const Vec x{1, 2, 3};
    REQUIRE_THROWS_AS(kernel_grad2(KernelSpec::coulomb(3), x, x), NumericalError);
}

namespace {
double fd_partial(const KernelSpec& k, const Vec& x, Vec y, std::size_t c, double h) {
    y[c] += h;
    const double up = kernel_eval(k, x, y);
    y[c] -= 2.0 * h;
    const double dn = kernel_eval(k, x, y);
    return (up - dn) / (2.0 * h);
}
}  // namespace

TEST_CASE("gradients match central finite differences") {
    RngStream rng(6, 0);
    for (const auto& k : {KernelSpec::riesz(1.0, 0.1), KernelSpec::riesz(2.5, 0.3),
                          KernelSpec::coulomb_reg(3, 0.1, 40), KernelSpec::gaussian(0.5)}) {
        for (int trial = 0; trial < 10; ++trial) {
            const Vec x = rng.gaussian_vec(3), y = rng.gaussian_vec(3);
            const Vec grad = kernel_grad2(k, x, y);
            for (std::size_t c = 0; c < 3; ++c) {
                const double fd = fd_partial(k, x, y, c, 1e-5);
                REQUIRE(grad[c] == Catch::Approx(fd).epsilon(1e-5).margin(1e-8));
            }
        }
    }
}

TEST_CASE("Gaussian gradient closed form") {
    const KernelSpec k = KernelSpec::gaussian(0.8);
    const Vec x{0.1, -0.4, 0.9}, y{-0.3, 0.2, 0.5};
    const double h2 = 0.8 * 0.8;
    const double val = std::exp(-0.5 * sq_dist(x, y) / h2);
    const Vec grad = kernel_grad2(k, x, y);
    for (std::size_t c = 0; c < 3; ++c)
        REQUIRE(grad[c] == Catch::Approx((x[c] - y[c]) / h2 * val).epsilon(1e-12));
}

TEST_CASE("non-singular variants are positive definite on zero-charge atoms") {
    RngStream rng(7, 0);
    for (const auto& k : {KernelSpec::coulomb_reg(3, 0.05, 100), KernelSpec::riesz(1.0, 0.1),
                          KernelSpec::gaussian(0.5)}) {
        for (int trial = 0; trial < 50; ++trial) {
            const int m = 2 + static_cast<int>(rng.uniform() * 9.0);
            std::vector<Vec> pts;
            std::vector<double> c(static_cast<std::size_t>(m));
            double total = 0.0;
            for (int i = 0; i < m; ++i) {
                pts.push_back(rng.gaussian_vec(3));
                c[static_cast<std::size_t>(i)] = rng.uniform(-1.0, 1.0);
                total += c[static_cast<std::size_t>(i)];
            }
            for (auto& ci : c) ci -= total / m;  // zero total charge
            double form = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    form += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j)] *
                            kernel_eval(k, pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
            REQUIRE(form >= -1e-10);
        }
    }
}

TEST_CASE("evaluation counter increments per kernel call") {
    const std::uint64_t before = kernel_eval_count;
    kernel_eval(KernelSpec::gaussian(1.0), {0, 0}, {1, 1});
    kernel_eval_sq(KernelSpec::riesz(1.0, 0.1), 2.0);
    REQUIRE(kernel_eval_count == before + 2);
}

TEST_CASE("invalid kernel parameters are rejected") {
    REQUIRE_THROWS_AS(KernelSpec::coulomb(2), std::invalid_argument);
    REQUIRE_THROWS_AS(KernelSpec::coulomb_reg(3, 0.0, 10), std::invalid_argument);
    REQUIRE_THROWS_AS(KernelSpec::riesz(1.0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(KernelSpec::gaussian(-1.0), std::invalid_argument);
}
