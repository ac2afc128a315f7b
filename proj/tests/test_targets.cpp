#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gibbsquad/rng.hpp"
#include "gibbsquad/targets.hpp"

using namespace gibbsquad;

TEST_CASE("truncated Gaussian log-density") {
    const TargetDensity t = TargetDensity::truncated_gaussian(3, 0.5);
    REQUIRE(t.log_unnorm_density({0, 0, 0}) == 0.0);
    REQUIRE(std::isinf(t.log_unnorm_density({2.6, 0, 0})));  // beyond 5 sigma
    REQUIRE(t.density({0.5, 0, 0}) == Catch::Approx(std::exp(-0.5)).epsilon(1e-12));
    REQUIRE(t.support_radius() == Catch::Approx(2.5));
}

TEST_CASE("uniform ball log-density") {
    const TargetDensity t = TargetDensity::uniform_ball(2, 1.0);
    REQUIRE(t.log_unnorm_density({0.3, -0.4}) == 0.0);
    REQUIRE(std::isinf(t.log_unnorm_density({1.5, 0.0})));
    REQUIRE(t.density({0.0, 0.0}) == 1.0);
    REQUIRE(t.density({1.2, 0.9}) == 0.0);
}

TEST_CASE("logistic predictive probability") {
    REQUIRE(logistic_predictive({0, 0, 0}, {1.7, -2.3}) == 0.5);
    REQUIRE(logistic_predictive({0, 0, 10}, {0.2, 0.4}) > 0.9999);
    const Vec y{0.7, -1.1, 0.3}, z{0.5, 2.0};
    Vec neg_y = y;
    for (auto& c : neg_y) c = -c;
    REQUIRE(logistic_predictive(y, z) + logistic_predictive(neg_y, z) == Catch::Approx(1.0).epsilon(1e-12));
    REQUIRE_THROWS_AS(logistic_predictive({0, 0}, {1, 2}), std::invalid_argument);
}

TEST_CASE("logistic posterior support radius equals the prior cutoff") {
    const std::vector<Vec> features{{0.1, 0.2}, {-0.3, 0.4}};
    const std::vector<int> labels{1, 0};
    const TargetDensity post = TargetDensity::logistic_posterior(features, labels, 0.5);
    REQUIRE(post.dim() == 3);
    REQUIRE(post.support_radius() == Catch::Approx(2.5));
    REQUIRE(std::isfinite(post.log_unnorm_density({0.1, 0.1, 0.1})));
    REQUIRE(std::isinf(post.log_unnorm_density({2.0, 2.0, 2.0})));
}

TEST_CASE("logistic posterior gradient matches finite differences") {
    RngStream rng(11, 0);
    std::vector<Vec> features;
    std::vector<int> labels;
    for (int i = 0; i < 12; ++i) {
        features.push_back(rng.gaussian_vec(2));
        labels.push_back(i % 2);
    }
    const TargetDensity post = TargetDensity::logistic_posterior(features, labels, 0.5);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec x = rng.uniform_in_ball(3, 1.5);
        const Vec grad = post.grad_log_density(x);
        for (std::size_t c = 0; c < 3; ++c) {
            Vec up = x, dn = x;
            up[c] += 1e-6;
            dn[c] -= 1e-6;
            const double fd = (post.log_unnorm_density(up) - post.log_unnorm_density(dn)) / 2e-6;
            REQUIRE(grad[c] == Catch::Approx(fd).epsilon(1e-6).margin(1e-7));
        }
    }
}

TEST_CASE("quadratic Coulomb equilibrium") {
    const EquilibriumSpec eq(3, 2.0);
    // V(x) = ((d-2)/(2 R^d)) |x|^2 = |x|^2 / 16 for d=3, R=2
    REQUIRE(eq.potential({2, 0, 0}) == Catch::Approx(0.25));
    const Vec g = eq.potential_grad({2, 0, 0});
    REQUIRE(g[0] == Catch::Approx(0.25));
    REQUIRE(g[1] == 0.0);
    REQUIRE(eq.ball_volume() == Catch::Approx(4.0 / 3.0 * 3.14159265358979323846 * 8.0).epsilon(1e-12));
    REQUIRE(eq.equilibrium_density().density({1, 1, 1}) == 1.0);
    REQUIRE_THROWS_AS(EquilibriumSpec(2, 1.0), std::invalid_argument);
}

TEST_CASE("synthetic classification data shape and determinism") {
    RngStream a(21, 0), b(21, 0);
    const ClassificationData da = synthesize_classification_data(50, 10, 4.0, a);
    const ClassificationData db = synthesize_classification_data(50, 10, 4.0, b);
    REQUIRE(da.features.size() == 50);
    REQUIRE(da.labels.size() == 50);
    REQUIRE(da.test_points.size() == 10);
    int ones = 0;
    for (int t : da.labels) ones += t;
    REQUIRE(ones == 25);  // balanced
    REQUIRE(da.features == db.features);
    REQUIRE(da.labels == db.labels);
    REQUIRE(da.test_points == db.test_points);
}

TEST_CASE("zero separation decouples labels from features") {
    // With identical class distributions the first coordinate carries no
    // label information: the label/feature correlation stays small.
    double worst = 0.0;
    for (int seed = 0; seed < 50; ++seed) {
        RngStream rng(static_cast<std::uint64_t>(seed), 3);
        const ClassificationData d = synthesize_classification_data(200, 1, 0.0, rng);
        double mx = 0.0, mt = 0.0;
        for (std::size_t i = 0; i < 200; ++i) {
            mx += d.features[i][0];
            mt += d.labels[i];
        }
        mx /= 200.0;
        mt /= 200.0;
        double cov = 0.0, vx = 0.0, vt = 0.0;
        for (std::size_t i = 0; i < 200; ++i) {
            cov += (d.features[i][0] - mx) * (d.labels[i] - mt);
            vx += (d.features[i][0] - mx) * (d.features[i][0] - mx);
            vt += (d.labels[i] - mt) * (d.labels[i] - mt);
        }
        worst = std::max(worst, std::abs(cov / std::sqrt(vx * vt)));
    }
    REQUIRE(worst < 0.35);
}

TEST_CASE("density rescaling shifts the log-density by a constant") {
    const TargetDensity t = TargetDensity::truncated_gaussian(2, 1.0);
    const TargetDensity scaled = t.with_log_scale(3.0);
    const Vec x{0.4, -0.2};
    REQUIRE(scaled.log_unnorm_density(x) == Catch::Approx(t.log_unnorm_density(x) + 3.0));
}
