#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "gibbsquad/diagnostics.hpp"
#include "gibbsquad/measures.hpp"
#include "gibbsquad/rng.hpp"
#include "gibbsquad/targets.hpp"

using namespace gibbsquad;

TEST_CASE("uniform_empirical assigns equal weights") {
    const WeightedSample single = uniform_empirical({{0, 0, 0}});
    REQUIRE(single.weights == std::vector<double>{1.0});

    const WeightedSample four = uniform_empirical({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}});
    for (double w : four.weights) REQUIRE(w == 0.25);

    const WeightedSample two = uniform_empirical({{0.0}, {1.0}});
    REQUIRE(two.weights[0] + two.weights[1] == 1.0);

    REQUIRE_THROWS_WITH(uniform_empirical({}), "empty sample");
}

TEST_CASE("mixed dimensions are rejected") {
    REQUIRE_THROWS_WITH(uniform_empirical({{0, 0}, {0, 0, 0}}), "dimension mismatch");
}

TEST_CASE("importance weights with equal densities are uniform") {
    const TargetDensity ball = TargetDensity::uniform_ball(3, 1.0);
    RngStream rng(1, 0);
    std::vector<Vec> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(rng.uniform_in_ball(3, 0.9));
    const WeightedSample s = importance_weights(pts, ball, ball);
    for (double w : s.weights) REQUIRE(w == Catch::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("atoms outside the target support get exactly zero weight") {
    const TargetDensity target = TargetDensity::uniform_ball(2, 0.5);
    const TargetDensity eq = TargetDensity::uniform_ball(2, 1.0);
    const std::vector<Vec> pts{{0.1, 0.1}, {0.9, 0.0}, {0.0, -0.2}};
    const WeightedSample s = importance_weights(pts, target, eq);
    REQUIRE(s.weights[1] == 0.0);
    REQUIRE(s.weights[0] == Catch::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("importance weights are invariant to positive rescaling of the target") {
    const TargetDensity target = TargetDensity::truncated_gaussian(3, 0.5);
    const TargetDensity eq = TargetDensity::uniform_ball(3, 3.0);
    RngStream rng(2, 0);
    std::vector<Vec> pts;
    for (int i = 0; i < 40; ++i) pts.push_back(rng.uniform_in_ball(3, 3.0));
    const WeightedSample a = importance_weights(pts, target, eq);
    const WeightedSample b = importance_weights(pts, target.with_log_scale(std::log(17.3)), eq);
    for (std::size_t i = 0; i < a.size(); ++i)
        REQUIRE(std::abs(a.weights[i] - b.weights[i]) < 1e-12);
}

TEST_CASE("all-zero target densities are an error") {
    const TargetDensity target = TargetDensity::uniform_ball(2, 0.1);
    const TargetDensity eq = TargetDensity::uniform_ball(2, 1.0);
    REQUIRE_THROWS_AS(importance_weights({{0.5, 0.5}, {0.9, 0.0}}, target, eq), NumericalError);
}

TEST_CASE("signed difference concatenates atoms with zero total charge") {
    const WeightedSample a = uniform_empirical({{0, 0}, {1, 0}, {0, 1}});
    const WeightedSample b = uniform_empirical({{2, 0}, {0, 2}, {1, 1}, {2, 2}, {3, 0}});
    const SignedAtomicMeasure m = as_signed_difference(a, b);
    REQUIRE(m.size() == 8);
    double total = 0.0;
    for (double c : m.charges) total += c;
    REQUIRE(std::abs(total) < 1e-12);

    const SignedAtomicMeasure pair =
        as_signed_difference(uniform_empirical({{0.0, 0.0}}), uniform_empirical({{1.0, 1.0}}));
    REQUIRE(pair.charges == std::vector<double>{1.0, -1.0});
}

TEST_CASE("a measure minus itself has negligible energy") {
    RngStream rng(3, 0);
    std::vector<Vec> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(rng.gaussian_vec(3));
    const WeightedSample a = uniform_empirical(pts);
    for (const auto& k : {KernelSpec::gaussian(0.5), KernelSpec::riesz(1.0, 0.1)}) {
        const double e = interaction_energy(k, as_signed_difference(a, a));
        REQUIRE(std::abs(e) <= 1e-10 * k.diag_sup());
    }
}

TEST_CASE("weighted sample CSV round-trips bit-for-bit") {
    RngStream rng(4, 0);
    std::vector<Vec> pts;
    for (int i = 0; i < 15; ++i) pts.push_back(rng.gaussian_vec(3));
    const WeightedSample s = uniform_empirical(pts);

    std::stringstream buf;
    write_csv(s, buf);
    REQUIRE(buf.str().substr(0, 11) == "w,x1,x2,x3\n");
    const WeightedSample back = read_weighted_sample_csv(buf);
    REQUIRE(back.dim == s.dim);
    REQUIRE(back.points == s.points);
    REQUIRE(back.weights == s.weights);
}
