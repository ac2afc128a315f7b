#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gibbsquad/common.hpp"
#include "gibbsquad/gibbs.hpp"
#include "gibbsquad/measures.hpp"
#include "gibbsquad/rng.hpp"
#include "gibbsquad/targets.hpp"

namespace gibbsquad {

struct ChainDiagnostics {
    double acceptance_rate = 0.0;  // accepted / proposed, over all steps
    long steps = 0;
    double final_step_size = 0.0;
};

namespace detail {
// Robbins-Monro update on the log step size toward 50% acceptance.
inline void adapt_log_step(double& log_step, long t, double acc_prob) {
    const double gamma = std::pow(static_cast<double>(t), -0.6);
    log_step += gamma * (acc_prob - 0.5);
}
}  // namespace detail

// Random-walk Metropolis targeting an unnormalized density with compact
// support. Runs `steps` iterations from a uniform draw in the support ball
// and returns the post-burn-in history (one state per iteration, repeats
// included). The proposal scale adapts during burn-in only, so the chain
// after burn-in is a fixed Metropolis kernel.
inline std::pair<std::vector<Vec>, ChainDiagnostics> rwmh_chain(const TargetDensity& target, long steps,
                                                                long burn_in, RngStream& rng) {
    if (steps <= burn_in || burn_in < 0) throw std::invalid_argument("need steps > burn_in >= 0");
    const int d = target.dim();
    Vec x = rng.uniform_in_ball(d, target.support_radius());
    double logp = target.log_unnorm_density(x);
    while (!std::isfinite(logp)) {  // boundary draw, retry
        x = rng.uniform_in_ball(d, target.support_radius());
        logp = target.log_unnorm_density(x);
    }

    double log_step = std::log(0.5 * target.support_radius());
    std::vector<Vec> history;
    history.reserve(static_cast<std::size_t>(steps - burn_in));
    long accepted = 0;
    for (long t = 1; t <= steps; ++t) {
        const double step = std::exp(log_step);
        Vec prop(x);
        for (auto& c : prop) c += step * rng.gaussian();
        const double logq = target.log_unnorm_density(prop);
        const double log_ratio = logq - logp;
        const double acc_prob = std::isfinite(log_ratio) ? std::min(1.0, std::exp(std::min(0.0, log_ratio))) : 0.0;
        if (std::log(std::max(rng.uniform(), 1e-300)) < log_ratio) {
            x = std::move(prop);
            logp = logq;
            ++accepted;
        }
        if (t <= burn_in) detail::adapt_log_step(log_step, t, acc_prob);
        if (t > burn_in) history.push_back(x);
    }
    ChainDiagnostics diag;
    diag.steps = steps;
    diag.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(steps);
    diag.final_step_size = std::exp(log_step);
    return {std::move(history), diag};
}

// Initial configuration for MALA: categorical subsample of the background
// atoms with a small Gaussian jitter to avoid coincident points.
inline ParticleConfiguration init_from_background(const WeightedSample& bg, long n, double jitter_sigma,
                                                  RngStream& rng) {
    std::vector<double> cdf(bg.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < bg.size(); ++i) {
        acc += bg.weights[i];
        cdf[i] = acc;
    }
    ParticleConfiguration x;
    x.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const double u = rng.uniform() * acc;
        std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (idx >= bg.size()) idx = bg.size() - 1;
        Vec p = bg.points[idx];
        for (auto& c : p) c += jitter_sigma * rng.gaussian();
        x.push_back(std::move(p));
    }
    return x;
}

// Metropolis-adjusted Langevin chain on (R^d)^n targeting exp(-beta_n H_n^Q).
// Whole-configuration updates: proposal mean y - alpha*beta*grad H(y),
// covariance 2*alpha*I, alpha = alpha0 / beta_n. alpha0 adapts toward 50%
// acceptance during the first T/5 iterations and is frozen afterwards.
inline std::pair<ParticleConfiguration, ChainDiagnostics> mala_gibbs(
    const GibbsConfig& cfg, long T, double alpha0, RngStream& rng, ParticleConfiguration init,
    const std::function<void(const ParticleConfiguration&, long)>& observer = {}) {
    if (T < 1 || alpha0 <= 0.0) throw std::invalid_argument("need T >= 1 and alpha0 > 0");
    const double beta = cfg.beta();
    ParticleConfiguration y = std::move(init);
    std::vector<Vec> grad;
    double energy = hnq_energy_and_grad(cfg, y, grad);
    if (!std::isfinite(energy)) throw NumericalError("invalid initial configuration");

    double log_alpha0 = std::log(alpha0);
    const long adapt_until = std::max<long>(1, T / 5);
    long accepted = 0;
    ParticleConfiguration prop(y.size(), Vec(static_cast<std::size_t>(cfg.dim)));
    std::vector<Vec> prop_grad;

    for (long t = 1; t <= T; ++t) {
        const double alpha = std::exp(log_alpha0) / beta;
        const double drift = alpha * beta;
        const double noise = std::sqrt(2.0 * alpha);

        for (std::size_t i = 0; i < y.size(); ++i)
            for (int k = 0; k < cfg.dim; ++k)
                prop[i][k] = y[i][k] - drift * grad[i][k] + noise * rng.gaussian();

        const double prop_energy = hnq_energy_and_grad(cfg, prop, prop_grad);
        double acc_prob = 0.0;
        bool accept = false;
        if (std::isfinite(prop_energy)) {
            // Forward/backward proposal densities differ through the drift.
            double log_q_fwd = 0.0, log_q_bwd = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i)
                for (int k = 0; k < cfg.dim; ++k) {
                    const double f = prop[i][k] - (y[i][k] - drift * grad[i][k]);
                    const double b = y[i][k] - (prop[i][k] - drift * prop_grad[i][k]);
                    log_q_fwd -= f * f;
                    log_q_bwd -= b * b;
                }
            log_q_fwd /= 4.0 * alpha;
            log_q_bwd /= 4.0 * alpha;
            const double log_acc = -beta * (prop_energy - energy) + log_q_bwd - log_q_fwd;
            acc_prob = std::min(1.0, std::exp(std::min(0.0, log_acc)));
            accept = std::log(std::max(rng.uniform(), 1e-300)) < log_acc;
        }
        if (accept) {
            y.swap(prop);
            grad.swap(prop_grad);
            energy = prop_energy;
            ++accepted;
        }
        if (t <= adapt_until) detail::adapt_log_step(log_alpha0, t, acc_prob);
        if (observer) observer(y, t);
    }
    ChainDiagnostics diag;
    diag.steps = T;
    diag.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(T);
    diag.final_step_size = std::exp(log_alpha0);
    return {std::move(y), diag};
}

// Background from the (optionally thinned) post-burn-in history of a
// Metropolis chain targeting pi; uniform weights.
inline WeightedSample build_background_mcmc(const TargetDensity& target, long m_atoms, long burn_in,
                                            long subsample, RngStream& rng) {
    if (m_atoms < 1) throw std::invalid_argument("need at least one background atom");
    auto [history, diag] = rwmh_chain(target, burn_in + m_atoms, burn_in, rng);
    (void)diag;
    if (subsample > 1) {
        std::vector<Vec> thinned;
        for (std::size_t i = subsample - 1; i < history.size(); i += static_cast<std::size_t>(subsample))
            thinned.push_back(history[i]);
        history = std::move(thinned);
    }
    return uniform_empirical(std::move(history));
}

// Importance-reweighted Coulomb gas background: runs MALA on the Coulomb-gas
// energy with the exact quadratic potential (whose equilibrium is the
// uniform ball), then reweights the atoms toward the target.
inline WeightedSample build_background_coulomb(const EquilibriumSpec& eq, const TargetDensity& target,
                                               long n, BetaSchedule schedule, long T, RngStream& rng,
                                               double alpha0 = 0.1) {
    if (target.support_radius() > eq.R) throw std::invalid_argument("target escapes equilibrium support");
    GibbsConfig cfg(n, schedule, KernelSpec::coulomb(eq.d), make_quadratic_coulomb_potential(eq), eq.d);
    ParticleConfiguration init;
    init.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) init.push_back(rng.uniform_in_ball(eq.d, eq.R));
    auto [config, diag] = mala_gibbs(cfg, T, alpha0, rng, std::move(init));
    (void)diag;
    return importance_weights(config, target, eq.equilibrium_density());
}

// Checkpoint: particle CSV plus JSON sidecar with step, step size and the
// exact rng engine state.
inline void write_checkpoint(const std::string& path_base, const ParticleConfiguration& config,
                             long step, double step_size, const RngStream& rng) {
    write_csv(uniform_empirical(config), path_base + ".csv");
    nlohmann::json j;
    j["step"] = step;
    j["step_size"] = step_size;
    j["rng_state"] = rng.save_state();
    std::ofstream out(path_base + ".json");
    if (!out) throw std::runtime_error("cannot open " + path_base + ".json");
    out << j.dump(2) << "\n";
}

}  // namespace gibbsquad
