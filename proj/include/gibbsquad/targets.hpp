#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gibbsquad/common.hpp"
#include "gibbsquad/rng.hpp"

namespace gibbsquad {

inline double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

// p(t = 1 | z, y) for the binary logistic model with intercept: sigmoid of
// y . [z, 1]. y has one more coordinate than z.
inline double logistic_predictive(const Vec& y, const Vec& z) {
    if (y.size() != z.size() + 1) throw std::invalid_argument("dimension mismatch");
    double t = y.back();
    for (std::size_t k = 0; k < z.size(); ++k) t += y[k] * z[k];
    return sigmoid(t);
}

// Unnormalized target density with compact support. All variants are finite
// and continuous strictly inside a ball of radius support_radius() and -inf
// outside; normalizing constants are never computed.
class TargetDensity {
  public:
    enum class Kind { TruncatedGaussian, UniformBall, LogisticPosterior };

    static TargetDensity truncated_gaussian(int d, double sigma, double cutoff_radius = -1.0) {
        if (d < 1 || sigma <= 0.0) throw std::invalid_argument("truncated gaussian needs d >= 1, sigma > 0");
        TargetDensity t;
        t.kind_ = Kind::TruncatedGaussian;
        t.dim_ = d;
        t.sigma_ = sigma;
        t.radius_ = (cutoff_radius > 0.0) ? cutoff_radius : 5.0 * sigma;
        return t;
    }

    static TargetDensity uniform_ball(int d, double radius) {
        if (d < 1 || radius <= 0.0) throw std::invalid_argument("uniform ball needs d >= 1, R > 0");
        TargetDensity t;
        t.kind_ = Kind::UniformBall;
        t.dim_ = d;
        t.radius_ = radius;
        return t;
    }

    // Posterior of binary logistic regression with truncated Gaussian prior.
    // Features live in R^{d-1}; the parameter y in R^d includes the intercept.
    static TargetDensity logistic_posterior(std::vector<Vec> features, std::vector<int> labels,
                                            double prior_sigma, double prior_cutoff = -1.0) {
        if (features.empty() || features.size() != labels.size())
            throw std::invalid_argument("logistic posterior needs matching features/labels");
        TargetDensity t;
        t.kind_ = Kind::LogisticPosterior;
        t.dim_ = static_cast<int>(features.front().size()) + 1;
        for (const auto& z : features)
            if (static_cast<int>(z.size()) + 1 != t.dim_) throw std::invalid_argument("dimension mismatch");
        t.sigma_ = prior_sigma;
        t.radius_ = (prior_cutoff > 0.0) ? prior_cutoff : 5.0 * prior_sigma;
        t.features_ = std::move(features);
        t.labels_ = std::move(labels);
        return t;
    }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    double support_radius() const { return radius_; }

    // Multiplies the unnormalized density by exp(c). Importance weights must
    // be invariant to this; only tests use it.
    TargetDensity with_log_scale(double c) const {
        TargetDensity t = *this;
        t.log_scale_ = c;
        return t;
    }

    double log_unnorm_density(const Vec& x) const {
        if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("dimension mismatch");
        const double r2 = sq_norm(x);
        if (r2 > radius_ * radius_) return -std::numeric_limits<double>::infinity();
        switch (kind_) {
            case Kind::TruncatedGaussian:
                return log_scale_ - 0.5 * r2 / (sigma_ * sigma_);
            case Kind::UniformBall:
                return log_scale_;
            case Kind::LogisticPosterior: {
                double ll = -0.5 * r2 / (sigma_ * sigma_);
                for (std::size_t j = 0; j < features_.size(); ++j) {
                    double t = x.back();
                    for (std::size_t k = 0; k < features_[j].size(); ++k) t += x[k] * features_[j][k];
                    // t_j * t - log(1 + exp(t)), computed stably
                    ll += labels_[j] * t - (t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)));
                }
                return log_scale_ + ll;
            }
        }
        return -std::numeric_limits<double>::infinity();
    }

    // exp(log_unnorm_density), with 0 outside the support.
    double density(const Vec& x) const {
        const double l = log_unnorm_density(x);
        return std::isfinite(l) ? std::exp(l) : 0.0;
    }

    // Gradient of the log unnormalized density, valid strictly inside the
    // support.
    Vec grad_log_density(const Vec& x) const {
        if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("dimension mismatch");
        Vec g(x.size(), 0.0);
        switch (kind_) {
            case Kind::UniformBall:
                return g;
            case Kind::TruncatedGaussian:
                for (std::size_t k = 0; k < x.size(); ++k) g[k] = -x[k] / (sigma_ * sigma_);
                return g;
            case Kind::LogisticPosterior: {
                for (std::size_t k = 0; k < x.size(); ++k) g[k] = -x[k] / (sigma_ * sigma_);
                for (std::size_t j = 0; j < features_.size(); ++j) {
                    double t = x.back();
                    for (std::size_t k = 0; k < features_[j].size(); ++k) t += x[k] * features_[j][k];
                    const double resid = labels_[j] - sigmoid(t);
                    for (std::size_t k = 0; k < features_[j].size(); ++k) g[k] += resid * features_[j][k];
                    g.back() += resid;
                }
                return g;
            }
        }
        return g;
    }

    const std::vector<Vec>& features() const { return features_; }
    const std::vector<int>& labels() const { return labels_; }

  private:
    Kind kind_ = Kind::UniformBall;
    int dim_ = 1;
    double sigma_ = 1.0;
    double radius_ = 1.0;
    double log_scale_ = 0.0;
    std::vector<Vec> features_;
    std::vector<int> labels_;
};

// Quadratic Coulomb equilibrium: V(x) = ((d-2) / (2 R^d)) |x|^2, whose
// equilibrium measure is the uniform distribution on B(0, R). The constant
// equilibrium density is known analytically.
struct EquilibriumSpec {
    int d = 3;
    double R = 1.0;

    EquilibriumSpec(int d_, double R_) : d(d_), R(R_) {
        if (d < 3 || R <= 0.0) throw std::invalid_argument("quadratic Coulomb equilibrium needs d >= 3, R > 0");
    }

    double potential(const Vec& x) const { return 0.5 * (d - 2) / std::pow(R, d) * sq_norm(x); }

    Vec potential_grad(const Vec& x) const {
        Vec g(x.size());
        const double c = (d - 2) / std::pow(R, d);
        for (std::size_t k = 0; k < x.size(); ++k) g[k] = c * x[k];
        return g;
    }

    double ball_volume() const {
        // vol B(0,R) = pi^{d/2} R^d / Gamma(d/2 + 1)
        return std::pow(3.141592653589793238462643, 0.5 * d) * std::pow(R, d) /
               std::tgamma(0.5 * d + 1.0);
    }

    TargetDensity equilibrium_density() const { return TargetDensity::uniform_ball(d, R); }
};

struct ClassificationData {
    std::vector<Vec> features;   // R^2
    std::vector<int> labels;     // {0, 1}
    std::vector<Vec> test_points;
};

// Balanced two-component isotropic Gaussian mixture in the plane; the label
// is the component membership. separation is the distance between the means.
inline ClassificationData synthesize_classification_data(int n_train, int n_test, double separation,
                                                         RngStream& rng) {
    if (n_train < 1 || n_test < 1) throw std::invalid_argument("need n_train, n_test >= 1");
    ClassificationData data;
    const double half = 0.5 * separation;
    auto draw = [&](int label) {
        Vec z{(label ? half : -half) + rng.gaussian(), rng.gaussian()};
        return z;
    };
    for (int i = 0; i < n_train; ++i) {
        const int label = i % 2;  // balanced by construction
        data.features.push_back(draw(label));
        data.labels.push_back(label);
    }
    for (int i = 0; i < n_test; ++i) data.test_points.push_back(draw(i % 2));
    return data;
}

}  // namespace gibbsquad
