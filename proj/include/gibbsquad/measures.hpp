#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gibbsquad/common.hpp"
#include "gibbsquad/targets.hpp"

namespace gibbsquad {

// Finitely supported probability measure: atoms plus nonnegative weights
// summing to one. Immutable after construction.
struct WeightedSample {
    std::vector<Vec> points;
    std::vector<double> weights;
    int dim = 0;

    std::size_t size() const { return points.size(); }

    void validate() const {
        if (points.empty()) throw std::invalid_argument("empty sample");
        if (points.size() != weights.size()) throw std::invalid_argument("points/weights length mismatch");
        double sum = 0.0;
        for (const auto& p : points) {
            if (static_cast<int>(p.size()) != dim) throw std::invalid_argument("dimension mismatch");
            if (!all_finite(p)) throw std::invalid_argument("non-finite atom");
        }
        for (double w : weights) {
            if (!(w >= 0.0)) throw std::invalid_argument("negative weight");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("weights do not sum to 1");
    }
};

// Signed atomic measure, used only for energy evaluation. Charges carry the
// sign; there is no normalization constraint.
struct SignedAtomicMeasure {
    std::vector<Vec> points;
    std::vector<double> charges;
    int dim = 0;

    std::size_t size() const { return points.size(); }
};

inline WeightedSample uniform_empirical(std::vector<Vec> points) {
    if (points.empty()) throw std::invalid_argument("empty sample");
    WeightedSample s;
    s.dim = static_cast<int>(points.front().size());
    const double w = 1.0 / static_cast<double>(points.size());
    s.weights.assign(points.size(), w);
    s.points = std::move(points);
    s.validate();
    return s;
}

// Self-normalized importance weights W(x) = pi'(x) / mu_V'(x), with weight 0
// outside the support of the target. Invariant to positive rescaling of the
// target density. All target densities zero is signaled as an error rather
// than returning the all-zero weight vector.
inline WeightedSample importance_weights(const std::vector<Vec>& points, const TargetDensity& target,
                                         const TargetDensity& equilibrium) {
    if (points.empty()) throw std::invalid_argument("empty sample");
    WeightedSample s;
    s.dim = static_cast<int>(points.front().size());
    s.points = points;
    s.weights.resize(points.size());

    double sum = 0.0;
    std::size_t positive = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double p = target.density(points[i]);
        double w = 0.0;
        if (p > 0.0) {
            const double q = equilibrium.density(points[i]);
            if (!(q > 0.0)) throw NumericalError("equilibrium density vanishes on target support");
            w = p / q;
            ++positive;
        }
        s.weights[i] = w;
        sum += w;
    }
    if (sum <= 0.0) throw NumericalError("degenerate weights");
    for (auto& w : s.weights) w /= sum;

    // Effective-support collapse is a diagnostic, not an error.
    if (static_cast<double>(positive) < std::sqrt(static_cast<double>(points.size())))
        std::cerr << "warning: importance weights concentrated on " << positive << " of "
                  << points.size() << " atoms\n";
    s.validate();
    return s;
}

// mu - nu as a signed atomic measure; total charge is zero by construction.
inline SignedAtomicMeasure as_signed_difference(const WeightedSample& a, const WeightedSample& b) {
    if (a.dim != b.dim) throw std::invalid_argument("dimension mismatch");
    SignedAtomicMeasure m;
    m.dim = a.dim;
    m.points = a.points;
    m.charges = a.weights;
    m.points.insert(m.points.end(), b.points.begin(), b.points.end());
    for (double w : b.weights) m.charges.push_back(-w);
    return m;
}

inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_csv(const WeightedSample& s, std::ostream& out) {
    out << "w";
    for (int k = 1; k <= s.dim; ++k) out << ",x" << k;
    out << "\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_full(s.weights[i]);
        for (double c : s.points[i]) out << "," << format_full(c);
        out << "\n";
    }
}

inline void write_csv(const WeightedSample& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_csv(s, out);
}

inline WeightedSample read_weighted_sample_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
    int dim = 0;
    for (char c : line)
        if (c == ',') ++dim;
    WeightedSample s;
    s.dim = dim;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        if (!std::getline(row, cell, ',')) break;
        s.weights.push_back(std::stod(cell));
        Vec p;
        while (std::getline(row, cell, ',')) p.push_back(std::stod(cell));
        if (static_cast<int>(p.size()) != dim) throw std::runtime_error("ragged CSV row");
        s.points.push_back(std::move(p));
    }
    s.validate();
    return s;
}

inline WeightedSample read_weighted_sample_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_weighted_sample_csv(in);
}

}  // namespace gibbsquad
