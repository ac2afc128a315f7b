#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "gibbsquad/common.hpp"
#include "gibbsquad/kernels.hpp"
#include "gibbsquad/measures.hpp"

namespace gibbsquad {

enum class DiagonalConvention { include_diagonal, off_diagonal };

// I_K(m) = sum_i sum_j c_i c_j K(x_i, x_j). Non-singular kernels use the
// full double sum including the diagonal; the raw Coulomb kernel is only
// allowed with the off-diagonal convention and pairwise-distinct atoms
// (min gap 1e-12).
inline double interaction_energy(const KernelSpec& kernel, const SignedAtomicMeasure& m,
                                 DiagonalConvention conv = DiagonalConvention::include_diagonal) {
    if (kernel.singular() && conv == DiagonalConvention::include_diagonal)
        throw std::invalid_argument("Coulomb energy on atoms requires the off-diagonal convention");
    const std::size_t n = m.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r2 = sq_dist(m.points[i], m.points[j]);
            if (kernel.singular() && r2 < 1e-24)
                throw NumericalError("coincident atoms under the Coulomb kernel");
            total += 2.0 * m.charges[i] * m.charges[j] * kernel_eval_sq(kernel, r2);
        }
        if (conv == DiagonalConvention::include_diagonal)
            total += m.charges[i] * m.charges[i] * kernel_eval_sq(kernel, 0.0);
    }
    return total;
}

// I_K(a, b) = sum_i sum_j a_i b_j K(x_i, y_j) for two weighted samples.
inline double interaction_cross(const KernelSpec& kernel, const WeightedSample& a,
                                const WeightedSample& b) {
    if (a.dim != b.dim) throw std::invalid_argument("dimension mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j)
            row += b.weights[j] * kernel_eval_sq(kernel, sq_dist(a.points[i], b.points[j]));
        total += a.weights[i] * row;
    }
    return total;
}

inline double interaction_self(const KernelSpec& kernel, const WeightedSample& a) {
    double total = 0.0;
    const double diag = kernel_eval_sq(kernel, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j)
            total += 2.0 * a.weights[i] * a.weights[j] *
                     kernel_eval_sq(kernel, sq_dist(a.points[i], a.points[j]));
        total += a.weights[i] * a.weights[i] * diag;
    }
    return total;
}

// The paper's shifted energy I_K(mu) - 2 I_K(mu, ref); can be negative.
inline double shifted_energy(const KernelSpec& kernel, const WeightedSample& mu,
                             const WeightedSample& reference) {
    if (kernel.singular()) throw std::invalid_argument("MMD requires bounded kernel");
    return interaction_self(kernel, mu) - 2.0 * interaction_cross(kernel, mu, reference);
}

// Full plug-in squared MMD I_K(mu - ref) = I_K(mu) - 2 I_K(mu, ref) + I_K(ref).
inline double worst_case_error_sq(const KernelSpec& kernel, const WeightedSample& mu,
                                  const WeightedSample& reference) {
    if (kernel.singular()) throw std::invalid_argument("MMD requires bounded kernel");
    return shifted_energy(kernel, mu, reference) + interaction_self(kernel, reference);
}

inline double worst_case_error(const KernelSpec& kernel, const WeightedSample& mu,
                               const WeightedSample& reference) {
    return std::sqrt(std::max(0.0, worst_case_error_sq(kernel, mu, reference)));
}

// Unbiased variance, across replicates, of the weighted mean of f.
inline double variance_linear_statistic(const std::vector<WeightedSample>& replicates,
                                        const std::function<double(const Vec&)>& f) {
    if (replicates.size() < 2) throw std::invalid_argument("need at least two replicates");
    std::vector<double> stats;
    stats.reserve(replicates.size());
    for (const auto& s : replicates) {
        double m = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) m += s.weights[i] * f(s.points[i]);
        stats.push_back(m);
    }
    double mean = 0.0;
    for (double v : stats) mean += v;
    mean /= static_cast<double>(stats.size());
    double var = 0.0;
    for (double v : stats) var += (v - mean) * (v - mean);
    return var / static_cast<double>(stats.size() - 1);
}

// Fraction of replicates whose estimates all fall within delta of the
// reference values.
inline double simultaneous_coverage(const std::vector<std::vector<double>>& estimates,
                                    const std::vector<double>& references, double delta) {
    if (estimates.empty()) throw std::invalid_argument("no replicates");
    std::size_t covered = 0;
    for (const auto& row : estimates) {
        if (row.size() != references.size()) throw std::invalid_argument("dimension mismatch");
        bool ok = true;
        for (std::size_t j = 0; j < row.size(); ++j)
            if (std::abs(row[j] - references[j]) > delta) {
                ok = false;
                break;
            }
        if (ok) ++covered;
    }
    return static_cast<double>(covered) / static_cast<double>(estimates.size());
}

// Lower empirical quantile: order statistic at index ceil(q*N) - 1, clamped.
inline double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("empty list");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile order must be in [0,1]");
    std::sort(values.begin(), values.end());
    long idx = static_cast<long>(std::ceil(q * static_cast<double>(values.size()))) - 1;
    idx = std::max<long>(0, std::min<long>(idx, static_cast<long>(values.size()) - 1));
    return values[static_cast<std::size_t>(idx)];
}

// Effective sample size of a scalar chain via the initial-positive-sequence
// estimate of the integrated autocorrelation time.
inline double effective_sample_size(const std::vector<double>& chain) {
    const std::size_t n = chain.size();
    if (n < 4) return static_cast<double>(n);
    double mean = 0.0;
    for (double v : chain) mean += v;
    mean /= static_cast<double>(n);
    double c0 = 0.0;
    for (double v : chain) c0 += (v - mean) * (v - mean);
    c0 /= static_cast<double>(n);
    if (c0 <= 0.0) return static_cast<double>(n);
    double tau = 1.0;
    for (std::size_t lag = 1; lag < n / 2; ++lag) {
        double c = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) c += (chain[i] - mean) * (chain[i + lag] - mean);
        c /= static_cast<double>(n) * c0;
        if (c <= 0.0) break;
        tau += 2.0 * c;
    }
    return static_cast<double>(n) / tau;
}

// Per-replicate records and recomputable aggregates of an experiment.
struct DiagnosticsReport {
    struct Record {
        std::string metric;
        std::string method;
        long n = 0;
        std::uint64_t seed = 0;
        double value = 0.0;
    };
    struct Aggregate {
        std::string metric;
        std::string method;
        long n = 0;
        std::string stat;
        double value = 0.0;
    };

    std::vector<Record> records;
    std::vector<Aggregate> aggregates;

    void add(const std::string& metric, const std::string& method, long n, std::uint64_t seed,
             double value) {
        records.push_back({metric, method, n, seed, value});
    }

    void add_aggregate(const std::string& metric, const std::string& method, long n,
                       const std::string& stat, double value) {
        aggregates.push_back({metric, method, n, stat, value});
    }

    // Canonical ordering: sorted by (metric, method, n, seed) regardless of
    // the order records were produced in.
    void sort_records() {
        std::sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
            return std::tie(a.metric, a.method, a.n, a.seed) < std::tie(b.metric, b.method, b.n, b.seed);
        });
    }

    // quantile_90 / median / variance per (metric, method, n) group.
    void compute_aggregates() {
        sort_records();
        aggregates.clear();
        std::map<std::tuple<std::string, std::string, long>, std::vector<double>> groups;
        for (const auto& r : records) groups[{r.metric, r.method, r.n}].push_back(r.value);
        for (const auto& [key, values] : groups) {
            const auto& [metric, method, n] = key;
            add_aggregate(metric, method, n, "quantile_90", quantile(values, 0.9));
            add_aggregate(metric, method, n, "median", quantile(values, 0.5));
            double mean = 0.0;
            for (double v : values) mean += v;
            mean /= static_cast<double>(values.size());
            double var = 0.0;
            for (double v : values) var += (v - mean) * (v - mean);
            var = values.size() > 1 ? var / static_cast<double>(values.size() - 1) : 0.0;
            add_aggregate(metric, method, n, "variance", var);
        }
    }

    void write_records_csv(std::ostream& out) const {
        out << "metric,method,n,seed,value\n";
        for (const auto& r : records)
            out << r.metric << "," << r.method << "," << r.n << "," << r.seed << ","
                << format_full(r.value) << "\n";
    }

    void write_aggregates_csv(std::ostream& out) const {
        out << "metric,method,n,stat,value\n";
        for (const auto& a : aggregates)
            out << a.metric << "," << a.method << "," << a.n << "," << a.stat << ","
                << format_full(a.value) << "\n";
    }

    void write_csv(const std::string& records_path, const std::string& aggregates_path) const {
        std::ofstream rec(records_path);
        if (!rec) throw std::runtime_error("cannot open " + records_path);
        write_records_csv(rec);
        std::ofstream agg(aggregates_path);
        if (!agg) throw std::runtime_error("cannot open " + aggregates_path);
        write_aggregates_csv(agg);
    }
};

}  // namespace gibbsquad
