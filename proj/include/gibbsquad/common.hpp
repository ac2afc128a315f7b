#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gibbsquad {

// A point in R^d. Dimension is fixed per experiment and checked at module
// boundaries rather than encoded in the type.
using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline double sq_norm(const Vec& a) { return dot(a, a); }

inline double norm(const Vec& a) { return std::sqrt(sq_norm(a)); }

inline double sq_dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

inline void check_same_dim(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
}

inline bool all_finite(const Vec& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

// Raised when a config file or config string cannot be interpreted.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a computation produces an unusable numerical state.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// FNV-1a, used to derive replicate stream ids from experiment coordinates.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace gibbsquad
