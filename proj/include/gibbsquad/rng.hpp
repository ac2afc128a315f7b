#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>

#include "gibbsquad/common.hpp"

namespace gibbsquad {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace detail

// Reproducible random stream. Identical (seed, stream_id) pairs replay the
// same draws; distinct stream_ids give independent streams. Gaussians use
// Box-Muller on raw 53-bit uniforms so draws do not depend on the standard
// library's distribution implementations.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id) {
        std::uint64_t s = seed ^ 0xA3C59AC2F0525B41ULL;
        std::uint64_t a = detail::splitmix64(s);
        s ^= stream_id * 0x9E3779B97F4A7C15ULL;
        std::uint64_t b = detail::splitmix64(s);
        std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal; consumes exactly two uniforms per call.
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    Vec gaussian_vec(int d) {
        Vec v(static_cast<std::size_t>(d));
        for (auto& x : v) x = gaussian();
        return v;
    }

    // Uniform on the closed ball B(0, radius) via radial decomposition.
    Vec uniform_in_ball(int d, double radius) {
        Vec v = gaussian_vec(d);
        const double nv = norm(v);
        const double r = radius * std::pow(uniform(), 1.0 / d);
        const double scale = (nv > 0.0) ? r / nv : 0.0;
        for (auto& x : v) x *= scale;
        return v;
    }

    // Engine state as text, for checkpoint sidecars.
    std::string save_state() const {
        std::ostringstream os;
        os << engine_;
        return os.str();
    }

    void load_state(const std::string& state) {
        std::istringstream is(state);
        is >> engine_;
        if (!is) throw std::runtime_error("invalid rng state");
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

}  // namespace gibbsquad
