#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace isk {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Value of the counter-based generator at (seed, stream, counter).
inline std::uint64_t counter_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (stream * 0xD2B74407B1CE6E93ULL));
    h = splitmix64(h ^ (counter * 0x8BB84B93962EACC9ULL));
    return h;
}

/**
 * Counter-based random stream: the draw sequence depends only on
 * (seed, stream), never on shared state, so parallel workers get
 * reproducible values by construction. Streams are cheap to create;
 * per-sample streams keyed by the sample index give scheduling-independent
 * Monte Carlo.
 */
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64() { return counter_rng(seed_, stream_, counter_++); }

    // [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    // strictly inside (0, 1)
    double uniform01_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }
    double uniform_real(double a, double b) { return a + (b - a) * uniform01(); }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform01_open();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    std::complex<double> complex_gaussian() {
        double re = gaussian(), im = gaussian();
        return {re, im};
    }

    /// Uniform point on the unit sphere of C^n.
    std::vector<std::complex<double>> unit_sphere_point(int n) {
        std::vector<std::complex<double>> v(n);
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& z : v) {
                z = complex_gaussian();
                norm2 += std::norm(z);
            }
        } while (norm2 < 1e-30);
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& z : v) z *= inv;
        return v;
    }

  private:
    std::uint64_t seed_, stream_, counter_ = 0;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace isk
