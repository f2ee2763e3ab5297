#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <vector>

#include "isk/chow.hpp"
#include "isk/functionals.hpp"
#include "isk/rng.hpp"

namespace isk {

struct MCConfig {
    std::int64_t samples = 100000;
    std::uint64_t seed = 1;
    bool antithetic = false;
    int jobs = 1;
};

struct ChowNormEstimate {
    double log_norm_sq;  // average of log |R(u,v)|^2 over the FS spheres
    double se;           // standard error of the average
    std::int64_t samples;

    double log_norm() const { return 0.5 * log_norm_sq; }
};

namespace detail {

// Coordinate-reversed conjugate point: a measure-preserving involution of the
// sphere that genuinely moves resultant values, used for antithetic pairs.
inline std::vector<Complex> antithetic_point(const std::vector<Complex>& v) {
    std::vector<Complex> w(v.rbegin(), v.rend());
    for (auto& z : w) z = std::conj(z);
    return w;
}

}  // namespace detail

/**
 * Monte Carlo estimate of the FS-induced norm of a resultant vector:
 * the average of log |R(f,g)|^2 over independent uniform points of the unit
 * spheres of the two coefficient spaces. Counter-based per-sample streams
 * keyed by (seed, sample index) make the estimate reproducible bit for bit
 * for any thread count; the same (seed, index) pairs give common random
 * numbers across different vectors of the same format.
 */
inline ChowNormEstimate chow_norm(const ChowVector& R, const MCConfig& mc) {
    if (mc.samples < 1000) throw std::invalid_argument("chow_norm: need at least 1000 samples");
    const int n0 = R.spec().d0 + 1, n1 = R.spec().d1 + 1;

    // degenerate-vector guard
    {
        int nonzero = 0;
        for (int probe = 0; probe < 8; ++probe) {
            RngStream rng(mc.seed ^ 0x6b43a9b5ULL, static_cast<std::uint64_t>(probe));
            BinaryFormC f(R.spec().d0, rng.unit_sphere_point(n0));
            BinaryFormC g(R.spec().d1, rng.unit_sphere_point(n1));
            if (std::abs(R.eval(f, g)) > 1e-250) ++nonzero;
        }
        if (nonzero == 0) throw std::domain_error("chow_norm: degenerate (zero) vector");
    }

    const std::int64_t block_size = 4096;
    const std::int64_t nblocks = (mc.samples + block_size - 1) / block_size;
    std::vector<double> block_sum(nblocks, 0.0), block_sumsq(nblocks, 0.0);

    auto do_block = [&](std::int64_t b) {
        double s = 0.0, s2 = 0.0;
        std::int64_t lo = b * block_size, hi = std::min(mc.samples, lo + block_size);
        for (std::int64_t i = lo; i < hi; ++i) {
            // antithetic pairing uses the partner's stream for the base draw
            std::int64_t base = (mc.antithetic && (i & 1)) ? i - 1 : i;
            RngStream rng(mc.seed, static_cast<std::uint64_t>(base) + 1);
            std::vector<Complex> u = rng.unit_sphere_point(n0);
            std::vector<Complex> v = rng.unit_sphere_point(n1);
            if (mc.antithetic && (i & 1)) {
                u = detail::antithetic_point(u);
                v = detail::antithetic_point(v);
            }
            BinaryFormC f(R.spec().d0, std::move(u));
            BinaryFormC g(R.spec().d1, std::move(v));
            double a = std::abs(R.eval(f, g));
            if (a <= 0.0 || !std::isfinite(a))
                throw std::runtime_error("chow_norm: vanishing or non-finite sample");
            double val = 2.0 * std::log(a);
            s += val;
            s2 += val * val;
        }
        block_sum[b] = s;
        block_sumsq[b] = s2;
    };

    if (mc.jobs <= 1) {
        for (std::int64_t b = 0; b < nblocks; ++b) do_block(b);
    } else {
        std::atomic<std::int64_t> next{0};
        std::vector<std::future<void>> futs;
        for (int w = 0; w < mc.jobs; ++w)
            futs.push_back(std::async(std::launch::async, [&]() {
                for (std::int64_t b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1))
                    do_block(b);
            }));
        for (auto& fu : futs) fu.get();
    }

    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t b = 0; b < nblocks; ++b) {
        sum += block_sum[b];
        sumsq += block_sumsq[b];
    }
    double n = static_cast<double>(mc.samples);
    double mean = sum / n;
    double var = std::max(0.0, sumsq / n - mean * mean);
    return {mean, std::sqrt(var / n), mc.samples};
}

struct NormDifference {
    double delta;  // E[log|R1|^2 - log|R0|^2] with common random numbers
    double se;
};

/// Common-random-number difference of two log-squared norms of vectors with
/// the same coefficient-space format.
inline NormDifference chow_norm_difference(const ChowVector& moved, const ChowVector& base,
                                           const MCConfig& mc) {
    if (moved.spec().d0 != base.spec().d0 || moved.spec().d1 != base.spec().d1)
        throw std::invalid_argument("chow_norm_difference: format mismatch");
    const int n0 = base.spec().d0 + 1, n1 = base.spec().d1 + 1;

    const std::int64_t block_size = 4096;
    const std::int64_t nblocks = (mc.samples + block_size - 1) / block_size;
    std::vector<double> block_sum(nblocks, 0.0), block_sumsq(nblocks, 0.0);

    auto do_block = [&](std::int64_t b) {
        double s = 0.0, s2 = 0.0;
        std::int64_t lo = b * block_size, hi = std::min(mc.samples, lo + block_size);
        for (std::int64_t i = lo; i < hi; ++i) {
            RngStream rng(mc.seed, static_cast<std::uint64_t>(i) + 1);
            BinaryFormC f(base.spec().d0, rng.unit_sphere_point(n0));
            BinaryFormC g(base.spec().d1, rng.unit_sphere_point(n1));
            double a = std::abs(moved.eval(f, g));
            double c = std::abs(base.eval(f, g));
            if (a <= 0.0 || c <= 0.0 || !std::isfinite(a) || !std::isfinite(c))
                throw std::runtime_error("chow_norm_difference: degenerate sample");
            double val = 2.0 * (std::log(a) - std::log(c));
            s += val;
            s2 += val * val;
        }
        block_sum[b] = s;
        block_sumsq[b] = s2;
    };
    if (mc.jobs <= 1) {
        for (std::int64_t b = 0; b < nblocks; ++b) do_block(b);
    } else {
        std::atomic<std::int64_t> next{0};
        std::vector<std::future<void>> futs;
        for (int w = 0; w < mc.jobs; ++w)
            futs.push_back(std::async(std::launch::async, [&]() {
                for (std::int64_t b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1))
                    do_block(b);
            }));
        for (auto& fu : futs) fu.get();
    }

    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t b = 0; b < nblocks; ++b) {
        sum += block_sum[b];
        sumsq += block_sumsq[b];
    }
    double n = static_cast<double>(mc.samples);
    double mean = sum / n;
    double var = std::max(0.0, sumsq / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

struct LognormResult {
    double lhs;      // J_{chi,c} of the group potential, by quadrature
    double rhs;      // log-norm differences of the resultant vectors
    double offset;   // lhs - rhs
    double se;       // Monte Carlo standard error of rhs
    std::int64_t samples;
    std::uint64_t seed;
};

/**
 * Compares the twisted functional of a group potential with the log-norm
 * expression through the resultant vectors of the pairing: moving sigma on
 * the sections of O(ma) changes
 *    J_{chi,c}(phi_sigma)  and  D log||sigma R_{ma,b}|| - C D log||sigma R_{ma,ma}||
 * by the same amount up to a sigma-independent offset. Log-squared averages
 * are used on the right; the offset absorbs the universal constants.
 */
inline LognormResult lognorm_J(int a, int b, int m, const Rational& c1, const Mat<Complex>& sigma,
                               const MCConfig& mc, const QuadratureGrid& grid, int jobs = 1) {
    PotentialP1 phi(m, sigma);
    double lhs = functionals_p1(phi, a, b, c1, grid, jobs).j_chi_c;

    ChowVector v = application_v_vector(m, a, b);
    ChowVector w = application_w_vector(m, a);
    MCConfig mc_v = mc, mc_w = mc;
    mc_v.seed = splitmix64(mc.seed ^ 0x11d5c14fb11ULL);
    mc_w.seed = splitmix64(mc.seed ^ 0x7a0f3b92c03ULL);
    mc_v.jobs = mc_w.jobs = std::max(mc.jobs, jobs);

    NormDifference dv = chow_norm_difference(v.acted(sigma), v, mc_v);
    NormDifference dw = chow_norm_difference(w.acted(sigma), w, mc_w);

    double C = to_double(c1) * b / a;
    LognormResult out;
    out.lhs = lhs;
    out.rhs = dv.delta - C * dw.delta;
    out.offset = out.lhs - out.rhs;
    out.se = std::sqrt(dv.se * dv.se + C * C * dw.se * dw.se);
    out.samples = mc.samples;
    out.seed = mc.seed;
    return out;
}

}  // namespace isk
