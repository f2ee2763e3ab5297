#pragma once

#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <stdexcept>
#include <string>
#include <vector>

#include "isk/binary_form.hpp"
#include "isk/rng.hpp"

namespace isk {

/**
 * Point of the projective line in mass coordinates. u = r^2/(1+r^2) is the
 * Fubini-Study mass of the disc of radius r, so the normalised FS area
 * measure is du dtheta / 2pi. Points with u > 1/2 carry the coordinate of
 * the chart at infinity; pointwise formulas are chart-aware, which keeps
 * every evaluation bounded.
 */
struct P1Point {
    Complex z;    // coordinate in the active chart
    bool upper;   // true: z is the coordinate w = 1/zeta around infinity
    double u;     // FS mass coordinate of the point

    static P1Point from_affine(Complex zeta) {
        double r2 = std::norm(zeta);
        double u = r2 / (1.0 + r2);
        if (u <= 0.5) return {zeta, false, u};
        return {1.0 / zeta, true, u};
    }
    static P1Point from_proj(const P1ProjPoint& p) {
        double na = std::norm(p.alpha), nb = std::norm(p.beta);
        double u = na / (na + nb);
        if (u <= 0.5) return {p.alpha / p.beta, false, u};
        return {p.beta / p.alpha, true, u};
    }
    /// Lower-chart coordinate (may overflow to inf at the pole; use charts).
    Complex affine() const { return upper ? 1.0 / z : z; }
};

/**
 * Product quadrature on the projective line: a radial rule times the
 * trapezoid rule in the angle, with a seeded rotation keeping nodes away
 * from the zeros of the fixed sections.
 *
 * Two radial schemes:
 *  - MassMidpoint: midpoint rule in the mass coordinate u. Robust for
 *    integrands with logarithmic singularities (after subtraction).
 *  - LogTrapezoid: midpoint rule in x = log(u/(1-u)) over [-range, range].
 *    For smooth integrands this is a sinc-type rule: it converges
 *    geometrically and resolves measures that concentrate near the torus
 *    fixed points, as they translate rather than sharpen in x.
 */
struct QuadratureGrid {
    enum class Radial { MassMidpoint, LogTrapezoid };

    int n_radial = 512;
    int n_angular = 512;
    std::uint64_t rotation_seed = 0;
    Radial radial = Radial::MassMidpoint;
    double log_range = 40.0;

    QuadratureGrid() = default;
    QuadratureGrid(int nr, int na, std::uint64_t seed = 0,
                   Radial scheme = Radial::MassMidpoint, double range = 40.0)
        : n_radial(nr), n_angular(na), rotation_seed(seed), radial(scheme), log_range(range) {}

    static QuadratureGrid log_grid(int nr, int na, double range = 40.0,
                                   std::uint64_t seed = 0) {
        return QuadratureGrid(nr, na, seed, Radial::LogTrapezoid, range);
    }

    // Angular offset in (0,1).
    double angular_offset() const {
        double frac = 0.3819660112501051;
        if (rotation_seed != 0)
            frac += static_cast<double>(splitmix64(rotation_seed) >> 11) * 0x1.0p-53;
        frac -= std::floor(frac);
        return frac == 0.0 ? 0.5 : frac;
    }

    P1Point node(int i, int j) const {
        double theta = 6.283185307179586476925286766559 * ((j + angular_offset()) / n_angular);
        double u, r;
        if (radial == Radial::MassMidpoint) {
            u = (i + 0.5) / n_radial;
            r = std::sqrt(u / (1.0 - u));
        } else {
            double x = -log_range + (i + 0.5) * (2.0 * log_range / n_radial);
            r = std::exp(0.5 * x);
            u = 1.0 / (1.0 + std::exp(-x));
        }
        if (u <= 0.5) return {std::polar(r, theta), false, u};
        return {std::polar(1.0 / r, -theta), true, u};
    }

    /// Radial weight of ring i; angular weight 1/n_angular is applied by the
    /// integrator. Weights sum to 1 up to the exponentially small tails of
    /// the log rule.
    double radial_weight(int i) const {
        if (radial == Radial::MassMidpoint) return 1.0 / n_radial;
        double x = -log_range + (i + 0.5) * (2.0 * log_range / n_radial);
        // u(1-u) written through cosh: the plain product underflows to zero
        // once u rounds to 1, silently dropping the far rings.
        return (2.0 * log_range / n_radial) * 0.5 / (1.0 + std::cosh(x));
    }
};

using P1Function = std::function<double(const P1Point&)>;

/**
 * Integral against the normalised Fubini-Study probability measure.
 * Accumulation is ring-major with a fixed pairwise reduction, so the result
 * does not depend on the thread count.
 */
inline double integrate_p1(const P1Function& f, const QuadratureGrid& grid, int jobs = 1) {
    const int nr = grid.n_radial, na = grid.n_angular;
    std::vector<double> ring(nr, 0.0);
    auto do_ring = [&](int i) {
        double s = 0.0;
        for (int j = 0; j < na; ++j) {
            P1Point p = grid.node(i, j);
            double v = f(p);
            if (!std::isfinite(v))
                throw std::runtime_error("integrate_p1: non-finite integrand at u=" +
                                         std::to_string(p.u) + (p.upper ? " (upper chart)" : ""));
            s += v;
        }
        ring[i] = s * grid.radial_weight(i) / na;
    };
    if (jobs <= 1) {
        for (int i = 0; i < nr; ++i) do_ring(i);
    } else {
        std::vector<std::future<void>> futs;
        std::atomic<int> next{0};
        for (int w = 0; w < jobs; ++w)
            futs.push_back(std::async(std::launch::async, [&]() {
                for (int i = next.fetch_add(1); i < nr; i = next.fetch_add(1)) do_ring(i);
            }));
        for (auto& fu : futs) fu.get();
    }
    // pairwise reduction over rings
    std::vector<double> acc = ring;
    size_t n = acc.size();
    while (n > 1) {
        size_t half = (n + 1) / 2;
        for (size_t i = 0; i < n / 2; ++i) acc[i] = acc[2 * i] + acc[2 * i + 1];
        if (n % 2) acc[half - 1] = acc[n - 1];
        n = half;
    }
    return acc[0];
}

/// log of the FS norm of the degree-one form vanishing at the (unit) root p.
inline double log_root_form_fs(const P1ProjPoint& root, const P1Point& p) {
    // |beta x - alpha y| at the point, over (1+|chart z|^2)^{1/2}
    Complex val = p.upper ? (root.beta - root.alpha * p.z) : (root.beta * p.z - root.alpha);
    return std::log(std::abs(val)) - 0.5 * std::log1p(std::norm(p.z));
}

/**
 * Integral of log|s|_FS times a smooth density against the FS measure.
 * The logarithmic singularities are subtracted root by root using the closed
 * form  int log|s_r|_FS dmu = -1/2  for a unit-normalised root form, leaving
 * integrands continuous at the roots.
 */
inline double integrate_log_section_against(const BinaryFormC& s, const P1Function& density,
                                            const QuadratureGrid& grid, int jobs = 1) {
    if (s.is_zero()) throw std::invalid_argument("integrate_log_section: zero section");
    RootSet roots = form_roots(s);
    Complex lambda = leading_factor(s, roots.points);

    double density_mass = integrate_p1(density, grid, jobs);
    double total = std::log(std::abs(lambda)) * density_mass;
    for (auto& root : roots.points) {
        P1Point at_root = P1Point::from_proj(root);
        double d_at_root = density(at_root);
        total += d_at_root * (-0.5);
        total += integrate_p1(
            [&](const P1Point& p) {
                double v = density(p) - d_at_root;
                if (v == 0.0) return 0.0;  // exact hit on the root
                return v * log_root_form_fs(root, p);
            },
            grid, jobs);
    }
    return total;
}

}  // namespace isk
