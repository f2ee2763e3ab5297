#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "isk/arcs.hpp"
#include "isk/functionals.hpp"

namespace isk {

enum class FunctionalKind { Energy, J, JChiC };

inline const char* functional_name(FunctionalKind k) {
    switch (k) {
        case FunctionalKind::Energy: return "E";
        case FunctionalKind::J: return "J";
        case FunctionalKind::JChiC: return "Jchi";
    }
    return "?";
}

struct SlopeRow {
    int j;
    double abs_z;
    double value;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // max absolute deviation from the affine fit
    bool overflow_warning = false;
    std::vector<SlopeRow> rows;
};

namespace detail {

inline SlopeFit affine_fit(const std::vector<SlopeRow>& rows) {
    SlopeFit fit;
    fit.rows = rows;
    const double n = static_cast<double>(rows.size());
    if (rows.size() < 2) {
        if (!rows.empty()) fit.intercept = rows[0].value;
        return fit;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& r : rows) {
        double x = -std::log(r.abs_z);
        sx += x;
        sy += r.value;
        sxx += x * x;
        sxy += x * r.value;
    }
    double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy * sxx - sx * sxy) / denom;
    for (auto& r : rows) {
        double x = -std::log(r.abs_z);
        fit.residual = std::max(fit.residual, std::abs(r.value - (fit.slope * x + fit.intercept)));
    }
    return fit;
}

inline std::int64_t max_abs_exponent(const ArcMatrix& rho) {
    std::int64_t m = 0;
    for (int i = 0; i < rho.size(); ++i)
        for (int j = 0; j < rho.size(); ++j) {
            const LaurentQ& e = rho.entries()(i, j);
            if (e.is_zero()) continue;
            m = std::max<std::int64_t>(m, std::abs(e.valuation()));
            m = std::max<std::int64_t>(m, std::abs(e.top_degree()));
        }
    return m;
}

}  // namespace detail

/**
 * Least-squares slope of a functional along the potential ray of an arc,
 * sampled on the ladder |z| = 2^-j. A log-radial grid wide enough for the
 * deepest rung keeps the concentrating measures resolved. Rungs whose
 * evaluated matrices overflow doubles are dropped with a warning.
 */
inline SlopeFit slope_fit(FunctionalKind kind, const ArcMatrix& rho, int m, int a, int b,
                          const Rational& c1, int j_min, int j_max, int n_radial = 0,
                          int n_angular = 256, int jobs = 1) {
    if (rho.size() != m * a + 1)
        throw std::invalid_argument("slope_fit: arc must act on the sections of O(ma)");
    if (j_min < 1 || j_max < j_min) throw std::invalid_argument("slope_fit: bad ladder");

    const double lad_depth = j_max * std::log(2.0);
    const double range = 4.0 * lad_depth * std::max<std::int64_t>(detail::max_abs_exponent(rho), 1) + 30.0;
    int nr = n_radial > 0 ? n_radial : std::max(512, static_cast<int>(12 * range));
    QuadratureGrid grid = QuadratureGrid::log_grid(nr, n_angular, range);

    std::vector<SlopeRow> rows;
    bool warn = false;
    for (int j = j_min; j <= j_max; ++j) {
        double z = std::ldexp(1.0, -j);
        Mat<Complex> g = rho.eval(Complex(z, 0.0));
        double big = 0.0;
        for (int r = 0; r < g.rows(); ++r)
            for (int c = 0; c < g.cols(); ++c) big = std::max(big, std::abs(g(r, c)));
        if (!std::isfinite(big) || big > 1e120) {
            warn = true;  // ladder shrunk at this depth
            continue;
        }
        PotentialP1 phi(m, g);
        FunctionalsResult f = functionals_p1(phi.to_potential(), a, b, c1, grid, jobs);
        double value = kind == FunctionalKind::Energy ? f.e
                       : kind == FunctionalKind::J    ? f.j
                                                      : f.j_chi_c;
        rows.push_back({j, z, value});
    }
    SlopeFit fit = detail::affine_fit(rows);
    fit.overflow_warning = warn;
    return fit;
}

/**
 * Floating-point slope of the balanced log-norm ratio
 * p log||rho(z) v|| - q log||rho(z) w||, through numeric contragredient
 * substitution into the exact expansions. The slope recovers the symbolic
 * weight nu after rounding.
 */
inline SlopeFit pair_log_norm_slope(const PairVectors& pair, const ArcMatrix& rho, int j_min,
                                    int j_max) {
    Mat<LaurentQ> inv = rho.inverse();
    auto coeff_norm = [&](const ChowVector& R, Complex z) {
        Mat<Complex> sub(inv.rows(), inv.cols());
        for (int i = 0; i < inv.rows(); ++i)
            for (int jj = 0; jj < inv.cols(); ++jj) sub(i, jj) = inv(i, jj).eval(z);
        auto embed = [](const Rational& r) { return Complex(to_double(r), 0.0); };
        MultiPoly<Complex> acted = substitute_block_linear<Complex>(
            R.expansion(), 0, R.spec().d0 + 1, sub, embed);
        if (R.diagonal_action())
            acted = substitute_block_linear<Complex>(acted, R.spec().d0 + 1, R.spec().d1 + 1, sub,
                                                     [](const Complex& c) { return c; });
        double s = 0.0;
        for (auto& [e, c] : acted.terms()) s += std::norm(c);
        return 0.5 * std::log(s);
    };

    std::vector<SlopeRow> rows;
    for (int j = j_min; j <= j_max; ++j) {
        double z = std::ldexp(1.0, -j);
        double val = pair.balance_p * coeff_norm(pair.v, Complex(z, 0)) -
                     pair.balance_q * coeff_norm(pair.w, Complex(z, 0));
        rows.push_back({j, z, val});
    }
    return detail::affine_fit(rows);
}

}  // namespace isk
