#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "isk/laurent.hpp"

namespace isk {

using Complex = std::complex<double>;

/// Point of the projective line, stored as a unit coefficient pair [alpha : beta].
struct P1ProjPoint {
    Complex alpha, beta;

    bool at_infinity(double tol = 1e-12) const { return std::abs(beta) <= tol; }
    Complex affine() const { return alpha / beta; }

    static P1ProjPoint from_affine(Complex z) {
        double n = std::sqrt(std::norm(z) + 1.0);
        return {z / n, Complex(1.0 / n, 0.0)};
    }
    static P1ProjPoint infinity() { return {Complex(1, 0), Complex(0, 0)}; }
};

/**
 * Homogeneous binary form of degree d in (x, y), coefficients for the basis
 * x^{d-j} y^j, j = 0..d. Sections of O(d) on the projective line.
 */
template <class S>
struct BinaryForm {
    int degree = 0;
    std::vector<S> coeff;  // size degree + 1

    BinaryForm() : degree(0), coeff(1, S(0)) {}
    BinaryForm(int d, std::vector<S> c) : degree(d), coeff(std::move(c)) {
        if (static_cast<int>(coeff.size()) != degree + 1)
            throw std::invalid_argument("BinaryForm: coefficient count != degree + 1");
    }

    bool is_zero() const {
        for (auto& c : coeff)
            if (!scalar_is_zero(c)) return false;
        return true;
    }

    S eval(const S& x, const S& y) const {
        // Horner in x/y mixed form: sum c_j x^{d-j} y^j.
        S acc(0);
        for (int j = 0; j <= degree; ++j) {
            S term = coeff[j];
            for (int k = 0; k < degree - j; ++k) term = term * x;
            for (int k = 0; k < j; ++k) term = term * y;
            acc += term;
        }
        return acc;
    }

    // f(z) = form(z, 1), the affine-chart polynomial in z of degree <= d.
    template <class Z>
    Z eval_affine(const Z& z) const {
        Z acc(0);
        for (int j = 0; j <= degree; ++j) acc = acc * z + Z(coeff[j]);
        return acc;
    }

    // Coefficients reversed: the same section read in the chart at infinity.
    BinaryForm reversed() const {
        std::vector<S> c(coeff.rbegin(), coeff.rend());
        return BinaryForm(degree, std::move(c));
    }

    friend bool operator==(const BinaryForm& a, const BinaryForm& b) {
        return a.degree == b.degree && a.coeff == b.coeff;
    }
};

using BinaryFormC = BinaryForm<Complex>;
using BinaryFormQ = BinaryForm<Rational>;

inline BinaryFormC to_complex_form(const BinaryFormQ& f) {
    std::vector<Complex> c(f.coeff.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = Complex(to_double(f.coeff[i]), 0.0);
    return BinaryFormC(f.degree, std::move(c));
}

struct RootSet {
    std::vector<P1ProjPoint> points;  // degree-many entries, multiplicity by repetition
    double max_residual = 0.0;
    bool condition_warning = false;
};

namespace detail {

inline double form_coeff_norm(const BinaryFormC& f) {
    double s = 0.0;
    for (auto& c : f.coeff) s += std::norm(c);
    return std::sqrt(s);
}

}  // namespace detail

/**
 * All d roots of a nonzero degree-d form on the projective line, with
 * multiplicity. Vanishing leading coefficients contribute [1:0]. Finite roots
 * come from companion-matrix eigenvalues of the affine polynomial. Clustered
 * or high-residual roots set condition_warning.
 */
inline RootSet form_roots(const BinaryFormC& f, double cluster_tol = 1e-7) {
    if (f.is_zero()) throw std::invalid_argument("form_roots: zero form");
    RootSet out;
    const double scale = detail::form_coeff_norm(f);

    int lead = 0;
    while (lead <= f.degree && std::abs(f.coeff[lead]) <= 1e-14 * scale) ++lead;
    for (int k = 0; k < lead; ++k) out.points.push_back(P1ProjPoint::infinity());

    // Affine polynomial p(z) = sum_{j=lead}^{d} c_j z^{d-j} has degree d-lead.
    const int n = f.degree - lead;
    if (n > 0) {
        Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
        const Complex c0 = f.coeff[lead];
        // Last column holds -a_i for the monic p(z) = z^n + a_{n-1} z^{n-1} + ... + a_0.
        for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < n; ++i) companion(i, n - 1) = -f.coeff[f.degree - i] / c0;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
        if (es.info() != Eigen::Success) throw std::runtime_error("form_roots: eigensolver failed");
        for (int i = 0; i < n; ++i) out.points.push_back(P1ProjPoint::from_affine(es.eigenvalues()[i]));
    }

    // Residuals of the normalized form at unit-normalized roots.
    for (auto& p : out.points) {
        Complex v = f.eval(p.alpha, p.beta);
        out.max_residual = std::max(out.max_residual, std::abs(v) / scale);
    }
    if (out.max_residual > 1e-8) out.condition_warning = true;
    for (size_t i = 0; i < out.points.size() && !out.condition_warning; ++i)
        for (size_t j = i + 1; j < out.points.size(); ++j) {
            double d = std::abs(out.points[i].alpha * out.points[j].beta -
                                out.points[j].alpha * out.points[i].beta);
            if (d < cluster_tol) {
                out.condition_warning = true;
                break;
            }
        }
    return out;
}

/// Linear form beta*x - alpha*y vanishing at [alpha : beta]; unit coefficients.
inline BinaryFormC root_linear_form(const P1ProjPoint& p) {
    return BinaryFormC(1, {p.beta, -p.alpha});
}

/// Product of the root linear forms; f = lambda * this product.
inline BinaryFormC product_of_root_forms(const std::vector<P1ProjPoint>& roots) {
    BinaryFormC acc(0, {Complex(1, 0)});
    for (auto& r : roots) {
        BinaryFormC lin = root_linear_form(r);
        std::vector<Complex> c(acc.degree + 2, Complex(0, 0));
        for (int j = 0; j <= acc.degree; ++j) {
            c[j] += acc.coeff[j] * lin.coeff[0];
            c[j + 1] += acc.coeff[j] * lin.coeff[1];
        }
        acc = BinaryFormC(acc.degree + 1, std::move(c));
    }
    return acc;
}

/// Scalar lambda with f ~= lambda * product_of_root_forms(roots).
inline Complex leading_factor(const BinaryFormC& f, const std::vector<P1ProjPoint>& roots) {
    BinaryFormC prod = product_of_root_forms(roots);
    int best = 0;
    for (int j = 1; j <= prod.degree; ++j)
        if (std::abs(prod.coeff[j]) > std::abs(prod.coeff[best])) best = j;
    if (std::abs(prod.coeff[best]) < 1e-300) throw std::runtime_error("leading_factor: degenerate product");
    return f.coeff[best] / prod.coeff[best];
}

}  // namespace isk
