#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "isk/quadrature.hpp"
#include "isk/smallmat.hpp"

namespace isk {

/**
 * Fubini-Study metric on O(d): |s|_h(z) = |f(z)| / (1+|z|^2)^{d/2} in the
 * affine chart, with curvature d times the normalised FS area form.
 */
struct FSMetric {
    int degree;

    double log_norm(const BinaryFormC& s, const P1Point& p) const {
        if (s.degree != degree) throw std::invalid_argument("FSMetric: degree mismatch");
        Complex f = p.upper ? s.reversed().eval_affine(p.z) : s.eval_affine(p.z);
        return std::log(std::abs(f)) - 0.5 * degree * std::log1p(std::norm(p.z));
    }
};

/**
 * Finite family of polynomials p_j(z) = sum_k rows(j,k) z^{d-k}, the image of
 * the monomial sections under a matrix. Provides the Bergman quantities
 * log F = log sum |p_j|^2 and the density of dd^c log F relative to the
 * normalised FS measure, in both charts.
 */
class BergmanFamily {
  public:
    BergmanFamily(Mat<Complex> rows, int degree) : rows_(std::move(rows)), d_(degree) {
        if (rows_.cols() != d_ + 1) throw std::invalid_argument("BergmanFamily: row length");
        rev_ = Mat<Complex>(rows_.rows(), rows_.cols());
        for (int j = 0; j < rows_.rows(); ++j)
            for (int k = 0; k <= d_; ++k) rev_(j, k) = rows_(j, d_ - k);
    }

    int degree() const { return d_; }

    /// log sum_j |p_j(z)|^2 in the active chart (charts differ by d log|z|^2,
    /// which cancels in every difference the checks take).
    double log_f(const P1Point& p) const { return quantities(p).log_f; }

    /// density of dd^c log F relative to the FS probability measure
    double curvature_density(const P1Point& p) const { return quantities(p).density; }

    struct Quantities {
        double log_f;
        double density;
    };

    Quantities quantities(const P1Point& p) const {
        const Mat<Complex>& m = p.upper ? rev_ : rows_;
        const Complex z = p.z;
        double F = 0.0, Fzz = 0.0;
        Complex Fz(0.0, 0.0);
        for (int j = 0; j < m.rows(); ++j) {
            // Horner for p_j and p_j'
            Complex v(0.0, 0.0), dv(0.0, 0.0);
            for (int k = 0; k <= d_; ++k) {
                dv = dv * z + v;
                v = v * z + m(j, k);
            }
            F += std::norm(v);
            Fz += dv * std::conj(v);
            Fzz += std::norm(dv);
        }
        if (F <= 0.0) throw std::runtime_error("BergmanFamily: vanishing kernel");
        double opz = 1.0 + std::norm(z);
        double density = opz * opz * (F * Fzz - std::norm(Fz)) / (F * F);
        return {std::log(F), density};
    }

  private:
    Mat<Complex> rows_;
    Mat<Complex> rev_;
    int d_;
};

inline BergmanFamily monomial_family(int degree) {
    Mat<Complex> id(degree + 1, degree + 1);
    for (int j = 0; j <= degree; ++j) id(j, j) = Complex(1.0, 0.0);
    return BergmanFamily(std::move(id), degree);
}

/// Smooth potential together with the density of its dd^c.
struct Potential {
    P1Function value;
    P1Function ddc_density;

    Potential shifted(double kappa) const {
        P1Function v = value;
        return Potential{[v, kappa](const P1Point& p) { return v(p) + kappa; }, ddc_density};
    }
};

/**
 * Fubini-Study type potential of a group element acting on the sections of
 * O(d): phi_g = m^{-1} [ log ||g s(z)||^2 - log ||s(z)||^2 ] with s the
 * monomial basis and m the exponent (d = m a for O(a) polarisations).
 * Normalised by det g = 1, leaving no free additive constant.
 */
class PotentialP1 {
  public:
    PotentialP1(int exponent, Mat<Complex> g, double det_tol = 1e-6)
        : m_(exponent),
          moved_(BergmanFamily(g, g.cols() - 1)),
          reference_(monomial_family(g.cols() - 1)) {
        if (exponent < 1) throw std::invalid_argument("PotentialP1: exponent must be positive");
        if (g.rows() != g.cols()) throw std::invalid_argument("PotentialP1: matrix not square");
        Complex det = sym_det(g);
        if (std::abs(det - Complex(1.0, 0.0)) > det_tol)
            throw std::invalid_argument("PotentialP1: matrix must have determinant one");
    }

    int exponent() const { return m_; }
    int degree() const { return moved_.degree(); }

    double value(const P1Point& p) const {
        return (moved_.log_f(p) - reference_.log_f(p)) / m_;
    }
    double ddc_density(const P1Point& p) const {
        return (moved_.curvature_density(p) - reference_.curvature_density(p)) / m_;
    }

    Potential to_potential() const {
        auto self = *this;
        return Potential{[self](const P1Point& p) { return self.value(p); },
                         [self](const P1Point& p) { return self.ddc_density(p); }};
    }

  private:
    int m_;
    BergmanFamily moved_;
    BergmanFamily reference_;
};

inline Potential zero_potential() {
    return Potential{[](const P1Point&) { return 0.0; }, [](const P1Point&) { return 0.0; }};
}

}  // namespace isk
