#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isk/binary_form.hpp"
#include "isk/laurent.hpp"
#include "isk/multipoly.hpp"
#include "isk/rational.hpp"
#include "isk/smallmat.hpp"

namespace isk {

/// Sylvester matrix of a degree-d0 and a degree-d1 binary form.
template <class S>
Mat<S> sylvester_matrix(const BinaryForm<S>& f, const BinaryForm<S>& g) {
    const int n = f.degree + g.degree;
    Mat<S> syl(n, n, ring_zero(f.coeff[0]));
    for (int r = 0; r < g.degree; ++r)
        for (int k = 0; k <= f.degree; ++k) syl(r, r + k) = f.coeff[k];
    for (int r = 0; r < f.degree; ++r)
        for (int k = 0; k <= g.degree; ++k) syl(g.degree + r, r + k) = g.coeff[k];
    return syl;
}

template <class S>
S sylvester_resultant(const BinaryForm<S>& f, const BinaryForm<S>& g) {
    if (f.degree + g.degree == 0) return ring_one(f.coeff[0]);
    return sym_det(sylvester_matrix(f, g));
}

/**
 * Pairing data of <O(d0), O(d1)> on the projective line. The resultant locus
 * in the product of the two dual coefficient spaces has multidegree
 * (delta0, delta1) = (d1, d0).
 */
struct ChowSpec {
    int d0, d1;

    int delta0() const { return d1; }
    int delta1() const { return d0; }
    int r0() const { return d0; }  // projective dimension of the first dual space
    int r1() const { return d1; }

    /// Top self-intersection of delta0 O(1) + delta1 O(1) on the product of
    /// the two dual projective spaces.
    Integer polarization_degree() const {
        Integer d = int_binomial(r0() + r1(), r0());
        for (int i = 0; i < r0(); ++i) d *= delta0();
        for (int i = 0; i < r1(); ++i) d *= delta1();
        return d;
    }
};

inline constexpr int kExpansionDegreeBound = 8;  // d0 + d1

/**
 * A resultant-type vector: the Sylvester resultant of the pairing composed
 * with linear moves of its two arguments. Group elements act through the
 * contragredient representation, i.e. by feeding the inverse to the argument
 * slots; for the pairing of a polarisation with itself the action is
 * diagonal in both slots.
 */
class ChowVector {
  public:
    ChowVector(ChowSpec spec, bool diagonal_action)
        : spec_(spec),
          diagonal_(diagonal_action),
          arg0_(Mat<Complex>::identity(spec.d0 + 1)),
          arg1_(Mat<Complex>::identity(spec.d1 + 1)) {
        if (diagonal_ && spec.d0 != spec.d1)
            throw std::invalid_argument("ChowVector: diagonal action needs equal degrees");
    }

    const ChowSpec& spec() const { return spec_; }
    bool diagonal_action() const { return diagonal_; }

    Complex eval(const BinaryFormC& f, const BinaryFormC& g) const {
        if (f.degree != spec_.d0 || g.degree != spec_.d1)
            throw std::invalid_argument("ChowVector: argument degrees mismatch");
        BinaryFormC fm(spec_.d0, arg0_.apply(f.coeff));
        BinaryFormC gm(spec_.d1, arg1_.apply(g.coeff));
        return scale_ * sylvester_resultant(fm, gm);
    }

    ChowVector rescaled(Complex factor) const {
        ChowVector out = *this;
        out.scale_ *= factor;
        return out;
    }

    /// Group move: sigma in SL(d0+1) acting on the first polarisation slot
    /// (and on the second as well when the action is diagonal).
    ChowVector acted(const Mat<Complex>& sigma, double det_tol = 1e-9) const {
        if (sigma.rows() != spec_.d0 + 1 || sigma.cols() != spec_.d0 + 1)
            throw std::invalid_argument("ChowVector::acted: matrix size mismatch");
        Complex det = sym_det(sigma);
        if (std::abs(det - Complex(1.0, 0.0)) > det_tol)
            throw std::invalid_argument("ChowVector::acted: determinant must be one");
        Mat<Complex> inv = gauss_inverse(sigma);
        ChowVector out = *this;
        out.arg0_ = out.arg0_ * inv;
        if (diagonal_) out.arg1_ = out.arg1_ * inv;
        return out;
    }

    /// Exact expansion of the base resultant as a polynomial in the dual
    /// coordinates u_0..u_{d0}, v_0..v_{d1}.
    const MultiPolyQ& expansion() const {
        if (!expansion_) {
            if (spec_.d0 + spec_.d1 > kExpansionDegreeBound)
                throw std::length_error("ChowVector: expansion degree guard exceeded");
            std::vector<std::string> vars;
            for (int i = 0; i <= spec_.d0; ++i) vars.push_back("u" + std::to_string(i));
            for (int i = 0; i <= spec_.d1; ++i) vars.push_back("v" + std::to_string(i));
            std::vector<MultiPolyQ> fc, gc;
            for (int i = 0; i <= spec_.d0; ++i) fc.push_back(MultiPolyQ::variable(vars, i));
            for (int i = 0; i <= spec_.d1; ++i)
                gc.push_back(MultiPolyQ::variable(vars, spec_.d0 + 1 + i));
            BinaryForm<MultiPolyQ> fv(spec_.d0, std::move(fc)), gv(spec_.d1, std::move(gc));
            expansion_ = sylvester_resultant(fv, gv);
        }
        return *expansion_;
    }

  private:
    ChowSpec spec_;
    bool diagonal_;
    Complex scale_ = Complex(1.0, 0.0);
    Mat<Complex> arg0_, arg1_;
    mutable std::optional<MultiPolyQ> expansion_;
};

/// R_{chi,c}-side vector of the application pair: <O(ma), O(b)>, moved on the
/// first slot only.
inline ChowVector application_v_vector(int m, int a, int b) {
    return ChowVector(ChowSpec{m * a, b}, false);
}
/// Chow vector of the polarisation itself: <O(ma), O(ma)>, moved diagonally.
inline ChowVector application_w_vector(int m, int a) {
    return ChowVector(ChowSpec{m * a, m * a}, true);
}

}  // namespace isk
