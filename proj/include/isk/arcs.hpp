#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "isk/chow.hpp"
#include "isk/laurent.hpp"
#include "isk/multipoly.hpp"
#include "isk/rng.hpp"
#include "isk/smallmat.hpp"
#include "isk/toric.hpp"

namespace isk {

/**
 * A meromorphic one-parameter move of the group: a square matrix of Laurent
 * polynomials in t whose determinant is exactly one. Generalises the
 * monomial one-parameter subgroups diag(t^{w_0}, ..., t^{w_q-1}).
 */
class ArcMatrix {
  public:
    explicit ArcMatrix(Mat<LaurentQ> entries) : m_(std::move(entries)) {
        if (m_.rows() != m_.cols()) throw std::invalid_argument("ArcMatrix: not square");
        det_ = sym_det(m_);
        if (!(det_ == LaurentQ(Rational(1))))
            throw std::invalid_argument("ArcMatrix: determinant must be one");
    }

    static ArcMatrix identity(int q) {
        Mat<LaurentQ> m(q, q);
        for (int i = 0; i < q; ++i) m(i, i) = LaurentQ(Rational(1));
        return ArcMatrix(std::move(m));
    }

    static ArcMatrix monomial(const std::vector<std::int64_t>& weights) {
        std::int64_t sum = 0;
        for (auto w : weights) sum += w;
        if (sum != 0) throw std::invalid_argument("ArcMatrix: monomial weights must sum to zero");
        Mat<LaurentQ> m(static_cast<int>(weights.size()), static_cast<int>(weights.size()));
        for (size_t i = 0; i < weights.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = LaurentQ::t(weights[i]);
        return ArcMatrix(std::move(m));
    }

    int size() const { return m_.rows(); }
    const Mat<LaurentQ>& entries() const { return m_; }

    bool is_monomial() const {
        for (int i = 0; i < size(); ++i)
            for (int j = 0; j < size(); ++j) {
                if (i == j) {
                    if (m_(i, j).terms().size() != 1) return false;
                } else if (!m_(i, j).is_zero()) {
                    return false;
                }
            }
        return true;
    }

    std::vector<std::int64_t> monomial_weights() const {
        if (!is_monomial()) throw std::invalid_argument("ArcMatrix: not monomial");
        std::vector<std::int64_t> w(size());
        for (int i = 0; i < size(); ++i) w[i] = m_(i, i).valuation();
        return w;
    }

    /// Smallest t-adic valuation over the entries; nonpositive for arcs of
    /// determinant one.
    std::int64_t min_entry_valuation() const {
        std::int64_t mu = kValInfinity;
        for (int i = 0; i < size(); ++i)
            for (int j = 0; j < size(); ++j)
                if (!m_(i, j).is_zero()) mu = std::min(mu, m_(i, j).valuation());
        return mu;
    }

    Mat<LaurentQ> inverse() const { return adjugate(m_); }  // det = 1

    Mat<Complex> eval(Complex z) const {
        Mat<Complex> out(size(), size());
        for (int i = 0; i < size(); ++i)
            for (int j = 0; j < size(); ++j) out(i, j) = m_(i, j).eval(z);
        return out;
    }

    friend bool operator==(const ArcMatrix& x, const ArcMatrix& y) {
        return x.m_ == y.m_;
    }

  private:
    Mat<LaurentQ> m_;
    LaurentQ det_;
};

/// Fundamental action on a coefficient vector.
inline std::vector<LaurentQ> arc_on_vector(const ArcMatrix& rho, const std::vector<LaurentQ>& v) {
    return rho.entries().apply(v);
}

/// Induced action on degree-d forms in two variables: f -> f o rho^{-1},
/// for 2x2 arcs.
inline BinaryForm<LaurentQ> arc_on_form(const ArcMatrix& rho, const BinaryForm<LaurentQ>& f) {
    if (rho.size() != 2) throw std::invalid_argument("arc_on_form: need a 2x2 arc");
    Mat<LaurentQ> inv = rho.inverse();
    // x -> inv(0,0) x + inv(0,1) y, y -> inv(1,0) x + inv(1,1) y
    std::vector<LaurentQ> out(f.degree + 1, LaurentQ());
    for (int j = 0; j <= f.degree; ++j) {
        // expand (inv00 x + inv01 y)^{d-j} (inv10 x + inv11 y)^j
        std::vector<LaurentQ> acc(1, LaurentQ(Rational(1)));
        auto mul_linear = [&](const LaurentQ& cx, const LaurentQ& cy) {
            std::vector<LaurentQ> next(acc.size() + 1, LaurentQ());
            for (size_t k = 0; k < acc.size(); ++k) {
                next[k] += acc[k] * cx;
                next[k + 1] += acc[k] * cy;
            }
            acc = std::move(next);
        };
        for (int k = 0; k < f.degree - j; ++k) mul_linear(inv(0, 0), inv(0, 1));
        for (int k = 0; k < j; ++k) mul_linear(inv(1, 0), inv(1, 1));
        for (size_t k = 0; k < acc.size(); ++k) out[k] += f.coeff[j] * acc[k];
    }
    return BinaryForm<LaurentQ>(f.degree, std::move(out));
}

/// Contragredient substitution of an arc into the dual-coordinate expansion
/// of a resultant vector: u_i -> sum_j (rho^{-1})_{ij} u_j on the moved
/// blocks. Returns the coefficient polynomial over Laurent scalars.
inline MultiPoly<LaurentQ> act_arc(const ChowVector& R, const ArcMatrix& rho) {
    const ChowSpec& sp = R.spec();
    if (rho.size() != sp.d0 + 1) throw std::invalid_argument("act_arc: arc size mismatch");
    const MultiPolyQ& expansion = R.expansion();  // enforces the degree guard
    Mat<LaurentQ> inv = rho.inverse();
    auto embed = [](const Rational& r) { return LaurentQ(r); };
    MultiPoly<LaurentQ> acted =
        substitute_block_linear<LaurentQ>(expansion, 0, sp.d0 + 1, inv, embed);
    if (R.diagonal_action()) {
        MultiPoly<LaurentQ> moved(acted.vars());
        // substitute on the second block; coefficients are already Laurent
        moved = substitute_block_linear<LaurentQ>(acted, sp.d0 + 1, sp.d1 + 1, inv,
                                                  [](const LaurentQ& c) { return c; });
        return moved;
    }
    return acted;
}

/// Coefficients of the acted vector in the monomial basis, in the
/// deterministic term order.
inline std::vector<LaurentQ> arc_coefficients(const ChowVector& R, const ArcMatrix& rho) {
    MultiPoly<LaurentQ> acted = act_arc(R, rho);
    std::vector<LaurentQ> out;
    for (auto& [e, c] : acted.terms()) out.push_back(c);
    return out;
}

template <class Container>
std::int64_t min_valuation(const Container& coeffs) {
    std::int64_t v = kValInfinity;
    for (auto& c : coeffs)
        if (!c.is_zero()) v = std::min(v, c.valuation());
    return v;
}

inline std::int64_t min_valuation(const MultiPoly<LaurentQ>& p) {
    std::int64_t v = kValInfinity;
    for (auto& [e, c] : p.terms())
        if (!c.is_zero()) v = std::min(v, c.valuation());
    return v;
}

/// Order of vanishing of the arc-moved vector: the smallest t-adic valuation
/// over its components in the monomial basis.
inline std::int64_t ord(const ChowVector& R, const ArcMatrix& rho) {
    return min_valuation(act_arc(R, rho));
}

/// Degree of the moved part of the group action on a resultant vector: the
/// first slot always moves with degree delta0; a diagonal action moves the
/// second slot as well.
inline std::int64_t action_degree(const ChowVector& R) {
    std::int64_t d = R.spec().delta0();
    if (R.diagonal_action()) d += R.spec().delta1();
    return d;
}

/**
 * The application pair: v carries the mixed pairing <O(ma), O(b)> moved on
 * the first slot, w the pairing of O(ma) with itself moved diagonally.
 *
 * The two sides carry actions of different polynomial degrees (b against
 * 2ma), so the weight is computed on the smallest degree-balancing tensor
 * powers v^p, w^q with p deg(v) = q deg(w); without the balancing the
 * log-norm ratio along an arc is dominated by the higher-degree side and the
 * semistability the theory guarantees fails already for monomial arcs at
 * exponent two.
 */
struct PairVectors {
    ChowVector v, w;
    std::int64_t balance_p = 1;     // tensor power of the v side
    std::int64_t balance_q = 1;     // tensor power of the w side
    Integer norm_degree = Integer(0);  // polynomial degree of the balanced v-side representation

    static PairVectors application(int m, int a, int b) {
        PairVectors out{application_v_vector(m, a, b), application_w_vector(m, a)};
        out.rebalance();
        return out;
    }

    void rebalance() {
        std::int64_t dv = action_degree(v), dw = action_degree(w);
        std::int64_t g = std::__gcd(dv, dw);
        balance_p = dw / g;
        balance_q = dv / g;
        // contragredient factors contribute (size - 1) each
        norm_degree = Integer(balance_p) * v.spec().delta0() * (v.spec().d0);
    }

    PairVectors swapped() const {
        PairVectors out{w, v};
        out.rebalance();
        return out;
    }
};

/// Balanced weight of the arc on the pair: the slope of
/// q log||rho(z) w|| - p log||rho(z) v|| with the balancing powers above.
/// Antisymmetric under swapping the pair.
inline std::int64_t nu(const PairVectors& pair, const ArcMatrix& rho) {
    return pair.balance_q * ord(pair.w, rho) - pair.balance_p * ord(pair.v, rho);
}

/// Degree-normalised weight of a pair of vectors: ord(w)/deg(w) -
/// ord(v)/deg(v). Rational-valued, antisymmetric and additive over triples.
inline Rational nu_normalized(const ChowVector& v, const ChowVector& w, const ArcMatrix& rho) {
    return Rational(ord(w, rho), action_degree(w)) - Rational(ord(v, rho), action_degree(v));
}

/**
 * Norm of the arc relative to the balanced v side: p ord(rho, v) - d mu(rho)
 * with mu the smallest entry valuation of the arc and d the polynomial
 * degree of the balanced representation. Nonnegative by construction; a
 * negative value indicates an inconsistent convention and is a hard failure.
 */
inline std::int64_t arc_norm(const PairVectors& pair, const ArcMatrix& rho) {
    std::int64_t o = pair.balance_p * ord(pair.v, rho);
    std::int64_t mu = rho.min_entry_valuation();
    std::int64_t norm = o - pair.norm_degree.convert_to<long long>() * mu;
    if (norm < 0)
        throw std::logic_error("arc_norm: negative norm, valuation convention violated");
    return norm;
}

struct StabilityVerdict {
    std::int64_t nu = 0;
    std::int64_t norm = 0;
    Rational epsilon;
    Rational margin;  // nu - epsilon/(1+epsilon) * norm
    std::string arc_id;
};

/// Margin of the numerical stability inequality at epsilon = 1/k (or the
/// semistability margin nu at epsilon = 0).
inline StabilityVerdict check_pair(const PairVectors& pair, const ArcMatrix& rho,
                                   const Rational& epsilon, std::string arc_id = "") {
    if (epsilon < 0) throw std::invalid_argument("check_pair: epsilon must be nonnegative");
    StabilityVerdict out;
    out.nu = nu(pair, rho);
    out.norm = arc_norm(pair, rho);
    out.epsilon = epsilon;
    out.margin = Rational(out.nu) - epsilon / (1 + epsilon) * Rational(out.norm);
    out.arc_id = std::move(arc_id);
    return out;
}

struct ArcFamily {
    std::vector<ArcMatrix> arcs;
    std::vector<std::string> ids;
};

/**
 * Deterministic arc family: all monomial arcs with weights bounded by
 * valuation_bound (and zero sum), then random products L(t) D U(t) of
 * unipotent Laurent matrices around a random monomial core. Every arc has
 * determinant exactly one.
 */
/// All monomial arcs with weight entries bounded by valuation_bound,
/// lexicographic in the weight vector.
inline ArcFamily monomial_arcs(int q, int valuation_bound) {
    ArcFamily fam;
    std::vector<std::int64_t> w(q, -valuation_bound);
    while (true) {
        std::int64_t sum = 0;
        for (auto x : w) sum += x;
        if (sum == 0) {
            fam.arcs.push_back(ArcMatrix::monomial(w));
            std::string id = "mono";
            for (auto x : w) id += (x >= 0 ? "+" : "") + std::to_string(x);
            fam.ids.push_back(id);
        }
        int pos = q - 1;
        while (pos >= 0 && w[pos] == valuation_bound) {
            w[pos] = -valuation_bound;
            --pos;
        }
        if (pos < 0) break;
        ++w[pos];
    }
    return fam;
}

inline ArcFamily sample_arcs(int q, int valuation_bound, int t_degree_bound, int count,
                             std::uint64_t seed) {
    if (q < 2 || valuation_bound < 1 || t_degree_bound < 1)
        throw std::invalid_argument("sample_arcs: bounds must be positive");
    ArcFamily fam;
    ArcFamily monos = monomial_arcs(q, valuation_bound);
    for (size_t i = 0; i < monos.arcs.size() && static_cast<int>(fam.arcs.size()) < count; ++i) {
        fam.arcs.push_back(monos.arcs[i]);
        fam.ids.push_back(monos.ids[i]);
    }
    int random_index = 0;
    while (static_cast<int>(fam.arcs.size()) < count) {
        RngStream rng(seed, static_cast<std::uint64_t>(random_index) + 1);
        auto random_laurent = [&]() {
            LaurentQ p;
            int terms = static_cast<int>(rng.uniform_int(0, 2));
            for (int k = 0; k < terms; ++k)
                p.set(rng.uniform_int(-t_degree_bound, t_degree_bound),
                      Rational(rng.uniform_int(-2, 2)));
            return p;
        };
        Mat<LaurentQ> lower(q, q), upper(q, q);
        for (int i = 0; i < q; ++i) {
            lower(i, i) = LaurentQ(Rational(1));
            upper(i, i) = LaurentQ(Rational(1));
            for (int j = 0; j < i; ++j) lower(i, j) = random_laurent();
            for (int j = i + 1; j < q; ++j) upper(i, j) = random_laurent();
        }
        std::vector<std::int64_t> dw(q, 0);
        std::int64_t acc = 0;
        for (int i = 0; i + 1 < q; ++i) {
            dw[i] = rng.uniform_int(-valuation_bound, valuation_bound);
            acc += dw[i];
        }
        dw[q - 1] = -acc;
        bool in_bound = std::abs(dw[q - 1]) <= valuation_bound;
        if (in_bound) {
            Mat<LaurentQ> diag(q, q);
            for (int i = 0; i < q; ++i) diag(i, i) = LaurentQ::t(dw[i]);
            fam.arcs.push_back(ArcMatrix(lower * diag * upper));
            fam.ids.push_back("rand" + std::to_string(random_index));
        }
        ++random_index;
        if (random_index > 100 * count + 100) break;  // bounded retry
    }
    return fam;
}

struct ArcToricModel {
    PLConcave f;            // nonnegative concave envelope data, min zero
    Rational energy_shift;  // E^na of the arc model = na_energy(f) + shift
};

/**
 * Toric model of a monomial arc acting on the sections of O(d), d = m a:
 * the lattice point j/m carries the value -2 w_j / m, and the model is the
 * concave upper envelope of these values over [0, a]. The envelope is
 * returned shifted to be nonnegative with the shift recorded: the energy of
 * the arc model is na_energy of the shifted envelope plus the shift, while
 * both J functionals are shift-invariant.
 */
inline ArcToricModel weights_to_toric(const std::vector<std::int64_t>& w, int m, int a) {
    const int d = static_cast<int>(w.size()) - 1;
    if (d != m * a) throw std::invalid_argument("weights_to_toric: need m a + 1 weights");

    std::vector<std::pair<Rational, Rational>> pts;
    for (int j = 0; j <= d; ++j)
        pts.push_back({Rational(j, m), Rational(-2 * w[j], m)});

    // upper concave hull, left to right (x strictly increasing already)
    std::vector<std::pair<Rational, Rational>> hull;
    for (auto& p : pts) {
        while (hull.size() >= 2) {
            auto& a2 = hull[hull.size() - 2];
            auto& a1 = hull[hull.size() - 1];
            // keep slopes strictly decreasing
            Rational lhs = (a1.second - a2.second) * (p.first - a1.first);
            Rational rhs = (p.second - a1.second) * (a1.first - a2.first);
            if (lhs <= rhs)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }

    std::vector<AffinePiece> pieces;
    for (size_t k = 0; k + 1 < hull.size(); ++k) {
        Rational slope = (hull[k + 1].second - hull[k].second) / (hull[k + 1].first - hull[k].first);
        pieces.push_back(AffinePiece{{slope}, hull[k].second - slope * hull[k].first});
    }
    if (pieces.empty())
        pieces.push_back(AffinePiece{{Rational(0)}, hull[0].second});  // single lattice point

    RationalPolytope base = RationalPolytope::from_points(1, {{Rational(0)}, {Rational(a)}});
    Rational shift = std::min(hull.front().second, hull.back().second);
    for (auto& piece : pieces) piece.constant -= shift;
    return {PLConcave(base, std::move(pieces)), shift};
}

inline ArcToricModel arc_to_toric(const ArcMatrix& rho, int m, int a) {
    return weights_to_toric(rho.monomial_weights(), m, a);
}

}  // namespace isk
