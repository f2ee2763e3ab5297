#include <catch2/catch_amalgamated.hpp>

#include "isk/arcs.hpp"
#include "isk/slope.hpp"

using namespace isk;

namespace {

ArcMatrix diag_arc(std::vector<std::int64_t> w) { return ArcMatrix::monomial(std::move(w)); }

BinaryForm<LaurentQ> lform(std::vector<int> c) {
    std::vector<LaurentQ> r;
    for (int x : c) r.push_back(LaurentQ(Rational(x)));
    int d = static_cast<int>(c.size()) - 1;
    return BinaryForm<LaurentQ>(d, std::move(r));
}

}  // namespace

TEST_CASE("arc matrices must have determinant one") {
    Mat<LaurentQ> bad(2, 2);
    bad(0, 0) = LaurentQ::t(1);
    bad(1, 1) = LaurentQ::t(1);
    CHECK_THROWS_AS(ArcMatrix(bad), std::invalid_argument);
    CHECK_THROWS_AS(ArcMatrix::monomial({1, 1}), std::invalid_argument);
}

TEST_CASE("order of vanishing under the induced form action") {
    ArcMatrix rho = diag_arc({1, -1});

    // identity leaves valuations at zero
    BinaryForm<LaurentQ> x = lform({1, 0});
    CHECK(min_valuation(arc_on_form(ArcMatrix::identity(2), x).coeff) == 0);

    // x -> t^{-1} x under f -> f o rho^{-1}
    CHECK(min_valuation(arc_on_form(rho, x).coeff) == -1);

    // y^d -> t^d y^d under the induced degree-d action
    for (int d = 1; d <= 3; ++d) {
        std::vector<LaurentQ> c(d + 1, LaurentQ());
        c[d] = LaurentQ(Rational(1));
        BinaryForm<LaurentQ> yd(d, std::move(c));
        CHECK(min_valuation(arc_on_form(rho, yd).coeff) == d);
    }
}

TEST_CASE("application pair ords and weights in the unit format") {
    PairVectors pair = PairVectors::application(1, 1, 1);
    ArcMatrix rho = diag_arc({1, -1});

    CHECK(ord(pair.v, ArcMatrix::identity(2)) == 0);
    CHECK(ord(pair.v, rho) == -1);
    CHECK(ord(pair.w, rho) == 0);  // diagonal action leaves the determinant form fixed
    // balancing powers: v moves with degree 1, w with degree 2
    CHECK(pair.balance_p == 2);
    CHECK(pair.balance_q == 1);
    CHECK(nu(pair, rho) == 2);
    CHECK(nu(pair, ArcMatrix::identity(2)) == 0);
}

TEST_CASE("arc action on the unit resultant: valuations shift by one") {
    ChowVector R(ChowSpec{1, 1}, false);
    auto coeffs = arc_coefficients(R, diag_arc({1, -1}));
    std::vector<std::int64_t> vals;
    for (auto& c : coeffs) vals.push_back(c.valuation());
    std::sort(vals.begin(), vals.end());
    REQUIRE(vals.size() == 2);
    CHECK(vals[0] == -1);
    CHECK(vals[1] == 1);

    auto id_coeffs = arc_coefficients(R, ArcMatrix::identity(2));
    for (auto& c : id_coeffs) CHECK(c.valuation() == 0);
}

TEST_CASE("arc action commutes with constant group moves") {
    // rational unimodular constant matrix as an arc, composed with a monomial
    ChowVector R(ChowSpec{1, 1}, false);
    Mat<LaurentQ> shear(2, 2);
    shear(0, 0) = LaurentQ(Rational(1));
    shear(0, 1) = LaurentQ(Rational(2));
    shear(1, 1) = LaurentQ(Rational(1));
    ArcMatrix s(shear);
    ArcMatrix d = diag_arc({1, -1});
    ArcMatrix sd(s.entries() * d.entries());

    MultiPoly<LaurentQ> via_product = act_arc(R, sd);
    // acting by d first, then by the constant move on the result
    MultiPoly<LaurentQ> via_steps = [&]() {
        MultiPoly<LaurentQ> acted = act_arc(R, d);
        Mat<LaurentQ> inv = s.inverse();
        return substitute_block_linear<LaurentQ>(acted, 0, 2, inv,
                                                 [](const LaurentQ& c) { return c; });
    }();
    CHECK(via_product == via_steps);
}

TEST_CASE("arc norms match the hand values and stay nonnegative") {
    // the 2x2 arc diag(t, t^{-1}) acting on degree-d forms: ||(rho, y^d)|| = 2d
    // and ||(rho, x^d)|| = 0, through ord - d mu with mu = -1.
    ArcMatrix rho = diag_arc({1, -1});
    for (int d = 1; d <= 3; ++d) {
        std::vector<LaurentQ> c(d + 1, LaurentQ());
        c[d] = LaurentQ(Rational(1));
        BinaryForm<LaurentQ> yd(d, std::move(c));
        std::int64_t o = min_valuation(arc_on_form(rho, yd).coeff);
        CHECK(o - d * rho.min_entry_valuation() == 2 * d);

        std::vector<LaurentQ> cx(d + 1, LaurentQ());
        cx[0] = LaurentQ(Rational(1));
        BinaryForm<LaurentQ> xd(d, std::move(cx));
        std::int64_t ox = min_valuation(arc_on_form(rho, xd).coeff);
        CHECK(ox - d * rho.min_entry_valuation() == 0);
    }

    // arcs reducing to the identity have norm zero
    PairVectors pair = PairVectors::application(1, 1, 1);
    CHECK(arc_norm(pair, ArcMatrix::identity(2)) == 0);
}

TEST_CASE("weight is antisymmetric and projective") {
    PairVectors pair = PairVectors::application(1, 1, 1);
    PairVectors swapped = pair.swapped();
    auto fam = sample_arcs(2, 2, 2, 12, 424242);
    for (auto& rho : fam.arcs) {
        CHECK(nu(pair, rho) == -nu(swapped, rho));
        // pairing a vector with itself gives weight zero
        PairVectors same{pair.v, pair.v};
        same.rebalance();
        CHECK(nu(same, rho) == 0);
    }
}

TEST_CASE("normalised weight is a cocycle over vector triples") {
    ChowVector a(ChowSpec{1, 1}, false);
    ChowVector b(ChowSpec{1, 2}, false);
    ChowVector c(ChowSpec{1, 1}, true);
    auto fam = sample_arcs(2, 2, 2, 10, 777);
    for (auto& rho : fam.arcs) {
        CHECK(nu_normalized(a, b, rho) + nu_normalized(b, c, rho) == nu_normalized(a, c, rho));
        CHECK(nu_normalized(a, b, rho) == -nu_normalized(b, a, rho));
    }
}

TEST_CASE("margins of the unit-format pair over the exhaustive diagonal family") {
    PairVectors pair = PairVectors::application(1, 1, 1);
    auto fam = sample_arcs(2, 2, 2, 5, 1);  // the five monomial arcs, |w| <= 2
    REQUIRE(fam.arcs.size() == 5);
    for (size_t i = 0; i < fam.arcs.size(); ++i) {
        auto verdict = check_pair(pair, fam.arcs[i], Rational(0), fam.ids[i]);
        CHECK(verdict.margin >= 0);
        CHECK(verdict.margin == Rational(verdict.nu));
    }
}

TEST_CASE("semistable-only pairs flag at positive epsilon") {
    // v = w: every arc has nu = 0 but positive norm, so any epsilon > 0 fails
    PairVectors pair = PairVectors::application(1, 1, 1);
    PairVectors same{pair.w, pair.w};
    same.rebalance();
    ArcMatrix rho = diag_arc({1, -1});
    auto verdict = check_pair(same, rho, Rational(1, 2));
    CHECK(verdict.nu == 0);
    CHECK(verdict.norm > 0);
    CHECK(verdict.margin < 0);
}

TEST_CASE("sampled arc families are deterministic and within bounds") {
    auto f1 = sample_arcs(2, 1, 2, 3, 9);
    REQUIRE(f1.arcs.size() == 3);  // exactly the monomials at bound one
    for (auto& rho : f1.arcs) CHECK(rho.is_monomial());

    auto f2 = sample_arcs(3, 2, 2, 40, 9);
    auto f3 = sample_arcs(3, 2, 2, 40, 9);
    REQUIRE(f2.arcs.size() == 40);
    for (size_t i = 0; i < f2.arcs.size(); ++i) CHECK(f2.arcs[i] == f3.arcs[i]);

    auto f4 = sample_arcs(2, 1, 1, 0, 9);
    CHECK(f4.arcs.empty());
}

TEST_CASE("toric models of monomial arcs") {
    // equal weights: product configuration with a recorded twist
    auto equal = weights_to_toric({0, 0}, 1, 1);
    CHECK(equal.f.eval({Rational(0)}) == 0);
    CHECK(equal.f.eval({Rational(1)}) == 0);
    CHECK(equal.energy_shift == 0);

    auto twisted = weights_to_toric({2, 2, 2}, 2, 1);
    CHECK(na_energy(twisted.f.base(), twisted.f) + twisted.energy_shift == Rational(-2));

    // weights (1,-1) on the sections of O(1): envelope 4x - 2, shift -2
    auto m1 = weights_to_toric({1, -1}, 1, 1);
    CHECK(m1.energy_shift == Rational(-2));
    CHECK(m1.f.eval({Rational(0)}) == Rational(0));
    CHECK(m1.f.eval({Rational(1)}) == Rational(4));
    CHECK(na_energy(m1.f.base(), m1.f) + m1.energy_shift == Rational(0));

    // weights (1,0,1) on the sections of O(2): tent of height one at 1/2
    auto tent = weights_to_toric({1, 0, 1}, 2, 1);
    CHECK(tent.f.eval({Rational(1, 2)}) == Rational(1));
    CHECK(tent.f.eval({Rational(0)}) == Rational(0));
    CHECK(tent.f.eval({Rational(1)}) == Rational(0));

    CHECK_THROWS_AS(weights_to_toric({1, -1, 0}, 1, 1), std::invalid_argument);
}

TEST_CASE("float slope of the pair log-norms rounds to the symbolic weight") {
    PairVectors pair = PairVectors::application(1, 1, 1);
    auto fam = sample_arcs(2, 2, 2, 8, 55);
    for (size_t i = 0; i < fam.arcs.size(); ++i) {
        SlopeFit fit = pair_log_norm_slope(pair, fam.arcs[i], 4, 12);
        std::int64_t expect = nu(pair, fam.arcs[i]);
        CHECK(std::llround(fit.slope) == expect);
        CHECK(std::abs(fit.slope - expect) < 0.05);
    }
}

TEST_CASE("functional slopes along monomial arcs match the toric values", "[slopebridge]") {
    struct Case {
        std::vector<std::int64_t> w;
        int m;
    };
    std::vector<Case> cases = {{{1, -1}, 1}, {{2, 0, -2}, 2}, {{1, 1, -2}, 2}};
    for (auto& c : cases) {
        ArcMatrix rho = ArcMatrix::monomial(c.w);
        ArcToricModel model = arc_to_toric(rho, c.m, 1);
        ToricPair pair(model.f.base(), model.f.base());
        EquationSpec eq(1, {Rational(1)});
        auto na = na_J_functionals(pair, model.f, eq);
        double e_expect = to_double(na.e_na + model.energy_shift);
        double j_expect = to_double(na.j_na);

        SlopeFit e_fit = slope_fit(FunctionalKind::Energy, rho, c.m, 1, 1, Rational(1), 4, 10,
                                   0, 128);
        SlopeFit j_fit = slope_fit(FunctionalKind::J, rho, c.m, 1, 1, Rational(1), 4, 10, 0, 128);
        INFO("weights " << c.w[0] << "," << c.w[1] << " E " << e_fit.slope << " vs " << e_expect
                        << " J " << j_fit.slope << " vs " << j_expect);
        CHECK(std::abs(e_fit.slope - e_expect) <= 0.01 * std::max(std::abs(e_expect), 0.2));
        CHECK(std::abs(j_fit.slope - j_expect) <= 0.01 * std::max(std::abs(j_expect), 0.2));
        CHECK(e_fit.residual < 1e-3);
        CHECK(j_fit.residual < 1e-3);
    }
}

TEST_CASE("weights ignore overall scalings of the vectors") {
    ChowVector R(ChowSpec{1, 1}, false);
    ArcMatrix rho = diag_arc({2, -2});
    MultiPoly<LaurentQ> acted = act_arc(R, rho);
    MultiPoly<LaurentQ> scaled = acted.scaled(LaurentQ(Rational(7, 3)));
    CHECK(min_valuation(acted) == min_valuation(scaled));
}

TEST_CASE("fundamental action of an arc on a coefficient vector") {
    ArcMatrix rho = diag_arc({2, -2});
    std::vector<LaurentQ> v = {LaurentQ(Rational(3)), LaurentQ::t(1)};
    auto moved = arc_on_vector(rho, v);
    CHECK(moved[0] == LaurentQ::monomial(3, 2));
    CHECK(moved[1] == LaurentQ::t(-1));
    CHECK(min_valuation(moved) == -1);
}
