#include <catch2/catch_amalgamated.hpp>

#include "isk/binary_form.hpp"
#include "isk/laurent.hpp"
#include "isk/multipoly.hpp"
#include "isk/rational.hpp"
#include "isk/rng.hpp"
#include "isk/smallmat.hpp"

using namespace isk;

TEST_CASE("rational parsing and canonical form") {
    Rational r = rat_parse("6/8");
    CHECK(rat_num(r) == 3);
    CHECK(rat_den(r) == 4);
    CHECK(rat_parse("-2/4") == Rational(-1, 2));
    CHECK(rat_str(Rational(5)) == "5");
    CHECK_THROWS_AS(rat_parse(""), std::invalid_argument);
}

TEST_CASE("laurent valuation basics") {
    LaurentQ p;  // 0
    CHECK(laurent_valuation(p) == kValInfinity);

    LaurentQ q = LaurentQ::monomial(1, 2) + LaurentQ::monomial(3, 5);  // t^2 + 3 t^5
    CHECK(laurent_valuation(q) == 2);

    LaurentQ r = LaurentQ::monomial(1, -1) + LaurentQ(Rational(1));  // t^-1 + 1
    CHECK(laurent_valuation(r) == -1);
}

TEST_CASE("laurent valuation is additive on products") {
    RngStream rng(2024, 0);
    for (int trial = 0; trial < 50; ++trial) {
        LaurentQ p, q;
        while (p.is_zero())
            for (int k = 0; k < 3; ++k)
                p.set(rng.uniform_int(-4, 4), Rational(rng.uniform_int(-3, 3)));
        while (q.is_zero())
            for (int k = 0; k < 3; ++k)
                q.set(rng.uniform_int(-4, 4), Rational(rng.uniform_int(-3, 3)));
        CHECK(laurent_valuation(p * q) == laurent_valuation(p) + laurent_valuation(q));
    }
}

TEST_CASE("laurent arithmetic keeps no zero coefficients") {
    LaurentQ a = LaurentQ::monomial(2, 1);
    LaurentQ b = LaurentQ::monomial(-2, 1);
    CHECK((a + b).is_zero());
    CHECK((a + b).terms().empty());
}

TEST_CASE("sym_det on identity and diagonal laurent matrices") {
    Mat<LaurentQ> id(3, 3);
    for (int i = 0; i < 3; ++i) id(i, i) = LaurentQ(Rational(1));
    CHECK(sym_det(id) == LaurentQ(Rational(1)));

    Mat<LaurentQ> d(2, 2);
    d(0, 0) = LaurentQ::t(1);
    d(1, 1) = LaurentQ::t(-1);
    CHECK(sym_det(d) == LaurentQ(Rational(1)));
}

TEST_CASE("sym_det symbolic 2x2 equals ad - bc") {
    std::vector<std::string> vars = {"a", "b", "c", "d"};
    auto v = [&](int i) { return MultiPolyQ::variable(vars, i); };
    Mat<MultiPolyQ> m(2, 2, MultiPolyQ(vars));
    m(0, 0) = v(0);
    m(0, 1) = v(1);
    m(1, 0) = v(2);
    m(1, 1) = v(3);
    MultiPolyQ expect = v(0) * v(3) - v(1) * v(2);
    CHECK(sym_det(m) == expect);
}

TEST_CASE("sym_det is multiplicative on random 3x3 laurent matrices") {
    RngStream rng(99, 0);
    for (int trial = 0; trial < 10; ++trial) {
        Mat<LaurentQ> a(3, 3), b(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                a(i, j) = LaurentQ::monomial(Rational(rng.uniform_int(-2, 2)), rng.uniform_int(-1, 1));
                b(i, j) = LaurentQ::monomial(Rational(rng.uniform_int(-2, 2)), rng.uniform_int(-1, 1));
            }
        CHECK(sym_det(a * b) == sym_det(a) * sym_det(b));
    }
}

TEST_CASE("sym_det refuses oversized input") {
    Mat<LaurentQ> big(13, 13);
    CHECK_THROWS_AS(sym_det(big), std::length_error);
}

TEST_CASE("adjugate gives the inverse up to det") {
    Mat<LaurentQ> m(2, 2);
    m(0, 0) = LaurentQ::t(1);
    m(0, 1) = LaurentQ(Rational(1));
    m(1, 1) = LaurentQ::t(-1);
    // det = 1, so adj(m) * m = id.
    Mat<LaurentQ> prod = adjugate(m) * m;
    CHECK(prod(0, 0) == LaurentQ(Rational(1)));
    CHECK(prod(1, 1) == LaurentQ(Rational(1)));
    CHECK(prod(0, 1).is_zero());
    CHECK(prod(1, 0).is_zero());
}

TEST_CASE("form_roots on split forms") {
    // x*y -> roots [0:1] and [1:0]
    BinaryFormC xy(2, {Complex(0), Complex(1), Complex(0)});
    RootSet roots = form_roots(xy);
    REQUIRE(roots.points.size() == 2);
    int inf_count = 0, zero_count = 0;
    for (auto& p : roots.points) {
        if (p.at_infinity())
            ++inf_count;
        else if (std::abs(p.affine()) < 1e-12)
            ++zero_count;
    }
    CHECK(inf_count == 1);
    CHECK(zero_count == 1);

    // x^2 - y^2 -> [1:1], [-1:1]
    BinaryFormC f(2, {Complex(1), Complex(0), Complex(-1)});
    RootSet r2 = form_roots(f);
    REQUIRE(r2.points.size() == 2);
    std::vector<double> vals;
    for (auto& p : r2.points) vals.push_back(p.affine().real());
    std::sort(vals.begin(), vals.end());
    CHECK(vals[0] == Catch::Approx(-1.0).margin(1e-12));
    CHECK(vals[1] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("form_roots residuals on random degree-5 forms") {
    RngStream rng(7, 0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Complex> c(6);
        for (auto& z : c) z = Complex(rng.uniform_real(-1, 1), rng.uniform_real(-1, 1));
        BinaryFormC f(5, c);
        RootSet roots = form_roots(f);
        REQUIRE(roots.points.size() == 5);
        CHECK(roots.max_residual < 1e-10);
    }
}

TEST_CASE("form_roots product formula reconstructs the form") {
    RngStream rng(11, 0);
    for (int trial = 0; trial < 10; ++trial) {
        int d = 2 + static_cast<int>(rng.uniform_int(0, 3));
        std::vector<Complex> c(d + 1);
        for (auto& z : c) z = Complex(rng.uniform_real(-1, 1), rng.uniform_real(-1, 1));
        BinaryFormC f(d, c);
        RootSet roots = form_roots(f);
        Complex lambda = leading_factor(f, roots.points);
        BinaryFormC prod = product_of_root_forms(roots.points);
        double num = 0, den = 0;
        for (int j = 0; j <= d; ++j) {
            num += std::norm(f.coeff[j] - lambda * prod.coeff[j]);
            den += std::norm(f.coeff[j]);
        }
        CHECK(std::sqrt(num / den) < 1e-9);
    }
}

TEST_CASE("multipoly block substitution and degrees") {
    std::vector<std::string> vars = {"u0", "u1", "v0", "v1"};
    auto u0 = MultiPolyQ::variable(vars, 0), u1 = MultiPolyQ::variable(vars, 1);
    auto v0 = MultiPolyQ::variable(vars, 2), v1 = MultiPolyQ::variable(vars, 3);
    MultiPolyQ res = u0 * v1 - u1 * v0;
    CHECK(res.is_multihomogeneous(0, 2, 1));
    CHECK(res.is_multihomogeneous(2, 2, 1));

    // u -> (t^-1 u0, t u1)
    Mat<LaurentQ> sub(2, 2);
    sub(0, 0) = LaurentQ::t(-1);
    sub(1, 1) = LaurentQ::t(1);
    auto acted = substitute_block_linear<LaurentQ>(res, 0, 2, sub,
                                                   [](const Rational& r) { return LaurentQ(r); });
    std::vector<std::int64_t> vals;
    for (auto& [e, c] : acted.terms()) vals.push_back(c.valuation());
    std::sort(vals.begin(), vals.end());
    REQUIRE(vals.size() == 2);
    CHECK(vals[0] == -1);
    CHECK(vals[1] == 1);
}
