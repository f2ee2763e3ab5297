#include <catch2/catch_amalgamated.hpp>

#include "isk/functionals.hpp"

using namespace isk;

namespace {

const QuadratureGrid kGrid{512, 512, 0};
const QuadratureGrid kLogGrid = QuadratureGrid::log_grid(512, 512);

Mat<Complex> diag2(double a, double b) {
    Mat<Complex> m(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

BinaryFormC affine_section(std::vector<Complex> c) {
    int d = static_cast<int>(c.size()) - 1;
    return BinaryFormC(d, std::move(c));
}

}  // namespace

TEST_CASE("pairing value of <x, y> with FS metrics is 1/2") {
    BinaryFormC s0 = affine_section({Complex(1, 0), Complex(0, 0)});  // x
    BinaryFormC s1 = affine_section({Complex(0, 0), Complex(1, 0)});  // y
    double v = deligne_value(s0, s1, FSMetric{1}, FSMetric{1}, kGrid);
    CHECK(v == Catch::Approx(0.5).margin(1e-10));
}

TEST_CASE("pairing value is symmetric in the two slots") {
    RngStream rng(12, 0);
    for (int trial = 0; trial < 4; ++trial) {
        int d0 = 1 + static_cast<int>(rng.uniform_int(0, 2));
        int d1 = 1 + static_cast<int>(rng.uniform_int(0, 2));
        std::vector<Complex> c0(d0 + 1), c1(d1 + 1);
        for (auto& c : c0) c = Complex(rng.uniform_real(-1, 1), rng.uniform_real(-1, 1));
        for (auto& c : c1) c = Complex(rng.uniform_real(-1, 1), rng.uniform_real(-1, 1));
        BinaryFormC s0(d0, c0), s1(d1, c1);
        if (detail::resultant_normalized(s0, s1) < 1e-6) continue;
        double a = deligne_value(s0, s1, FSMetric{d0}, FSMetric{d1}, kGrid);
        double b = deligne_value(s1, s0, FSMetric{d1}, FSMetric{d0}, kGrid);
        CHECK(a == Catch::Approx(b).margin(2e-6));
    }
}

TEST_CASE("scaling a slot shifts the pairing by minus log of the factor") {
    BinaryFormC s0 = affine_section({Complex(1, 0), Complex(-2, 0)});
    BinaryFormC s1 = affine_section({Complex(1, 0), Complex(3, 0)});
    double base = deligne_value(s0, s1, FSMetric{1}, FSMetric{1}, kGrid);
    BinaryFormC scaled = s1;
    for (auto& c : scaled.coeff) c *= 5.0;
    double moved = deligne_value(s0, scaled, FSMetric{1}, FSMetric{1}, kGrid);
    CHECK(moved - base == Catch::Approx(-std::log(5.0)).margin(1e-10));
}

TEST_CASE("sections with a common zero are rejected") {
    BinaryFormC s0 = affine_section({Complex(1, 0), Complex(-1, 0)});
    BinaryFormC s1 = affine_section({Complex(2, 0), Complex(-2, 0)});
    CHECK_THROWS_AS(deligne_value(s0, s1, FSMetric{1}, FSMetric{1}, kGrid), std::domain_error);
}

TEST_CASE("change of metric: constant weights are exact") {
    auto sec = default_com_sections();
    double defect = change_of_metric_check(zero_potential().shifted(0.7), sec, kGrid);
    CHECK(defect < 1e-12);
}

TEST_CASE("change of metric: random Bergman weights") {
    auto sec = default_com_sections();
    for (int s = 0; s < 3; ++s) {
        RngStream rng(400 + s, 0);
        PotentialP1 phi(2, random_unimodular(3, rng));
        double defect = change_of_metric_check(phi.to_potential(), sec, kGrid);
        CHECK(defect < 1e-5);
        double defect_fine =
            change_of_metric_check(phi.to_potential(), sec, QuadratureGrid{1024, 1024, 0});
        CHECK(defect_fine < defect + 1e-12);

        // the identity is insensitive to the sign of the weight
        Potential neg{[phi](const P1Point& p) { return -phi.value(p); },
                      [phi](const P1Point& p) { return -phi.ddc_density(p); }};
        double defect_neg = change_of_metric_check(neg, sec, kGrid);
        CHECK(defect_neg == Catch::Approx(defect).margin(1e-5));
    }
}

TEST_CASE("functionals vanish at the zero potential") {
    auto r = functionals_p1(zero_potential(), 1, 1, Rational(1), kLogGrid);
    CHECK(r.e == 0.0);
    CHECK(r.j == 0.0);
    CHECK(r.j_chi_c == 0.0);
}

TEST_CASE("functionals under constant shifts: E moves, J is invariant") {
    RngStream rng(21, 0);
    PotentialP1 phi(1, random_unimodular(2, rng));
    auto base = functionals_p1(phi.to_potential(), 1, 1, Rational(1), kLogGrid);
    auto moved = functionals_p1(phi.to_potential().shifted(0.3), 1, 1, Rational(1), kLogGrid);
    CHECK(moved.e - base.e == Catch::Approx(0.3).margin(1e-12));
    CHECK(moved.j == Catch::Approx(base.j).margin(1e-12));
}

TEST_CASE("energy vanishes along determinant-one moves of the degree-one embedding") {
    // For O(1) every unimodular move is a coordinate change, so the energy is
    // exactly zero along the whole family.
    for (double lam : {2.0, 4.0}) {
        PotentialP1 phi(1, diag2(lam, 1.0 / lam));
        auto r = functionals_p1(phi, 1, 1, Rational(1), kLogGrid);
        CHECK(r.e == Catch::Approx(0.0).margin(1e-9));
        CHECK(r.j >= 0.0);
    }
}

TEST_CASE("energy is reproducible under grid refinement") {
    PotentialP1 phi(1, diag2(2.0, 0.5));
    auto coarse = functionals_p1(phi, 1, 1, Rational(1), QuadratureGrid::log_grid(512, 512));
    auto fine = functionals_p1(phi, 1, 1, Rational(1), QuadratureGrid::log_grid(1024, 1024));
    CHECK(std::abs(coarse.e - fine.e) < 1e-8);
}

TEST_CASE("J is nonnegative on random Bergman potentials") {
    for (int s = 0; s < 6; ++s) {
        RngStream rng(71 + s, 0);
        PotentialP1 phi(2, random_unimodular(3, rng));
        auto r = functionals_p1(phi.to_potential(), 1, 1, Rational(1), kLogGrid);
        CHECK(r.j >= -1e-10);
    }
}

TEST_CASE("on the curve J_chi_c is C times J") {
    RngStream rng(33, 0);
    PotentialP1 phi(1, random_unimodular(2, rng));
    int b = 3;
    Rational c1(2);
    auto r = functionals_p1(phi.to_potential(), 1, b, c1, kLogGrid);
    double C = to_double(c1) * b / 1.0;
    CHECK(r.j_chi_c == Catch::Approx(C * r.j).margin(1e-10));
}

TEST_CASE("pairing difference for constant weights gives the degree") {
    double c = 0.8;
    double diff = pairing_difference(zero_potential().shifted(c), zero_potential(), 2, 3, kLogGrid);
    CHECK(diff == Catch::Approx(c * 3).margin(1e-12));
    // ratio |difference| / sup = degree of the opposite slot, exactly
    CHECK(std::abs(diff) / c == Catch::Approx(3.0).margin(1e-12));
}

TEST_CASE("uniform-bound audit is finite and grows mildly") {
    QuadratureGrid grid{128, 128, 0};
    auto small = c0_estimate_audit(5, 2024, 1, 1, grid);
    auto larger = c0_estimate_audit(10, 2024, 1, 1, grid);
    CHECK(std::isfinite(small.max_ratio));
    CHECK(std::isfinite(larger.max_ratio));
    CHECK(larger.max_ratio >= small.max_ratio);  // nested samples
    CHECK(larger.max_ratio <= 2.0 + 1.0);        // well under the degree bound
}

TEST_CASE("named pairing example: x against x + y") {
    BinaryFormC s0 = affine_section({Complex(1, 0), Complex(0, 0)});
    BinaryFormC s1 = affine_section({Complex(1, 0), Complex(1, 0)});
    double a = deligne_value(s0, s1, FSMetric{1}, FSMetric{1}, kGrid);
    double b = deligne_value(s1, s0, FSMetric{1}, FSMetric{1}, kGrid);
    CHECK(std::isfinite(a));
    CHECK(a == Catch::Approx(b).margin(1e-6));
}
