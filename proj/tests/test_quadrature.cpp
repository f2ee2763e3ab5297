#include <catch2/catch_amalgamated.hpp>

#include "isk/fs_metric.hpp"
#include "isk/quadrature.hpp"

using namespace isk;

namespace {

// int_0^1 log(A t + B (1-t)) dt, the exact FS average of log||g(z,1)||^2 for
// g with singular values sqrt(A), sqrt(B).
double log_segment_mean(double A, double B) {
    if (A == B) return std::log(A);
    return (A * std::log(A) - B * std::log(B)) / (A - B) - 1.0;
}

}  // namespace

TEST_CASE("grid integrates constants to machine precision") {
    QuadratureGrid grid{128, 128, 0};
    double mass = integrate_p1([](const P1Point&) { return 1.0; }, grid);
    CHECK(mass == Catch::Approx(1.0).margin(1e-13));
    double log_mass =
        integrate_p1([](const P1Point&) { return 1.0; }, QuadratureGrid::log_grid(256, 16));
    CHECK(log_mass == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("chart bookkeeping in P1Point") {
    P1Point near_pt = P1Point::from_affine(Complex(0.5, 0));
    CHECK(!near_pt.upper);
    P1Point far_pt = P1Point::from_affine(Complex(10, 0));
    CHECK(far_pt.upper);
    CHECK(std::abs(far_pt.z - Complex(0.1, 0)) < 1e-15);
    P1Point inf = P1Point::from_proj(P1ProjPoint::infinity());
    CHECK(inf.upper);
    CHECK(std::abs(inf.z) == 0.0);
}

TEST_CASE("the FS average of log|x| is -1/2") {
    // closed-form route through the root decomposition
    BinaryFormC s(1, {Complex(1, 0), Complex(0, 0)});
    QuadratureGrid grid{256, 256, 0};
    double v = integrate_log_section_against(s, [](const P1Point&) { return 1.0; }, grid);
    CHECK(v == Catch::Approx(-0.5).margin(1e-12));

    // direct nodewise quadrature of the singular integrand converges there too
    FSMetric h{1};
    double direct = integrate_p1([&](const P1Point& p) { return h.log_norm(s, p); },
                                 QuadratureGrid{2048, 64, 0});
    CHECK(direct == Catch::Approx(-0.5).margin(2e-4));
}

TEST_CASE("log-section integrals against smooth densities self-converge") {
    BinaryFormC s(2, {Complex(1, 0), Complex(-0.3, 0.4), Complex(-1.2, 0.1)});
    auto density = [](const P1Point& p) {
        double x = p.upper ? 1.0 / std::max(std::norm(p.z), 1e-30) : std::norm(p.z);
        return 1.0 + 1.0 / (1.0 + x);  // bounded smooth function of the point
    };
    double coarse = integrate_log_section_against(s, density, QuadratureGrid{128, 128, 0});
    double fine = integrate_log_section_against(s, density, QuadratureGrid{512, 512, 0});
    double finer = integrate_log_section_against(s, density, QuadratureGrid{1024, 1024, 0});
    CHECK(std::abs(fine - finer) < std::abs(coarse - finer));
    CHECK(std::abs(fine - finer) < 1e-6);
}

TEST_CASE("potential of the identity vanishes") {
    PotentialP1 phi(1, Mat<Complex>::identity(2));
    QuadratureGrid grid{64, 64, 0};
    double v = integrate_p1([&](const P1Point& p) { return phi.value(p); }, grid);
    CHECK(v == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("FS averages of group potentials match the singular-value formula") {
    QuadratureGrid grid = QuadratureGrid::log_grid(512, 512);

    Mat<Complex> diag(2, 2);
    diag(0, 0) = 2.0;
    diag(1, 1) = 0.5;
    PotentialP1 phi(1, diag);
    double got = integrate_p1([&](const P1Point& p) { return phi.value(p); }, grid);
    CHECK(got == Catch::Approx(log_segment_mean(4.0, 0.25)).margin(1e-9));

    Mat<Complex> shear(2, 2);
    shear(0, 0) = 1.0;
    shear(0, 1) = 1.0;
    shear(1, 1) = 1.0;
    // singular values of the shear: s^2 = (3 +- sqrt(5)) / 2
    double s1 = (3.0 + std::sqrt(5.0)) / 2.0, s2 = (3.0 - std::sqrt(5.0)) / 2.0;
    PotentialP1 psi(1, shear);
    double got2 = integrate_p1([&](const P1Point& p) { return psi.value(p); }, grid);
    CHECK(got2 == Catch::Approx(log_segment_mean(s1, s2)).margin(1e-9));
}

TEST_CASE("bergman curvature densities carry no net mass") {
    RngStream rng(5, 0);
    Mat<Complex> g(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            g(i, j) = (i == j ? Complex(1, 0) : Complex(0, 0)) + 0.3 * rng.complex_gaussian();
    Complex det = sym_det(g);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) *= std::pow(det, -1.0 / 3.0);
    PotentialP1 phi(2, g);
    double mid = integrate_p1([&](const P1Point& p) { return phi.ddc_density(p); },
                              QuadratureGrid{512, 512, 0});
    CHECK(mid == Catch::Approx(0.0).margin(1e-5));
    double log_rule = integrate_p1([&](const P1Point& p) { return phi.ddc_density(p); },
                                   QuadratureGrid::log_grid(512, 512));
    CHECK(log_rule == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("non-finite integrands abort with a located error") {
    QuadratureGrid grid{8, 8, 0};
    CHECK_THROWS_AS(integrate_p1(
                        [](const P1Point& p) {
                            return p.u > 0.4 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
                        },
                        grid),
                    std::runtime_error);
}

TEST_CASE("parallel integration is bitwise identical to serial") {
    QuadratureGrid grid{256, 256, 0};
    auto f = [](const P1Point& p) { return std::cos(3.0 * std::arg(p.z + 2.0)) + p.u; };
    double serial = integrate_p1(f, grid, 1);
    double parallel = integrate_p1(f, grid, 4);
    CHECK(serial == parallel);
}

TEST_CASE("log-section integrals handle zeros at infinity") {
    // s = y vanishes at [1:0]; the closed-form route still gives -1/2
    BinaryFormC s(1, {Complex(0, 0), Complex(1, 0)});
    QuadratureGrid grid{256, 256, 0};
    double v = integrate_log_section_against(s, [](const P1Point&) { return 1.0; }, grid);
    CHECK(v == Catch::Approx(-0.5).margin(1e-12));

    // and against a nonconstant bounded density it stays finite and stable
    auto density = [](const P1Point& p) { return 2.0 + (p.upper ? std::norm(p.z) : 1.0); };
    double fine = integrate_log_section_against(s, density, QuadratureGrid{512, 512, 0});
    double finer = integrate_log_section_against(s, density, QuadratureGrid{1024, 1024, 0});
    CHECK(std::abs(fine - finer) < 1e-5);
}
