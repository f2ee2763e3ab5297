#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "isk/fs_metric.hpp"
#include "isk/quadrature.hpp"
#include "isk/toric.hpp"

namespace isk {

namespace detail {

inline double resultant_normalized(const BinaryFormC& f, const BinaryFormC& g) {
    // |Res(f,g)| scaled by coefficient norms; zero iff common root.
    const int n = f.degree + g.degree;
    Mat<Complex> syl(n, n);
    for (int r = 0; r < g.degree; ++r)
        for (int k = 0; k <= f.degree; ++k) syl(r, r + k) = f.coeff[k];
    for (int r = 0; r < f.degree; ++r)
        for (int k = 0; k <= g.degree; ++k) syl(g.degree + r, r + k) = g.coeff[k];
    double res = std::abs(sym_det(syl));
    double nf = form_coeff_norm(f), ng = form_coeff_norm(g);
    return res / (std::pow(nf, g.degree) * std::pow(ng, f.degree));
}

}  // namespace detail

/**
 * Metric value of the two-factor pairing: for sections s0, s1 without common
 * zero and FS metrics h0, h1,
 *   -log |<s0, s1>| = -sum_{z in Z(s0)} log|s1(z)|_{h1}
 *                     - deg(h1) * int log|s0|_{h0} dmu_FS.
 */
inline double deligne_value(const BinaryFormC& s0, const BinaryFormC& s1, const FSMetric& h0,
                            const FSMetric& h1, const QuadratureGrid& grid, int jobs = 1) {
    if (s0.degree != h0.degree || s1.degree != h1.degree)
        throw std::invalid_argument("deligne_value: metric degrees must match the sections");
    if (detail::resultant_normalized(s0, s1) < 1e-12)
        throw std::domain_error("deligne_value: sections share a zero");

    RootSet z0 = form_roots(s0);
    double zero_term = 0.0;
    for (auto& root : z0.points) zero_term -= h1.log_norm(s1, P1Point::from_proj(root));

    double integral = integrate_log_section_against(
        s0, [](const P1Point&) { return 1.0; }, grid, jobs);
    return zero_term - h1.degree * integral;
}

/**
 * Defect of the change-of-metric identity on a fixed pairing section,
 * evaluated through the opposite zero divisor so both sides take genuinely
 * different numerical routes:
 *   <h0 e^{-phi}, h1> = e^{-int phi w1} <h0, h1>.
 */
struct ChangeOfMetricSections {
    BinaryFormC s0, s1;
    FSMetric h0, h1;
};

inline ChangeOfMetricSections default_com_sections() {
    // degree-one sections with zeros at 2 and -2, away from grid clusters
    BinaryFormC s0(1, {Complex(1, 0), Complex(-2, 0)});
    BinaryFormC s1(1, {Complex(1, 0), Complex(2, 0)});
    return {s0, s1, FSMetric{1}, FSMetric{1}};
}

inline double change_of_metric_check(const Potential& phi, const ChangeOfMetricSections& sec,
                                     const QuadratureGrid& grid, int jobs = 1) {
    const int d0 = sec.h0.degree, d1 = sec.h1.degree;
    RootSet z1 = form_roots(sec.s1);

    double perturbed_zero_term = 0.0, plain_zero_term = 0.0;
    for (auto& root : z1.points) {
        P1Point p = P1Point::from_proj(root);
        double base = sec.h0.log_norm(sec.s0, p);
        plain_zero_term -= base;
        perturbed_zero_term -= base - 0.5 * phi.value(p);
    }
    double plain_integral = integrate_log_section_against(
        sec.s1, [&](const P1Point&) { return static_cast<double>(d0); }, grid, jobs);
    double perturbed_integral = integrate_log_section_against(
        sec.s1, [&](const P1Point& p) { return d0 + phi.ddc_density(p); }, grid, jobs);

    double lhs = perturbed_zero_term - perturbed_integral;
    double phi_mass = integrate_p1([&](const P1Point& p) { return phi.value(p); }, grid, jobs);
    double rhs = (plain_zero_term - plain_integral) + 0.5 * d1 * phi_mass;
    return std::abs(lhs - rhs);
}

struct FunctionalsResult {
    double e;        // Monge-Ampere energy
    double j;        // J functional
    double j_chi_c;  // twisted functional J_{chi, c}
};

/**
 * The curve-case functionals for a potential on O(a), with twisting form the
 * FS form of O(b) and equation coefficient c1:
 *   E = (1/2V) int phi (w_phi + w_0),  J = V^{-1} int phi w_0 - E,
 *   J_{chi,c} = V^{-1} c1 int phi chi - C E,   V = a, C = c1 b / a.
 */
inline FunctionalsResult functionals_p1(const Potential& phi, int a, int b,
                                        const Rational& c1, const QuadratureGrid& grid,
                                        int jobs = 1) {
    if (a < 1 || b < 1) throw std::invalid_argument("functionals_p1: degrees must be positive");
    const double V = a;
    const double C = to_double(c1) * b / a;

    double phi_mass = integrate_p1([&](const P1Point& p) { return phi.value(p); }, grid, jobs);
    double phi_moved = integrate_p1(
        [&](const P1Point& p) { return phi.value(p) * (a + phi.ddc_density(p)); }, grid, jobs);

    FunctionalsResult out;
    out.e = (phi_moved + a * phi_mass) / (2.0 * V);
    out.j = a * phi_mass / V - out.e;
    out.j_chi_c = to_double(c1) * b * phi_mass / V - C * out.e;
    return out;
}

inline FunctionalsResult functionals_p1(const PotentialP1& phi, int a, int b, const Rational& c1,
                                        const QuadratureGrid& grid, int jobs = 1) {
    if (phi.degree() != phi.exponent() * a)
        throw std::invalid_argument("functionals_p1: potential degree must be exponent * a");
    return functionals_p1(phi.to_potential(), a, b, c1, grid, jobs);
}

/**
 * Pairing difference under simultaneous changes of metric on a two-factor
 * pairing of degrees (d0, d1):
 *   <w0 + dd^c f0, w1 + dd^c f1> - <w0, w1>
 *     = int f0 d(w1 + dd^c f1) + int f1 dw0.
 */
inline double pairing_difference(const Potential& f0, const Potential& f1, int d0, int d1,
                                 const QuadratureGrid& grid, int jobs = 1) {
    double first = integrate_p1(
        [&](const P1Point& p) { return f0.value(p) * (d1 + f1.ddc_density(p)); }, grid, jobs);
    double second = integrate_p1([&](const P1Point& p) { return d0 * f1.value(p); }, grid, jobs);
    return first + second;
}

struct C0AuditResult {
    double max_ratio = 0.0;
    int samples = 0;
};

/// Random determinant-one matrix, mildly conditioned, for Bergman potentials.
inline Mat<Complex> random_unimodular(int size, RngStream& rng, double spread = 0.6) {
    Mat<Complex> g(size, size);
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            Complex noise = rng.complex_gaussian() * (spread / std::sqrt(2.0 * size));
            g(i, j) = (i == j ? Complex(1.0, 0.0) : Complex(0.0, 0.0)) + noise;
        }
    }
    Complex det = sym_det(g);
    Complex scale = std::pow(det, -1.0 / size);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) g(i, j) *= scale;
    return g;
}

/**
 * Empirical uniform-bound audit: over random pairs of Bergman potentials,
 * the ratio |pairing difference| / (sup|f0| + sup|f1|). The maximum is
 * reported; it must stay finite and stable as the sample grows.
 */
inline C0AuditResult c0_estimate_audit(int sample_count, std::uint64_t seed, int d0, int d1,
                                       const QuadratureGrid& grid, int jobs = 1) {
    C0AuditResult out;
    out.samples = sample_count;
    for (int s = 0; s < sample_count; ++s) {
        RngStream rng(seed, static_cast<std::uint64_t>(s) + 1);
        PotentialP1 p0(1, random_unimodular(d0 + 1, rng));
        PotentialP1 p1(1, random_unimodular(d1 + 1, rng));
        Potential f0 = p0.to_potential(), f1 = p1.to_potential();

        double sup = 0.0;
        for (int i = 0; i < grid.n_radial; i += 7)
            for (int j = 0; j < grid.n_angular; j += 7) {
                P1Point p = grid.node(i, j);
                sup = std::max(sup, std::abs(f0.value(p)) + std::abs(f1.value(p)));
            }
        if (sup == 0.0) continue;  // ratio defined as zero for the zero pair
        double diff = std::abs(pairing_difference(f0, f1, d0, d1, grid, jobs));
        out.max_ratio = std::max(out.max_ratio, diff / sup);
    }
    return out;
}

}  // namespace isk
