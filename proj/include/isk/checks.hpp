#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "isk/chow_norm.hpp"
#include "isk/functionals.hpp"
#include "isk/json_io.hpp"
#include "isk/slope.hpp"
#include "isk/toric.hpp"

namespace isk {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string value;      // headline measurement
    std::string tolerance;  // the fixed bar it is held to
    std::string detail;     // what the check verifies
};

struct CheckOptions {
    std::uint64_t seed = 20240917;
    int jobs = 2;
};

namespace checks {

// 1. Intersection numbers on the quadric surface through mixed volumes.
inline CheckResult intersection_quadric(const CheckOptions&) {
    CheckResult r;
    r.name = "01_intersection_numbers_quadric";
    r.detail = "pairing of O(a,b) and O(c,d) on the product of two lines equals ad+bc, "
               "computed as an exact mixed volume of rectangles";
    r.tolerance = "exact, 256 cases";
    int checked = 0, good = 0;
    for (int a = 1; a <= 4; ++a)
        for (int b = 1; b <= 4; ++b)
            for (int c = 1; c <= 4; ++c)
                for (int d = 1; d <= 4; ++d) {
                    auto box = [](int w, int h) {
                        return RationalPolytope::from_points(
                            2, {{Rational(0), Rational(0)},
                                {Rational(w), Rational(0)},
                                {Rational(0), Rational(h)},
                                {Rational(w), Rational(h)}});
                    };
                    Rational mv = mixed_volume({box(a, b), box(c, d)});
                    ++checked;
                    if (mv == Rational(a * d + b * c)) ++good;
                }
    r.pass = good == checked;
    r.value = std::to_string(good) + "/" + std::to_string(checked) + " exact";
    return r;
}

// 2. Mixed-volume diagonal identity on random polytopes.
inline CheckResult mixed_volume_diagonal(const CheckOptions& opt) {
    CheckResult r;
    r.name = "02_mixed_volume_diagonal";
    r.detail = "the mixed volume of a polytope with itself m times equals m! vol, exactly, "
               "on twenty random rational polytopes in dimensions two and three";
    r.tolerance = "exact, 20 cases";
    int good = 0, total = 0;
    for (int d = 2; d <= 3; ++d)
        for (int trial = 0; trial < 10; ++trial) {
            RngStream rng(splitmix64(opt.seed ^ 0xA1B2ULL), 10 * d + trial);
            std::vector<VecQ> pts;
            for (int i = 0; i < d + 5; ++i) {
                VecQ v(d);
                for (auto& x : v) x = Rational(rng.uniform_int(-4, 4), 1 + rng.uniform_int(0, 2));
                pts.push_back(v);
            }
            auto p = RationalPolytope::from_points(d, pts);
            if (p.affine_dim() < d) {
                // degenerate draws still satisfy the identity (both sides zero)
                std::vector<RationalPolytope> args(d, p);
                ++total;
                if (mixed_volume(args) == 0) ++good;
                continue;
            }
            std::vector<RationalPolytope> args(d, p);
            ++total;
            if (mixed_volume(args) == Rational(int_factorial(d)) * p.volume()) ++good;
        }
    r.pass = good == total;
    r.value = std::to_string(good) + "/" + std::to_string(total) + " exact";
    return r;
}

// 3. Model energies against the blowup oracle and product configurations.
inline CheckResult model_energy_oracle(const CheckOptions&) {
    CheckResult r;
    r.name = "03_model_energy_oracle";
    r.detail = "energy of the one-point degeneration of the line equals c - c^2/2 "
               "(blowup class algebra), and product data has vanishing J functionals";
    r.tolerance = "exact";
    auto seg = RationalPolytope::from_points(1, {{Rational(0)}, {Rational(1)}});
    bool good = true;
    for (int num = 1; num <= 3; ++num) {
        Rational c(num, 4);
        PLConcave f(seg, {AffinePiece{{Rational(0)}, c}, AffinePiece{{Rational(1)}, Rational(0)}});
        // independent oracle: W = Lbar + c F0 - c E on the blowup,
        // (W^2) = 2c - c^2 from Lbar.F0 = 1, E^2 = -1
        Rational oracle = (Rational(2) * c - c * c) / 2;
        good = good && na_energy(seg, f) == c - c * c / 2 && na_energy(seg, f) == oracle;

        ToricPair pair(seg, seg);
        EquationSpec eq(1, {Rational(1)});
        auto prod = na_J_functionals(pair, PLConcave::constant(seg, c), eq);
        good = good && prod.e_na == c && prod.j_na == 0 && prod.j_na_hc == 0;
    }
    r.pass = good;
    r.value = good ? "all exact" : "mismatch";
    return r;
}

// 4. Change-of-metric identity at the stated grid.
inline CheckResult change_of_metric(const CheckOptions& opt) {
    CheckResult r;
    r.name = "04_change_of_metric";
    r.detail = "twisting one metric of a pairing by a smooth weight rescales the pairing by "
               "the weight's average against the other curvature; checked through the "
               "opposite zero divisor on five random Bergman weights";
    r.tolerance = "defect < 1e-6 at 2048^2, decreasing under doubling";
    auto sec = default_com_sections();
    double worst = 0.0, worst_coarse = 0.0;
    bool good = true;
    for (int s = 0; s < 5; ++s) {
        RngStream rng(splitmix64(opt.seed ^ 0xC0DEULL), s + 1);
        PotentialP1 phi(2, random_unimodular(3, rng));
        double coarse =
            change_of_metric_check(phi.to_potential(), sec, QuadratureGrid(1024, 1024), opt.jobs);
        double fine =
            change_of_metric_check(phi.to_potential(), sec, QuadratureGrid(2048, 2048), opt.jobs);
        worst = std::max(worst, fine);
        worst_coarse = std::max(worst_coarse, coarse);
        good = good && fine < 1e-6 && fine < coarse;
    }
    r.pass = good;
    std::ostringstream os;
    os << "max defect " << worst << " (vs " << worst_coarse << " at half resolution)";
    r.value = os.str();
    return r;
}

// 5. Symmetry of the pairing value in its two slots.
inline CheckResult pairing_symmetry(const CheckOptions& opt) {
    CheckResult r;
    r.name = "05_pairing_symmetry";
    r.detail = "the metric value of the two-slot pairing is symmetric under swapping "
               "sections and metrics; ten random coprime pairs of degree up to three";
    r.tolerance = "|difference| < 1e-5";
    QuadratureGrid grid(1024, 1024);
    double worst = 0.0;
    int done = 0;
    std::uint64_t stream = 0;
    while (done < 10) {
        RngStream rng(splitmix64(opt.seed ^ 0x5E55ULL), ++stream);
        int d0 = 1 + static_cast<int>(rng.uniform_int(0, 2));
        int d1 = 1 + static_cast<int>(rng.uniform_int(0, 2));
        std::vector<Complex> c0(d0 + 1), c1(d1 + 1);
        for (auto& c : c0) c = Complex(rng.uniform_real(-1, 1), rng.uniform_real(-1, 1));
        for (auto& c : c1) c = Complex(rng.uniform_real(-1, 1), rng.uniform_real(-1, 1));
        BinaryFormC s0(d0, c0), s1(d1, c1);
        if (detail::resultant_normalized(s0, s1) < 1e-6) continue;
        double a = deligne_value(s0, s1, FSMetric{d0}, FSMetric{d1}, grid, opt.jobs);
        double b = deligne_value(s1, s0, FSMetric{d1}, FSMetric{d0}, grid, opt.jobs);
        worst = std::max(worst, std::abs(a - b));
        ++done;
    }
    r.pass = worst < 1e-5;
    std::ostringstream os;
    os << "max asymmetry " << worst;
    r.value = os.str();
    return r;
}

// 6. Slope theorem along monomial arcs against the toric models.
inline CheckResult slope_theorem(const CheckOptions& opt) {
    CheckResult r;
    r.name = "06_slope_theorem";
    r.detail = "energy and J slopes along monomial arc rays equal the exact "
               "intersection-number functionals of the induced toric models";
    r.tolerance = "1% relative (2e-3 floor), fit residual < 1e-3, ladder 2^-4..2^-12";
    struct Case {
        std::vector<std::int64_t> w;
        int m;
    };
    std::vector<Case> cases = {{{1, -1}, 1},      {{2, -2}, 1},     {{2, 0, -2}, 2},
                               {{1, 1, -2}, 2},   {{2, -1, -1}, 2}, {{1, -2, 1}, 2}};
    bool good = true;
    double worst_rel = 0.0, worst_resid = 0.0;
    for (auto& c : cases) {
        ArcMatrix rho = ArcMatrix::monomial(c.w);
        ArcToricModel model = arc_to_toric(rho, c.m, 1);
        ToricPair pair(model.f.base(), model.f.base());
        EquationSpec eq(1, {Rational(1)});
        auto na = na_J_functionals(pair, model.f, eq);
        double e_expect = to_double(na.e_na + model.energy_shift);
        double j_expect = to_double(na.j_na);

        SlopeFit e_fit = slope_fit(FunctionalKind::Energy, rho, c.m, 1, 1, Rational(1), 4, 12, 0,
                                   256, opt.jobs);
        SlopeFit j_fit =
            slope_fit(FunctionalKind::J, rho, c.m, 1, 1, Rational(1), 4, 12, 0, 256, opt.jobs);
        auto rel = [](double got, double expect) {
            return std::abs(got - expect) / std::max(std::abs(expect), 0.2);
        };
        worst_rel = std::max({worst_rel, rel(e_fit.slope, e_expect), rel(j_fit.slope, j_expect)});
        worst_resid = std::max({worst_resid, e_fit.residual, j_fit.residual});
        good = good && std::abs(e_fit.slope - e_expect) <= std::max(0.01 * std::abs(e_expect), 2e-3) &&
               std::abs(j_fit.slope - j_expect) <= std::max(0.01 * std::abs(j_expect), 2e-3) &&
               e_fit.residual < 1e-3 && j_fit.residual < 1e-3 && !e_fit.overflow_warning &&
               !j_fit.overflow_warning;
    }
    r.pass = good;
    std::ostringstream os;
    os << "worst relative error " << worst_rel << ", worst residual " << worst_resid;
    r.value = os.str();
    return r;
}

// 7. Log-norm expression of the twisted functional: offset constancy.
inline CheckResult lognorm_offsets(const CheckOptions& opt) {
    CheckResult r;
    r.name = "07_lognorm_offsets";
    r.detail = "the twisted functional of a group move equals the common-random-number "
               "log-norm difference of the two resultant vectors up to a move-independent "
               "offset; five group elements";
    r.tolerance = "pairwise offset gaps < 3 x combined standard error, 1e5 samples";
    auto mat2 = [](double a00, double a01, double a10, double a11) {
        Mat<Complex> m(2, 2);
        m(0, 0) = a00;
        m(0, 1) = a01;
        m(1, 0) = a10;
        m(1, 1) = a11;
        return m;
    };
    std::vector<Mat<Complex>> sigmas = {
        mat2(2.0, 0.0, 0.0, 0.5), mat2(4.0, 0.0, 0.0, 0.25), mat2(1.0, 1.0, 0.0, 1.0),
        mat2(1.0, 0.0, 0.75, 1.0), mat2(std::cos(0.7), std::sin(0.7), -std::sin(0.7), std::cos(0.7))};
    MCConfig mc;
    mc.samples = 100000;
    mc.seed = splitmix64(opt.seed ^ 0x10F3ULL);
    mc.jobs = opt.jobs;
    QuadratureGrid grid = QuadratureGrid::log_grid(1024, 512);

    std::vector<LognormResult> results;
    for (auto& s : sigmas) results.push_back(lognorm_J(1, 1, 1, Rational(1), s, mc, grid, opt.jobs));
    bool good = true;
    double worst_gap = 0.0, max_se = 0.0;
    for (size_t i = 0; i < results.size(); ++i) {
        max_se = std::max(max_se, results[i].se);
        for (size_t j = i + 1; j < results.size(); ++j) {
            double gap = std::abs(results[i].offset - results[j].offset);
            double bar = 3.0 * std::hypot(results[i].se, results[j].se);
            worst_gap = std::max(worst_gap, gap / bar);
            good = good && gap < bar;
        }
    }
    r.pass = good;
    std::ostringstream os;
    os << "worst gap " << worst_gap << " of the allowed 3-sigma bar, max se " << max_se;
    r.value = os.str();
    return r;
}

// 8. Float slopes of pair log-norms round to the symbolic weights.
inline CheckResult pair_weight_bridge(const CheckOptions&) {
    CheckResult r;
    r.name = "08_pair_weight_bridge";
    r.detail = "floating-point slopes of the log-norm ratio along every monomial arc in "
               "the test set round exactly to the symbolic valuation weight";
    r.tolerance = "exact after rounding, ladder 2^-4..2^-12";
    bool good = true;
    int count = 0;
    double worst = 0.0;
    for (auto [m, bound] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}}) {
        PairVectors pair = PairVectors::application(m, 1, 1);
        auto fam = monomial_arcs(m + 1, bound);
        for (size_t i = 0; i < fam.arcs.size(); ++i) {
            SlopeFit fit = pair_log_norm_slope(pair, fam.arcs[i], 4, 12);
            std::int64_t expect = nu(pair, fam.arcs[i]);
            good = good && std::llround(fit.slope) == expect;
            worst = std::max(worst, std::abs(fit.slope - expect));
            ++count;
        }
    }
    r.pass = good;
    std::ostringstream os;
    os << count << " arcs, worst pre-rounding deviation " << worst;
    r.value = os.str();
    return r;
}

// 9. Nonnegative arc norms and exact weight identities over sampled arcs.
inline CheckResult arc_norm_nonnegativity(const CheckOptions& opt) {
    CheckResult r;
    r.name = "09_arc_norms";
    r.detail = "arc norms stay nonnegative over the sampled family, and the weights are "
               "antisymmetric and additive over vector triples, exactly";
    r.tolerance = "zero exceptions over 200 arcs (valuation and degree bounds 2)";
    bool good = true;
    int total = 0;
    for (auto [m, count] : std::vector<std::pair<int, int>>{{1, 100}, {2, 100}}) {
        PairVectors pair = PairVectors::application(m, 1, 1);
        PairVectors swapped = pair.swapped();
        ChowVector third(ChowSpec{m, 2}, false);
        auto fam = sample_arcs(m + 1, 2, 2, count, splitmix64(opt.seed ^ 0xAB1EULL) + m);
        for (auto& rho : fam.arcs) {
            ++total;
            try {
                std::int64_t n = arc_norm(pair, rho);
                good = good && n >= 0;
            } catch (const std::logic_error&) {
                good = false;
            }
            good = good && nu(pair, rho) == -nu(swapped, rho);
            good = good && nu_normalized(pair.v, pair.w, rho) +
                                   nu_normalized(pair.w, third, rho) ==
                               nu_normalized(pair.v, third, rho);
        }
    }
    r.pass = good && total >= 200;
    r.value = std::to_string(total) + " arcs, all identities exact";
    if (!good) r.value = "violation found";
    return r;
}

// 10. Semistability of the application pairs on the curve.
inline CheckResult curve_semistability(const CheckOptions& opt) {
    CheckResult r;
    r.name = "10_curve_semistability";
    r.detail = "margins of the resultant pair of the line at epsilon zero stay "
               "nonnegative over the sampled arc family, for exponents one and two; "
               "the largest epsilon consistent with all margins is recorded";
    r.tolerance = "all margins >= 0";
    bool good = true;
    std::ostringstream eps_note;
    for (int m : {1, 2}) {
        PairVectors pair = PairVectors::application(m, 1, 1);
        auto fam = sample_arcs(m + 1, 2, 2, 200, splitmix64(opt.seed ^ 0xF00DULL) + m);
        std::optional<Rational> eps_max;
        for (size_t i = 0; i < fam.arcs.size(); ++i) {
            auto verdict = check_pair(pair, fam.arcs[i], Rational(0), fam.ids[i]);
            good = good && verdict.margin >= 0;
            if (verdict.norm > verdict.nu) {
                Rational cap = Rational(verdict.nu) / Rational(verdict.norm - verdict.nu);
                if (!eps_max || cap < *eps_max) eps_max = cap;
            }
        }
        eps_note << "m=" << m << ": eps_max "
                 << (eps_max ? rat_str(*eps_max) : std::string("unbounded")) << "; ";
    }
    r.pass = good;
    r.value = eps_note.str();
    return r;
}

// 11. Stability of the uniform-bound audit under sample doubling.
inline CheckResult c0_audit(const CheckOptions& opt) {
    CheckResult r;
    r.name = "11_c0_audit";
    r.detail = "the empirical constant of the uniform pairing bound stays finite and "
               "moves less than twenty percent when the sample doubles";
    r.tolerance = "relative change < 0.2 from 25 to 50 pairs";
    QuadratureGrid grid = QuadratureGrid::log_grid(512, 256);
    auto small = c0_estimate_audit(25, splitmix64(opt.seed ^ 0xCAFEULL), 1, 1, grid, opt.jobs);
    auto large = c0_estimate_audit(50, splitmix64(opt.seed ^ 0xCAFEULL), 1, 1, grid, opt.jobs);
    bool finite = std::isfinite(small.max_ratio) && std::isfinite(large.max_ratio) &&
                  small.max_ratio > 0;
    double change = std::abs(large.max_ratio - small.max_ratio) / small.max_ratio;
    r.pass = finite && change < 0.2;
    std::ostringstream os;
    os << "ratio 25 -> " << small.max_ratio << ", 50 -> " << large.max_ratio << ", change "
       << change;
    r.value = os.str();
    return r;
}

// 12. Determinism probe of every stochastic and floating component.
inline CheckResult determinism_probe(const CheckOptions& opt) {
    CheckResult r;
    r.name = "12_determinism";
    r.detail = "rerunning the stochastic components (Monte Carlo norms, sampled arcs, "
               "model scans, quadratures) with the same seed reproduces every byte";
    r.tolerance = "bit-identical values";
    auto run_once = [&]() {
        std::ostringstream os;
        os.precision(17);
        MCConfig mc;
        mc.samples = 20000;
        mc.seed = splitmix64(opt.seed ^ 0xD17EULL);
        mc.jobs = opt.jobs;
        ChowVector R(ChowSpec{1, 1}, false);
        os << chow_norm(R, mc).log_norm_sq << "|";

        auto seg = RationalPolytope::from_points(1, {{Rational(0)}, {Rational(1)}});
        ToricPair pair(seg, RationalPolytope::from_points(1, {{Rational(0)}, {Rational(2)}}));
        EquationSpec eq(1, {Rational(1)});
        ScanOptions sopt;
        sopt.random_models = 6;
        sopt.seed = opt.seed;
        os << scan_report_csv(criterion_scan(pair, eq, sopt)) << "|";

        auto fam = sample_arcs(2, 2, 2, 25, opt.seed);
        for (auto& rho : fam.arcs) os << arc_to_json(rho).dump();
        os << "|";
        RngStream rng(opt.seed, 77);
        PotentialP1 phi(1, random_unimodular(2, rng));
        os << functionals_p1(phi.to_potential(), 1, 1, Rational(1),
                             QuadratureGrid::log_grid(256, 256), opt.jobs)
                  .e;
        return os.str();
    };
    std::string first = run_once(), second = run_once();
    r.pass = first == second;
    r.value = r.pass ? "reproduced" : "divergence";
    return r;
}

}  // namespace checks

inline std::vector<CheckResult> run_all_checks(const CheckOptions& opt) {
    std::vector<CheckResult> out;
    out.push_back(checks::intersection_quadric(opt));
    out.push_back(checks::mixed_volume_diagonal(opt));
    out.push_back(checks::model_energy_oracle(opt));
    out.push_back(checks::change_of_metric(opt));
    out.push_back(checks::pairing_symmetry(opt));
    out.push_back(checks::slope_theorem(opt));
    out.push_back(checks::lognorm_offsets(opt));
    out.push_back(checks::pair_weight_bridge(opt));
    out.push_back(checks::arc_norm_nonnegativity(opt));
    out.push_back(checks::curve_semistability(opt));
    out.push_back(checks::c0_audit(opt));
    out.push_back(checks::determinism_probe(opt));
    return out;
}

inline Json checks_report_json(const std::vector<CheckResult>& results,
                               const CheckOptions& opt) {
    Json j;
    j["scenario"] = "verify-all";
    j["seed"] = opt.seed;
    j["jobs"] = opt.jobs;
    Json arr = Json::array();
    bool all = true;
    for (auto& c : results) {
        Json row;
        row["name"] = c.name;
        row["status"] = c.pass ? "pass" : "fail";
        row["value"] = c.value;
        row["tolerance"] = c.tolerance;
        row["detail"] = c.detail;
        arr.push_back(row);
        all = all && c.pass;
    }
    j["checks"] = arr;
    j["overall"] = all ? "pass" : "fail";
    return j;
}

inline std::string checks_report_csv(const std::vector<CheckResult>& results) {
    std::ostringstream os;
    os << "name,status,value,tolerance\n";
    for (auto& c : results) {
        auto quote = [](std::string s) {
            for (auto& ch : s)
                if (ch == ',') ch = ';';
            return s;
        };
        os << c.name << "," << (c.pass ? "pass" : "fail") << "," << quote(c.value) << ","
           << quote(c.tolerance) << "\n";
    }
    return os.str();
}

}  // namespace isk
