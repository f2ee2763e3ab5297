// Command-line driver: binds the polytope, metric, resultant and arc layers
// into reproducible verification scenarios with JSON configs and reports.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "isk/checks.hpp"
#include "isk/config.hpp"
#include "isk/chow_norm.hpp"
#include "isk/json_io.hpp"
#include "isk/slope.hpp"

using namespace isk;
namespace fs = std::filesystem;

namespace {

struct Output {
    fs::path dir;
    std::ostringstream timing;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit Output(const std::string& out_dir) : dir(out_dir) { fs::create_directories(dir); }

    void stamp(const std::string& step) {
        auto now = std::chrono::steady_clock::now();
        double sec = std::chrono::duration<double>(now - t0).count();
        timing << step << " " << sec << "s\n";
    }
    void finish() { write_text_file((dir / "timings.txt").string(), timing.str()); }
};

int run_toric_na(const Scenario& s, Output& out, int jobs) {
    if (!s.has_toric) throw ConfigError("toric na needs geometry.type == 'toric'");
    ToricPair pair(*s.P_L, *s.P_H);
    EquationSpec eq(s.n, s.c);
    ScanOptions opt;
    opt.epsilon = s.epsilon;
    opt.c_fractions = s.c_fractions;
    opt.random_models = s.random_models;
    opt.seed = s.random_models > 0 ? s.require_seed("the random model family") : 0;
    opt.jobs = jobs;

    auto inter = intersection_numbers(pair);
    ScanReport report = criterion_scan(pair, eq, opt);
    out.stamp("scan");

    Json rj;
    rj["scenario"] = s.name;
    rj["check"] = "nonnegative stability margins over the scanned degenerations";
    Json ij = Json::array();
    for (auto& x : inter) ij.push_back(rational_to_json(x));
    rj["intersection_numbers"] = ij;
    rj["C"] = rational_to_json(eq.constant(pair));
    rj["epsilon"] = rational_to_json(opt.epsilon);
    rj["models"] = report.rows.size();
    rj["min_margin"] = rat_str(report.min_margin);
    rj["argmin"] = report.argmin_id;
    rj["violation"] = report.violation;
    write_text_file((out.dir / "report.json").string(), rj.dump(2) + "\n");
    write_text_file((out.dir / "scan.csv").string(), scan_report_csv(report));
    std::cout << (report.violation ? "violation " : "ok ") << "min margin "
              << rat_str(report.min_margin) << " at " << report.argmin_id << "\n";
    return report.violation ? 1 : 0;
}

std::vector<std::pair<std::string, Mat<Complex>>> group_elements(int size, std::uint64_t seed) {
    std::vector<std::pair<std::string, Mat<Complex>>> out;
    Mat<Complex> d = Mat<Complex>::identity(size);
    d(0, 0) = 2.0;
    d(size - 1, size - 1) = 0.5;
    out.push_back({"diag2", d});
    Mat<Complex> sh = Mat<Complex>::identity(size);
    sh(0, size - 1) = 1.0;
    out.push_back({"shear", sh});
    for (int k = 0; k < 2; ++k) {
        RngStream rng(seed, 1000 + k);
        out.push_back({"rand" + std::to_string(k), random_unimodular(size, rng)});
    }
    return out;
}

int run_p1_functionals(const Scenario& s, Output& out, int jobs) {
    if (!s.has_p1) throw ConfigError("p1 functionals needs geometry.type == 'p1'");
    std::uint64_t seed = s.require_seed("the random group elements");
    Rational c1 = s.c.empty() ? Rational(1) : s.c[0];
    QuadratureGrid fine = QuadratureGrid::log_grid(s.grid_radial, s.grid_angular);
    QuadratureGrid half = QuadratureGrid::log_grid(s.grid_radial / 2, s.grid_angular / 2);

    Json rows = Json::array();
    bool ok = true;
    for (auto& [id, g] : group_elements(s.m * s.a + 1, seed)) {
        PotentialP1 phi(s.m, g);
        FunctionalsResult v = functionals_p1(phi.to_potential(), s.a, s.b, c1, fine, jobs);
        FunctionalsResult w = functionals_p1(phi.to_potential(), s.a, s.b, c1, half, jobs);
        auto row = [&](const char* name, double val, double est) {
            Json r;
            r["element"] = id;
            r["functional"] = name;
            r["value"] = val;
            Json gj;
            gj["Nr"] = fine.n_radial;
            gj["Na"] = fine.n_angular;
            r["grid"] = gj;
            r["est_error"] = est;
            rows.push_back(r);
        };
        row("E", v.e, std::abs(v.e - w.e));
        row("J", v.j, std::abs(v.j - w.j));
        row("Jchi", v.j_chi_c, std::abs(v.j_chi_c - w.j_chi_c));
        ok = ok && v.j >= -1e-9;  // the J functional is a nonnegative energy
    }
    out.stamp("functionals");
    Json rj;
    rj["scenario"] = s.name;
    rj["check"] = "J functional nonnegative over the element family";
    rj["rows"] = rows;
    rj["status"] = ok ? "pass" : "fail";
    write_text_file((out.dir / "functionals.json").string(), rj.dump(2) + "\n");
    std::cout << (ok ? "ok" : "fail") << " " << rows.size() << " functional values\n";
    return ok ? 0 : 1;
}

int run_p1_slope(const Scenario& s, Output& out, int jobs) {
    if (!s.has_p1) throw ConfigError("p1 slope needs geometry.type == 'p1'");
    auto fam = monomial_arcs(s.m * s.a + 1, s.valuation_bound);
    Rational c1 = s.c.empty() ? Rational(1) : s.c[0];

    std::ostringstream values, fits;
    values << "arc_id,functional,j,abs_z,value\n";
    fits << "arc_id,functional,slope,intercept,residual,toric_value,abs_error\n";
    bool ok = true;
    for (size_t i = 0; i < fam.arcs.size(); ++i) {
        ArcToricModel model = arc_to_toric(fam.arcs[i], s.m, s.a);
        ToricPair tp(model.f.base(), model.f.base());
        EquationSpec eq(1, {c1});
        auto na = na_J_functionals(tp, model.f, eq);
        double e_expect = to_double(na.e_na + model.energy_shift);
        double j_expect = to_double(na.j_na);
        for (auto kind : {FunctionalKind::Energy, FunctionalKind::J}) {
            SlopeFit fit = slope_fit(kind, fam.arcs[i], s.m, s.a, s.b, c1, s.j_min, s.j_max, 0,
                                     s.grid_angular, jobs);
            double expect = kind == FunctionalKind::Energy ? e_expect : j_expect;
            for (auto& row : fit.rows)
                values << fam.ids[i] << "," << functional_name(kind) << "," << row.j << ","
                       << row.abs_z << "," << row.value << "\n";
            double err = std::abs(fit.slope - expect);
            fits << fam.ids[i] << "," << functional_name(kind) << "," << fit.slope << ","
                 << fit.intercept << "," << fit.residual << "," << expect << "," << err << "\n";
            ok = ok && err <= std::max(0.01 * std::abs(expect), 2e-3) && !fit.overflow_warning;
        }
    }
    out.stamp("slopes");
    write_text_file((out.dir / "slope_values.csv").string(), values.str());
    write_text_file((out.dir / "slope_fits.csv").string(), fits.str());
    std::cout << (ok ? "ok" : "fail") << " " << fam.arcs.size() << " arcs fitted\n";
    return ok ? 0 : 1;
}

int run_chow_lognorm(const Scenario& s, Output& out, int jobs) {
    if (!s.has_p1) throw ConfigError("chow lognorm needs geometry.type == 'p1'");
    std::uint64_t seed = s.require_seed("Monte Carlo sampling");
    MCConfig mc;
    mc.samples = s.mc_samples;
    mc.seed = seed;
    mc.jobs = jobs;
    Rational c1 = s.c.empty() ? Rational(1) : s.c[0];
    QuadratureGrid grid = QuadratureGrid::log_grid(s.grid_radial, s.grid_angular);

    Json rows = Json::array();
    std::vector<LognormResult> results;
    for (auto& [id, g] : group_elements(s.m * s.a + 1, seed)) {
        LognormResult res = lognorm_J(s.a, s.b, s.m, c1, g, mc, grid, jobs);
        Json r;
        Json spec;
        spec["a"] = s.a;
        spec["b"] = s.b;
        spec["m"] = s.m;
        r["spec"] = spec;
        r["sigma_id"] = id;
        r["lhs"] = res.lhs;
        r["rhs"] = res.rhs;
        r["offset"] = res.offset;
        r["se"] = res.se;
        r["samples"] = res.samples;
        r["seed"] = res.seed;
        rows.push_back(r);
        results.push_back(res);
    }
    out.stamp("lognorm");
    bool ok = true;
    for (size_t i = 0; i < results.size(); ++i)
        for (size_t k = i + 1; k < results.size(); ++k) {
            double gap = std::abs(results[i].offset - results[k].offset);
            ok = ok && gap < 3.0 * std::hypot(results[i].se, results[k].se);
        }
    Json rj;
    rj["scenario"] = s.name;
    rj["check"] = "offset between the functional and the log-norm difference is "
                  "constant across group elements";
    rj["rows"] = rows;
    rj["status"] = ok ? "pass" : "fail";
    write_text_file((out.dir / "lognorm.json").string(), rj.dump(2) + "\n");
    std::cout << (ok ? "ok" : "fail") << " " << rows.size() << " group elements\n";
    return ok ? 0 : 1;
}

int run_pairs_scan(const Scenario& s, Output& out, int jobs) {
    (void)jobs;
    if (!s.has_p1) throw ConfigError("pairs scan needs geometry.type == 'p1'");
    std::uint64_t seed = s.require_seed("arc sampling");
    PairVectors pair = PairVectors::application(s.m, s.a, s.b);
    auto fam = sample_arcs(s.m * s.a + 1, s.valuation_bound, s.t_degree_bound, s.count, seed);

    std::ostringstream csv;
    csv << "arc_id,nu,norm,epsilon,margin\n";
    bool ok = true;
    std::optional<Rational> min_margin, eps_max;
    std::string argmin;
    for (size_t i = 0; i < fam.arcs.size(); ++i) {
        StabilityVerdict v = check_pair(pair, fam.arcs[i], s.epsilon, fam.ids[i]);
        csv << v.arc_id << "," << v.nu << "," << v.norm << "," << rat_str(v.epsilon) << ","
            << rat_str(v.margin) << "\n";
        if (!min_margin || v.margin < *min_margin) {
            min_margin = v.margin;
            argmin = v.arc_id;
        }
        if (v.norm > v.nu) {
            Rational cap = Rational(v.nu) / Rational(v.norm - v.nu);
            if (!eps_max || cap < *eps_max) eps_max = cap;
        }
        ok = ok && v.margin >= 0;
    }
    out.stamp("pairs");
    write_text_file((out.dir / "verdicts.csv").string(), csv.str());
    Json rj;
    rj["scenario"] = s.name;
    rj["check"] = "stability margins nonnegative over the sampled arc family";
    rj["arcs"] = fam.arcs.size();
    rj["epsilon"] = rational_to_json(s.epsilon);
    rj["min_margin"] = min_margin ? rat_str(*min_margin) : "none";
    rj["argmin"] = argmin;
    rj["eps_max_consistent"] = eps_max ? rat_str(*eps_max) : "unbounded";
    rj["status"] = ok ? "pass" : "fail";
    write_text_file((out.dir / "report.json").string(), rj.dump(2) + "\n");
    std::cout << (ok ? "ok" : "fail") << " min margin "
              << (min_margin ? rat_str(*min_margin) : "none") << "\n";
    return ok ? 0 : 1;
}

int run_verify_all(const Scenario& s, Output& out, int jobs) {
    CheckOptions opt;
    opt.seed = s.require_seed("the verification suite");
    opt.jobs = jobs;
    auto results = run_all_checks(opt);
    out.stamp("checks");
    bool all = true;
    for (auto& c : results) {
        std::cout << (c.pass ? "pass  " : "FAIL  ") << c.name << "  [" << c.value << "]\n";
        all = all && c.pass;
    }
    write_text_file((out.dir / "report.json").string(),
                    checks_report_json(results, opt).dump(2) + "\n");
    write_text_file((out.dir / "report.csv").string(), checks_report_csv(results));
    std::cout << (all ? "all checks passed" : "some checks FAILED") << "\n";
    return all ? 0 : 1;
}

void describe(const std::string& topic) {
    std::map<std::string, std::string> table = {
        {"toric na",
         "Computes the intersection-number functionals of polarised toric degenerations:\n"
         "  E^na from the volume of the compactified total polytope,\n"
         "  J^na and J^na_{H,c} from mixed volumes against the twisting polytope,\n"
         "and sweeps deformations to normal cones of invariant faces plus a seeded\n"
         "family of concave piecewise-linear functions, reporting the margin\n"
         "J^na_{H,c} - epsilon J^na per model.  Flags any negative margin."},
        {"p1 functionals",
         "Evaluates the energy E, the J functional and the twisted functional\n"
         "J_{chi,c} of Fubini-Study group potentials on the line by quadrature,\n"
         "with grid-refinement error estimates.  Checks J >= 0."},
        {"p1 slope",
         "Fits the growth rate of E and J along monomial arc rays |z| = 2^-j and\n"
         "compares each fitted slope with the exact intersection-number value of\n"
         "the induced toric model (matching within one percent is the check)."},
        {"chow lognorm",
         "Estimates Fubini-Study averages of log|resultant|^2 over the dual\n"
         "coefficient spheres by seeded Monte Carlo with common random numbers,\n"
         "and compares the twisted functional of each group move against the\n"
         "log-norm difference of the moved resultant vectors.  The gap must be\n"
         "constant across moves within three combined standard errors."},
        {"pairs scan",
         "Applies sampled determinant-one Laurent arcs to the resultant pair of\n"
         "the polarised line, computing the valuation weight nu, the arc norm and\n"
         "the stability margin nu - eps/(1+eps) * norm exactly.  All margins must\n"
         "be nonnegative at the configured epsilon."},
        {"verify all",
         "Runs the full twelve-point verification suite: exact intersection\n"
         "numbers, mixed-volume identities, degeneration energies against the\n"
         "blowup oracle, the change-of-metric identity, pairing symmetry, slope\n"
         "matching, log-norm offsets, weight bridges, arc-norm positivity,\n"
         "curve semistability, the uniform-bound audit and a determinism probe.\n"
         "Writes report.json and report.csv; exit status zero iff all pass."},
    };
    if (table.count(topic)) {
        std::cout << topic << "\n" << table.at(topic) << "\n";
        return;
    }
    for (auto& [k, v] : table) std::cout << k << "\n" << v << "\n\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification toolkit for inverse sigma_k energy functionals"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    int jobs = 2;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config (JSON)")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed_override, "override the config seed");
        cmd->add_option("--jobs", jobs, "worker threads");
    };

    CLI::App* toric = app.add_subcommand("toric", "toric degeneration functionals");
    CLI::App* toric_na = toric->add_subcommand("na", "intersection-number functionals and scan");
    add_common(toric_na);

    CLI::App* p1 = app.add_subcommand("p1", "analytic functionals on the line");
    CLI::App* p1_fun = p1->add_subcommand("functionals", "E, J, J_{chi,c} by quadrature");
    add_common(p1_fun);
    CLI::App* p1_slope = p1->add_subcommand("slope", "slopes along arc rays vs toric values");
    add_common(p1_slope);

    CLI::App* chow = app.add_subcommand("chow", "resultant vectors and norms");
    CLI::App* chow_lognorm = chow->add_subcommand("lognorm", "log-norm expression of J_{chi,c}");
    add_common(chow_lognorm);

    CLI::App* pairs = app.add_subcommand("pairs", "stability of resultant pairs");
    CLI::App* pairs_scan = pairs->add_subcommand("scan", "margins over sampled arcs");
    add_common(pairs_scan);

    CLI::App* verify = app.add_subcommand("verify", "verification suites");
    CLI::App* verify_all = verify->add_subcommand("all", "the full acceptance suite");
    add_common(verify_all);

    std::string describe_topic;
    CLI::App* desc = app.add_subcommand("describe", "explain what each command verifies");
    desc->add_option("topic", describe_topic, "subcommand, e.g. 'chow lognorm'");

    CLI11_PARSE(app, argc, argv);

    if (desc->parsed()) {
        describe(describe_topic);
        return 0;
    }

    try {
        Scenario s = scenario_from_file(config_path);
        if (seed_override) s.seed = *seed_override;
        Output out(out_dir);
        int rc = 2;
        if (toric_na->parsed()) rc = run_toric_na(s, out, jobs);
        else if (p1_fun->parsed()) rc = run_p1_functionals(s, out, jobs);
        else if (p1_slope->parsed()) rc = run_p1_slope(s, out, jobs);
        else if (chow_lognorm->parsed()) rc = run_chow_lognorm(s, out, jobs);
        else if (pairs_scan->parsed()) rc = run_pairs_scan(s, out, jobs);
        else if (verify_all->parsed()) rc = run_verify_all(s, out, jobs);
        out.finish();
        return rc;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
