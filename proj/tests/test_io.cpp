#include <catch2/catch_amalgamated.hpp>

#include "isk/config.hpp"
#include "isk/json_io.hpp"
#include "isk/rng.hpp"

using namespace isk;

TEST_CASE("rationals round-trip through json") {
    RngStream rng(64, 0);
    for (int i = 0; i < 30; ++i) {
        Rational r(rng.uniform_int(-50, 50), 1 + rng.uniform_int(0, 12));
        CHECK(rational_from_json(rational_to_json(r)) == r);
    }
    CHECK(rational_to_json(Rational(4)).is_number_integer());
    CHECK(rational_from_json(Json("3/4")) == Rational(3, 4));
}

TEST_CASE("polytopes round-trip and stay normalised") {
    auto p = RationalPolytope::from_points(
        2, {{Rational(0), Rational(0)}, {Rational(1), Rational(0)}, {Rational(0), Rational(1)},
            {Rational(1, 3), Rational(1, 3)}});
    auto q = polytope_from_json(polytope_to_json(p));
    CHECK(p == q);
}

TEST_CASE("pl functions round-trip") {
    auto base = RationalPolytope::from_points(1, {{Rational(0)}, {Rational(1)}});
    PLConcave f(base, {AffinePiece{{Rational(1)}, Rational(0)},
                       AffinePiece{{Rational(0)}, Rational(1, 2)}});
    auto g = pl_concave_from_json(pl_concave_to_json(f));
    CHECK(g.eval({Rational(1, 4)}) == f.eval({Rational(1, 4)}));
    CHECK(g.eval({Rational(3, 4)}) == f.eval({Rational(3, 4)}));
}

TEST_CASE("arcs round-trip") {
    auto fam = sample_arcs(3, 2, 2, 12, 5150);
    for (auto& rho : fam.arcs) {
        ArcMatrix back = arc_from_json(arc_to_json(rho));
        CHECK(back == rho);
    }
}

TEST_CASE("multivariate polynomials round-trip") {
    ChowVector R(ChowSpec{2, 1}, false);
    const MultiPolyQ& e = R.expansion();
    CHECK(multipoly_from_json(multipoly_to_json(e)) == e);
}

TEST_CASE("scan reports are stable text") {
    ToricPair pair(RationalPolytope::from_points(1, {{Rational(0)}, {Rational(1)}}),
                   RationalPolytope::from_points(1, {{Rational(0)}, {Rational(2)}}));
    EquationSpec eq(1, {Rational(1)});
    ScanOptions opt;
    opt.random_models = 2;
    opt.seed = 10;
    auto r1 = criterion_scan(pair, eq, opt);
    auto r2 = criterion_scan(pair, eq, opt);
    CHECK(scan_report_csv(r1) == scan_report_csv(r2));
    CHECK(scan_report_csv(r1).substr(0, 8) == "model_id");
}

TEST_CASE("scenario configs reject unknown keys and bad versions") {
    Json good = Json::parse(R"({"schema_version":1,"scenario":"t",
        "geometry":{"type":"p1","a":1,"b":1,"m":1},
        "numeric":{"seed":3}})");
    Scenario s = scenario_from_json(good);
    CHECK(s.has_p1);
    CHECK(s.require_seed("x") == 3);

    Json bad1 = good;
    bad1["extra"] = 1;
    CHECK_THROWS_AS(scenario_from_json(bad1), ConfigError);

    Json bad2 = good;
    bad2["geometry"]["typo"] = 1;
    CHECK_THROWS_AS(scenario_from_json(bad2), ConfigError);

    Json bad3 = good;
    bad3["schema_version"] = 2;
    CHECK_THROWS_AS(scenario_from_json(bad3), ConfigError);

    Json noseed = Json::parse(R"({"schema_version":1,
        "geometry":{"type":"p1","a":1,"b":1,"m":1}})");
    CHECK_THROWS_AS(scenario_from_json(noseed).require_seed("sampling"), ConfigError);
}
