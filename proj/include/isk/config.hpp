#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "isk/json_io.hpp"

namespace isk {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (auto& [key, val] : j.items())
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

/// A parsed verification scenario. Silent typos would invalidate the
/// verification claims, so unknown keys anywhere are a hard error.
struct Scenario {
    std::string name = "unnamed";
    // geometry
    bool has_p1 = false;
    int a = 1, b = 1, m = 1;
    bool has_toric = false;
    std::optional<RationalPolytope> P_L, P_H;
    // equation
    int n = 1;
    std::vector<Rational> c = {Rational(1)};
    // numeric
    int grid_radial = 512, grid_angular = 512;
    std::int64_t mc_samples = 100000;
    std::optional<std::uint64_t> seed;
    int j_min = 4, j_max = 12;
    // stability
    Rational epsilon = Rational(0);
    int valuation_bound = 2, t_degree_bound = 2, count = 200;
    // scan
    std::vector<Rational> c_fractions = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
    int random_models = 8;

    std::uint64_t require_seed(const std::string& what) const {
        if (!seed) throw ConfigError("a seed is required for " + what);
        return *seed;
    }
};

inline Scenario scenario_from_json(const Json& j) {
    reject_unknown_keys(j, {"schema_version", "scenario", "geometry", "equation", "numeric",
                            "stability", "scan"},
                        "top level");
    if (!j.contains("schema_version") || j["schema_version"] != 1)
        throw ConfigError("schema_version must be 1");

    Scenario s;
    if (j.contains("scenario")) s.name = j["scenario"].get<std::string>();
    if (j.contains("geometry")) {
        const Json& g = j["geometry"];
        std::string type = g.value("type", "");
        if (type == "p1") {
            reject_unknown_keys(g, {"type", "a", "b", "m"}, "geometry");
            s.has_p1 = true;
            s.a = g.value("a", 1);
            s.b = g.value("b", 1);
            s.m = g.value("m", 1);
            if (s.a < 1 || s.b < 1 || s.m < 1)
                throw ConfigError("geometry degrees must be positive");
        } else if (type == "toric") {
            reject_unknown_keys(g, {"type", "P_L", "P_H"}, "geometry");
            s.has_toric = true;
            s.P_L = polytope_from_json(g.at("P_L"));
            s.P_H = polytope_from_json(g.at("P_H"));
        } else {
            throw ConfigError("geometry.type must be 'p1' or 'toric'");
        }
    }
    if (j.contains("equation")) {
        const Json& e = j["equation"];
        reject_unknown_keys(e, {"n", "c"}, "equation");
        s.n = e.at("n").get<int>();
        s.c.clear();
        for (auto& x : e.at("c")) s.c.push_back(rational_from_json(x));
    }
    if (j.contains("numeric")) {
        const Json& n = j["numeric"];
        reject_unknown_keys(n, {"grid", "mc_samples", "seed", "z_ladder"}, "numeric");
        if (n.contains("grid")) {
            reject_unknown_keys(n["grid"], {"radial", "angular"}, "numeric.grid");
            s.grid_radial = n["grid"].value("radial", 512);
            s.grid_angular = n["grid"].value("angular", 512);
        }
        if (n.contains("mc_samples")) s.mc_samples = n["mc_samples"].get<std::int64_t>();
        if (n.contains("seed")) s.seed = n["seed"].get<std::uint64_t>();
        if (n.contains("z_ladder")) {
            reject_unknown_keys(n["z_ladder"], {"j_min", "j_max"}, "numeric.z_ladder");
            s.j_min = n["z_ladder"].value("j_min", 4);
            s.j_max = n["z_ladder"].value("j_max", 12);
        }
    }
    if (j.contains("stability")) {
        const Json& st = j["stability"];
        reject_unknown_keys(st, {"epsilon", "valuation_bound", "t_degree_bound", "count"},
                            "stability");
        if (st.contains("epsilon")) s.epsilon = rational_from_json(st["epsilon"]);
        s.valuation_bound = st.value("valuation_bound", 2);
        s.t_degree_bound = st.value("t_degree_bound", 2);
        s.count = st.value("count", 200);
    }
    if (j.contains("scan")) {
        const Json& sc = j["scan"];
        reject_unknown_keys(sc, {"c_fractions", "random_models"}, "scan");
        if (sc.contains("c_fractions")) {
            s.c_fractions.clear();
            for (auto& x : sc["c_fractions"]) s.c_fractions.push_back(rational_from_json(x));
        }
        s.random_models = sc.value("random_models", 8);
    }
    return s;
}

inline Scenario scenario_from_file(const std::string& path) {
    Json j;
    try {
        j = Json::parse(read_text_file(path));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config does not parse: ") + e.what());
    }
    return scenario_from_json(j);
}

}  // namespace isk
