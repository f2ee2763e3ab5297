#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "isk/arcs.hpp"
#include "isk/multipoly.hpp"
#include "isk/polytope.hpp"
#include "isk/toric.hpp"

namespace isk {

using Json = nlohmann::ordered_json;

inline Json rational_to_json(const Rational& r) {
    if (rat_den(r) == 1) return Json(rat_num(r).convert_to<long long>());
    return Json(rat_str(r));
}

inline Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return rat_parse(j.get<std::string>());
    throw std::invalid_argument("rational_from_json: expected integer or \"p/q\" string");
}

inline Json polytope_to_json(const RationalPolytope& p) {
    Json j;
    j["dim"] = p.ambient_dim();
    Json verts = Json::array();
    for (auto& v : p.vertices()) {
        Json row = Json::array();
        for (auto& x : v) row.push_back(rational_to_json(x));
        verts.push_back(row);
    }
    j["vertices"] = verts;
    return j;
}

inline RationalPolytope polytope_from_json(const Json& j) {
    int dim = j.at("dim").get<int>();
    std::vector<VecQ> pts;
    for (auto& row : j.at("vertices")) {
        VecQ v;
        for (auto& x : row) v.push_back(rational_from_json(x));
        pts.push_back(std::move(v));
    }
    return RationalPolytope::from_points(dim, std::move(pts));
}

inline Json pl_concave_to_json(const PLConcave& f) {
    Json j;
    j["base"] = polytope_to_json(f.base());
    Json pieces = Json::array();
    for (auto& p : f.pieces()) {
        Json piece;
        Json grad = Json::array();
        for (auto& g : p.grad) grad.push_back(rational_to_json(g));
        piece["grad"] = grad;
        piece["const"] = rational_to_json(p.constant);
        pieces.push_back(piece);
    }
    j["pieces"] = pieces;
    return j;
}

inline PLConcave pl_concave_from_json(const Json& j) {
    RationalPolytope base = polytope_from_json(j.at("base"));
    std::vector<AffinePiece> pieces;
    for (auto& p : j.at("pieces")) {
        VecQ grad;
        for (auto& g : p.at("grad")) grad.push_back(rational_from_json(g));
        pieces.push_back(AffinePiece{std::move(grad), rational_from_json(p.at("const"))});
    }
    return PLConcave(std::move(base), std::move(pieces));
}

inline Json laurent_to_json(const LaurentQ& p) {
    Json terms = Json::array();
    for (auto& [e, c] : p.terms()) {
        Json t;
        t["exp"] = e;
        t["num"] = rat_num(c).convert_to<long long>();
        t["den"] = rat_den(c).convert_to<long long>();
        terms.push_back(t);
    }
    return terms;
}

inline LaurentQ laurent_from_json(const Json& j) {
    LaurentQ p;
    for (auto& t : j) {
        Rational c(Integer(t.at("num").get<long long>()), Integer(t.at("den").get<long long>()));
        p.set(t.at("exp").get<std::int64_t>(), p.coefficient(t.at("exp").get<std::int64_t>()) + c);
    }
    return p;
}

inline Json arc_to_json(const ArcMatrix& rho) {
    Json j;
    j["q"] = rho.size();
    Json rows = Json::array();
    for (int r = 0; r < rho.size(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < rho.size(); ++c) row.push_back(laurent_to_json(rho.entries()(r, c)));
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j;
}

inline ArcMatrix arc_from_json(const Json& j) {
    int q = j.at("q").get<int>();
    Mat<LaurentQ> m(q, q);
    const Json& rows = j.at("entries");
    if (static_cast<int>(rows.size()) != q) throw std::invalid_argument("arc_from_json: row count");
    for (int r = 0; r < q; ++r) {
        if (static_cast<int>(rows[r].size()) != q)
            throw std::invalid_argument("arc_from_json: column count");
        for (int c = 0; c < q; ++c) m(r, c) = laurent_from_json(rows[r][c]);
    }
    return ArcMatrix(std::move(m));
}

inline Json multipoly_to_json(const MultiPolyQ& p) {
    Json j;
    j["vars"] = p.vars();
    Json terms = Json::array();
    for (auto& [e, c] : p.terms()) {
        Json t;
        t["exp"] = e;
        t["num"] = rat_num(c).convert_to<long long>();
        t["den"] = rat_den(c).convert_to<long long>();
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j;
}

inline MultiPolyQ multipoly_from_json(const Json& j) {
    std::vector<std::string> vars = j.at("vars").get<std::vector<std::string>>();
    MultiPolyQ p(vars);
    for (auto& t : j.at("terms")) {
        std::vector<int> e = t.at("exp").get<std::vector<int>>();
        Rational c(Integer(t.at("num").get<long long>()), Integer(t.at("den").get<long long>()));
        p.add_term(e, c);
    }
    return p;
}

inline std::string scan_report_csv(const ScanReport& report) {
    std::ostringstream os;
    os << "model_id,c,E_na,J_na,J_na_Hc,margin\n";
    for (auto& row : report.rows)
        os << row.model_id << "," << rat_str(row.c) << "," << rat_str(row.values.e_na) << ","
           << rat_str(row.values.j_na) << "," << rat_str(row.values.j_na_hc) << ","
           << rat_str(row.margin) << "\n";
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace isk
