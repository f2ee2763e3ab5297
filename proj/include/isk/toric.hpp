#pragma once

#include <atomic>
#include <functional>
#include <future>
#include <map>
#include <string>
#include <vector>

#include "isk/polytope.hpp"
#include "isk/rng.hpp"

namespace isk {

/**
 * Mixed volume of m polytopes in ambient dimension m, normalised so that
 * MV(K,...,K) = m! vol(K). Inclusion-exclusion over Minkowski sums of
 * subsets; repeated arguments collapse to dilations.
 */
inline Rational mixed_volume(const std::vector<RationalPolytope>& ks) {
    const int m = static_cast<int>(ks.size());
    if (m == 0) throw std::invalid_argument("mixed_volume: no arguments");
    for (auto& k : ks)
        if (k.ambient_dim() != m)
            throw std::invalid_argument("mixed_volume: ambient dimension must equal argument count");

    std::vector<RationalPolytope> uniq;
    std::vector<int> mult;
    for (auto& k : ks) {
        bool found = false;
        for (size_t j = 0; j < uniq.size(); ++j)
            if (uniq[j] == k) {
                ++mult[j];
                found = true;
                break;
            }
        if (!found) {
            uniq.push_back(k);
            mult.push_back(1);
        }
    }

    const int g = static_cast<int>(uniq.size());
    std::vector<int> kv(g, 0);
    Rational total(0);
    while (true) {
        // advance odometer
        int pos = 0;
        while (pos < g) {
            if (kv[pos] < mult[pos]) {
                ++kv[pos];
                std::fill(kv.begin(), kv.begin() + pos, 0);
                break;
            }
            ++pos;
        }
        if (pos == g) break;

        int s = 0;
        Integer comb(1);
        for (int j = 0; j < g; ++j) {
            s += kv[j];
            comb *= int_binomial(mult[j], kv[j]);
        }
        RationalPolytope sum;
        bool first = true;
        for (int j = 0; j < g; ++j) {
            if (kv[j] == 0) continue;
            RationalPolytope part = (kv[j] == 1) ? uniq[j] : uniq[j].dilated(Rational(kv[j]));
            sum = first ? part : minkowski_sum(sum, part);
            first = false;
        }
        Rational term = Rational(comb) * sum.volume();
        if ((m - s) % 2 == 0)
            total += term;
        else
            total -= term;
    }
    return total;
}

/// Moment polytopes of an ample pair (L, H) on a toric n-fold.
struct ToricPair {
    RationalPolytope P_L, P_H;

    ToricPair(RationalPolytope pl, RationalPolytope ph) : P_L(std::move(pl)), P_H(std::move(ph)) {
        if (P_L.ambient_dim() != P_H.ambient_dim())
            throw std::invalid_argument("ToricPair: ambient dimension mismatch");
        if (!P_L.full_dimensional() || !P_H.full_dimensional())
            throw std::invalid_argument("ToricPair: polytopes must be full-dimensional");
    }

    int dim() const { return P_L.ambient_dim(); }
};

/// All (H^i . L^{n-i}), i = 0..n.
inline std::vector<Rational> intersection_numbers(const ToricPair& pair) {
    const int n = pair.dim();
    std::vector<Rational> out;
    for (int i = 0; i <= n; ++i) {
        std::vector<RationalPolytope> args;
        for (int k = 0; k < i; ++k) args.push_back(pair.P_H);
        for (int k = 0; k < n - i; ++k) args.push_back(pair.P_L);
        out.push_back(mixed_volume(args));
    }
    return out;
}

/// Coefficients c_1..c_n of the equation sum_i c_i chi^i w^{n-i} = C w^n.
struct EquationSpec {
    int n;
    std::vector<Rational> c;  // c[k] = c_{k+1}

    EquationSpec(int n_, std::vector<Rational> c_) : n(n_), c(std::move(c_)) {
        if (static_cast<int>(c.size()) != n) throw std::invalid_argument("EquationSpec: need n coefficients");
        bool positive = false;
        for (auto& x : c) {
            if (x < 0) throw std::invalid_argument("EquationSpec: coefficients must be nonnegative");
            if (x > 0) positive = true;
        }
        if (!positive) throw std::invalid_argument("EquationSpec: at least one coefficient must be positive");
    }

    Rational constant(const ToricPair& pair) const {
        auto inter = intersection_numbers(pair);
        Rational num(0);
        for (int i = 1; i <= n; ++i) num += c[i - 1] * inter[i];
        return num / inter[0];
    }
};

struct AffinePiece {
    VecQ grad;
    Rational constant;

    Rational eval(const VecQ& x) const { return dot(grad, x) + constant; }
};

/**
 * Concave piecewise-linear function on a polytope, the pointwise minimum of
 * finitely many affine pieces. Encodes a polarised degeneration over the disc
 * through its compactified total polytope.
 */
class PLConcave {
  public:
    PLConcave(RationalPolytope base, std::vector<AffinePiece> pieces)
        : base_(std::move(base)), pieces_(std::move(pieces)) {
        if (pieces_.empty()) throw std::invalid_argument("PLConcave: need at least one piece");
        for (auto& p : pieces_)
            if (static_cast<int>(p.grad.size()) != base_.ambient_dim())
                throw std::invalid_argument("PLConcave: gradient dimension mismatch");
        // concave => the minimum over the base is attained at a vertex
        for (auto& v : base_.vertices())
            if (eval(v) < 0) throw std::invalid_argument("PLConcave: negative on the base polytope");
    }

    static PLConcave constant(const RationalPolytope& base, const Rational& c) {
        return PLConcave(base, {AffinePiece{VecQ(base.ambient_dim(), Rational(0)), c}});
    }

    const RationalPolytope& base() const { return base_; }
    const std::vector<AffinePiece>& pieces() const { return pieces_; }

    Rational eval(const VecQ& x) const {
        Rational m = pieces_[0].eval(x);
        for (size_t i = 1; i < pieces_.size(); ++i) m = std::min(m, pieces_[i].eval(x));
        return m;
    }

    Rational min_on_base() const {
        Rational m = eval(base_.vertices()[0]);
        for (auto& v : base_.vertices()) m = std::min(m, eval(v));
        return m;
    }

    PLConcave shifted(const Rational& k) const {
        std::vector<AffinePiece> ps = pieces_;
        for (auto& p : ps) p.constant += k;
        return PLConcave(base_, std::move(ps));
    }

  private:
    RationalPolytope base_;
    std::vector<AffinePiece> pieces_;
};

/// Q = { (x, t) : x in P, 0 <= t <= f(x) } in dimension n+1.
inline RationalPolytope model_total_polytope(const RationalPolytope& P, const PLConcave& f) {
    if (!(f.base() == P)) throw std::invalid_argument("model_total_polytope: base mismatch");
    const int n = P.ambient_dim();
    if (f.min_on_base() < 0) throw std::domain_error("model_total_polytope: f negative on P");
    std::vector<HalfSpace> hs;
    for (auto& h : P.facets()) {
        std::vector<Integer> nrm = h.normal;
        nrm.push_back(Integer(0));
        hs.push_back(HalfSpace{std::move(nrm), h.offset});
    }
    {
        VecQ down(n + 1, Rational(0));
        down[n] = Rational(-1);
        hs.push_back(halfspace(down, Rational(0)));  // t >= 0
    }
    for (auto& piece : f.pieces()) {
        VecQ nrm(n + 1);
        for (int i = 0; i < n; ++i) nrm[i] = -piece.grad[i];
        nrm[n] = Rational(1);
        hs.push_back(halfspace(nrm, piece.constant));  // t <= <grad,x> + const
    }
    auto verts = vertices_from_halfspaces(hs, n + 1);
    if (verts.empty()) throw std::logic_error("model_total_polytope: empty polytope");
    return RationalPolytope::from_points(n + 1, std::move(verts));
}

/// P embedded at height zero in dimension n+1.
inline RationalPolytope embed_at_height_zero(const RationalPolytope& P) {
    std::vector<VecQ> pts;
    for (auto& v : P.vertices()) {
        VecQ w = v;
        w.push_back(Rational(0));
        pts.push_back(std::move(w));
    }
    return RationalPolytope::from_points(P.ambient_dim() + 1, std::move(pts));
}

/// Monge-Ampere energy of the model: (W^{n+1}) / (V (n+1)) = n! vol(Q) / V.
inline Rational na_energy(const RationalPolytope& P_L, const PLConcave& f) {
    const int n = P_L.ambient_dim();
    Rational V = Rational(int_factorial(n)) * P_L.volume();
    RationalPolytope Q = model_total_polytope(P_L, f);
    return Rational(int_factorial(n)) * Q.volume() / V;
}

/// (H^j . W^{n+1-j}) as a mixed volume in dimension n+1.
inline Rational na_mixed(const RationalPolytope& P_L, const RationalPolytope& P_H,
                         const PLConcave& f, int j) {
    const int n = P_L.ambient_dim();
    if (j < 1 || j > n) throw std::invalid_argument("na_mixed: need 1 <= j <= n");
    RationalPolytope Q = model_total_polytope(P_L, f);
    RationalPolytope H0 = embed_at_height_zero(P_H);
    std::vector<RationalPolytope> args;
    for (int k = 0; k < j; ++k) args.push_back(H0);
    for (int k = 0; k < n + 1 - j; ++k) args.push_back(Q);
    return mixed_volume(args);
}

struct NaFunctionals {
    Rational e_na;      // E^na
    Rational j_na;      // J^na
    Rational j_na_hc;   // J^na_{H,c}
};

inline NaFunctionals na_J_functionals(const ToricPair& pair, const PLConcave& f,
                                      const EquationSpec& eq) {
    const int n = pair.dim();
    if (eq.n != n) throw std::invalid_argument("na_J_functionals: equation dimension mismatch");
    Rational V = Rational(int_factorial(n)) * pair.P_L.volume();
    RationalPolytope Q = model_total_polytope(pair.P_L, f);
    RationalPolytope L0 = embed_at_height_zero(pair.P_L);
    RationalPolytope H0 = embed_at_height_zero(pair.P_H);

    auto mixed_with = [&](const RationalPolytope& A, int j) {
        std::vector<RationalPolytope> args;
        for (int k = 0; k < j; ++k) args.push_back(A);
        for (int k = 0; k < n + 1 - j; ++k) args.push_back(Q);
        return mixed_volume(args);
    };

    NaFunctionals out;
    out.e_na = Rational(int_factorial(n)) * Q.volume() / V;
    out.j_na = mixed_with(L0, n) / V - out.e_na;
    Rational acc(0);
    for (int j = 1; j <= n; ++j) {
        if (eq.c[j - 1] == 0) continue;
        acc += eq.c[j - 1] / Rational(n + 1 - j) * mixed_with(H0, j);
    }
    out.j_na_hc = acc / V - eq.constant(pair) * out.e_na;
    return out;
}

/**
 * Deformation to the normal cone of a torus-invariant face: f = min(c, l_F)
 * where l_F is the minimum of the primitive facet functions containing the
 * face (lattice distance for a facet).
 */
inline PLConcave deformation_to_normal_cone_face(const RationalPolytope& P,
                                                 const std::vector<HalfSpace>& containing_facets,
                                                 const Rational& c) {
    if (containing_facets.empty())
        throw std::invalid_argument("deformation_to_normal_cone: no facet functions");
    // l_F is concave; its maximum over vertices bounds the admissible range
    // from below, which is all the range check needs.
    Rational cmax(0);
    for (auto& v : P.vertices()) {
        Rational lv = containing_facets[0].offset - containing_facets[0].eval(v);
        for (auto& h : containing_facets) lv = std::min(lv, h.offset - h.eval(v));
        cmax = std::max(cmax, lv);
    }
    if (!(c > 0 && c < cmax)) throw std::domain_error("deformation_to_normal_cone: c out of range");
    std::vector<AffinePiece> pieces;
    pieces.push_back(AffinePiece{VecQ(P.ambient_dim(), Rational(0)), c});
    for (auto& h : containing_facets) {
        VecQ grad(P.ambient_dim());
        for (int i = 0; i < P.ambient_dim(); ++i) grad[i] = -Rational(h.normal[i]);
        pieces.push_back(AffinePiece{std::move(grad), h.offset});
    }
    return PLConcave(P, std::move(pieces));
}

inline PLConcave deformation_to_normal_cone(const ToricPair& pair, int facet_index,
                                            const Rational& c) {
    auto facets = pair.P_L.facets();
    if (facet_index < 0 || facet_index >= static_cast<int>(facets.size()))
        throw std::invalid_argument("deformation_to_normal_cone: facet index out of range");
    return deformation_to_normal_cone_face(pair.P_L, {facets[facet_index]}, c);
}

struct ScanRow {
    std::string model_id;
    Rational c;  // deformation parameter; 0 for random models
    NaFunctionals values;
    Rational margin;  // J^na_{H,c} - epsilon J^na
};

struct ScanReport {
    std::vector<ScanRow> rows;
    Rational min_margin;
    std::string argmin_id;
    bool violation = false;
};

struct ScanOptions {
    Rational epsilon = Rational(0);
    std::vector<Rational> c_fractions = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
    int random_models = 8;
    std::uint64_t seed = 1;
    int jobs = 1;
};

/**
 * Deterministic audit of J^na_{H,c} >= epsilon J^na over deformations to the
 * normal cones of all invariant faces plus a seeded family of random concave
 * PL functions. A heuristic sweep, not a decision procedure.
 */
inline ScanReport criterion_scan(const ToricPair& pair, const EquationSpec& eq,
                                 const ScanOptions& opt) {
    ScanReport report;
    std::vector<std::pair<std::string, PLConcave>> models;
    std::vector<Rational> cs;
    auto add_model = [&](const std::string& id, const Rational& c, PLConcave f) {
        models.emplace_back(id, std::move(f));
        cs.push_back(c);
    };

    auto facets = pair.P_L.facets();
    auto faces = proper_faces(pair.P_L);
    const auto& verts = pair.P_L.vertices();
    int face_idx = 0;
    for (auto& face : faces) {
        std::vector<HalfSpace> containing;
        for (auto& h : facets) {
            bool contains_face = true;
            for (int vi : face)
                if (h.eval(verts[vi]) != h.offset) {
                    contains_face = false;
                    break;
                }
            if (contains_face) containing.push_back(h);
        }
        Rational cmax(0);
        for (auto& v : verts) {
            Rational lv = containing[0].offset - containing[0].eval(v);
            for (auto& h : containing) lv = std::min(lv, h.offset - h.eval(v));
            cmax = std::max(cmax, lv);
        }
        for (auto& q : opt.c_fractions) {
            Rational c = q * cmax;
            if (!(c > 0 && c < cmax)) continue;
            add_model("face" + std::to_string(face_idx) + ":c=" + rat_str(c), c,
                      deformation_to_normal_cone_face(pair.P_L, containing, c));
        }
        ++face_idx;
    }

    const int n = pair.dim();
    for (int r = 0; r < opt.random_models; ++r) {
        RngStream rng(opt.seed, static_cast<std::uint64_t>(r) + 1);
        int npieces = 2 + static_cast<int>(rng.uniform_int(0, 1));
        std::vector<AffinePiece> pieces;
        for (int k = 0; k < npieces; ++k) {
            VecQ grad(n);
            for (auto& gcoef : grad)
                gcoef = Rational(rng.uniform_int(-2, 2), 1 + rng.uniform_int(0, 1));
            pieces.push_back(AffinePiece{std::move(grad), Rational(rng.uniform_int(-1, 2))});
        }
        // normalise to min 0 on the base so the data is a genuine model
        Rational mn;
        bool first = true;
        for (auto& v : verts) {
            Rational val = pieces[0].eval(v);
            for (auto& p : pieces) val = std::min(val, p.eval(v));
            mn = first ? val : std::min(mn, val);
            first = false;
        }
        for (auto& p : pieces) p.constant -= mn;
        add_model("rand" + std::to_string(r), Rational(0), PLConcave(pair.P_L, std::move(pieces)));
    }

    if (models.empty()) throw std::logic_error("criterion_scan: no models scanned");
    // exact evaluation per model, parallel over models, assembled in order
    report.rows.resize(models.size());
    auto eval_model = [&](size_t i) {
        ScanRow row;
        row.model_id = models[i].first;
        row.c = cs[i];
        row.values = na_J_functionals(pair, models[i].second, eq);
        row.margin = row.values.j_na_hc - opt.epsilon * row.values.j_na;
        report.rows[i] = std::move(row);
    };
    if (opt.jobs <= 1) {
        for (size_t i = 0; i < models.size(); ++i) eval_model(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::future<void>> futs;
        for (int w = 0; w < opt.jobs; ++w)
            futs.push_back(std::async(std::launch::async, [&]() {
                for (size_t i = next.fetch_add(1); i < models.size(); i = next.fetch_add(1))
                    eval_model(i);
            }));
        for (auto& fu : futs) fu.get();
    }

    report.min_margin = report.rows[0].margin;
    report.argmin_id = report.rows[0].model_id;
    for (auto& row : report.rows)
        if (row.margin < report.min_margin) {
            report.min_margin = row.margin;
            report.argmin_id = row.model_id;
        }
    report.violation = report.min_margin < 0;
    return report;
}

}  // namespace isk
