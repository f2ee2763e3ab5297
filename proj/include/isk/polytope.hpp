#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "isk/rational.hpp"
#include "isk/smallmat.hpp"

namespace isk {

using VecQ = std::vector<Rational>;

inline Rational dot(const VecQ& a, const VecQ& b) {
    Rational s(0);
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
inline VecQ vec_sub(const VecQ& a, const VecQ& b) {
    VecQ r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}
inline VecQ vec_add(const VecQ& a, const VecQ& b) {
    VecQ r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}
inline VecQ vec_scale(const VecQ& a, const Rational& c) {
    VecQ r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
    return r;
}

inline Rational det_rational(Mat<Rational> a) {
    const int n = a.rows();
    Rational det(1);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (a(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) return Rational(0);
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            det = -det;
        }
        det *= a(col, col);
        for (int r = col + 1; r < n; ++r) {
            if (a(r, col) == 0) continue;
            Rational f = a(r, col) / a(col, col);
            for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
        }
    }
    return det;
}

/// Rank of the row span.
inline int rational_rank(std::vector<VecQ> rows) {
    if (rows.empty()) return 0;
    const size_t cols = rows[0].size();
    int rank = 0;
    size_t col = 0;
    for (size_t r = 0; r < rows.size() && col < cols; ++col) {
        size_t pivot = r;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[r], rows[pivot]);
        for (size_t rr = 0; rr < rows.size(); ++rr) {
            if (rr == r || rows[rr][col] == 0) continue;
            Rational f = rows[rr][col] / rows[r][col];
            for (size_t j = col; j < cols; ++j) rows[rr][j] -= f * rows[r][j];
        }
        ++r;
        ++rank;
    }
    return rank;
}

/// Unique solution of a square system, if the matrix is invertible.
inline std::optional<VecQ> solve_square(Mat<Rational> a, VecQ b) {
    const int n = a.rows();
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (a(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) return std::nullopt;
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            std::swap(b[pivot], b[col]);
        }
        Rational d = a(col, col);
        for (int j = 0; j < n; ++j) a(col, j) /= d;
        b[col] /= d;
        for (int r = 0; r < n; ++r) {
            if (r == col || a(r, col) == 0) continue;
            Rational f = a(r, col);
            for (int j = 0; j < n; ++j) a(r, j) -= f * a(col, j);
            b[r] -= f * b[col];
        }
    }
    return b;
}

/**
 * Exact membership test p in conv(points), by phase-one simplex with Bland's
 * rule on { lambda >= 0, sum lambda_i q_i = p, sum lambda_i = 1 }.
 */
inline bool point_in_convex_hull(const VecQ& p, const std::vector<VecQ>& points) {
    if (points.empty()) return false;
    const int d = static_cast<int>(p.size());
    const int m = d + 1;                          // constraint rows
    const int n = static_cast<int>(points.size());  // lambda columns
    // Tableau columns: n lambdas, m artificials, rhs.
    std::vector<VecQ> t(m, VecQ(n + m + 1, Rational(0)));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < n; ++j) t[i][j] = points[j][i];
        t[i][n + m] = p[i];
    }
    for (int j = 0; j < n; ++j) t[d][j] = 1;
    t[d][n + m] = 1;
    for (int i = 0; i < m; ++i) {
        if (t[i][n + m] < 0)
            for (auto& x : t[i]) x = -x;
        t[i][n + i] = 1;
    }
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    // Objective: minimise the sum of artificials. Reduced-cost row for the
    // current (all-artificial) basis is the negated column sum.
    VecQ obj(n + m + 1, Rational(0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n + m; ++j) obj[j] -= t[i][j];
    for (int i = 0; i < m; ++i) obj[n + i] = 0;

    while (true) {
        int enter = -1;
        for (int j = 0; j < n + m; ++j)
            if (obj[j] < 0) {
                enter = j;
                break;
            }
        if (enter < 0) break;
        int leave = -1;
        Rational best;
        for (int i = 0; i < m; ++i) {
            if (t[i][enter] <= 0) continue;
            Rational ratio = t[i][n + m] / t[i][enter];
            if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave < 0) return false;  // unbounded cannot occur here, but be safe
        Rational piv = t[leave][enter];
        for (auto& x : t[leave]) x /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            Rational f = t[i][enter];
            for (int j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
        }
        Rational f = obj[enter];
        if (f != 0)
            for (int j = 0; j <= n + m; ++j) obj[j] -= f * t[leave][j];
        basis[leave] = enter;
    }
    return -obj[n + m] == 0;
}

/// Exact vertex set of conv(points): dedupe, then drop every point lying in
/// the hull of the others.
inline std::vector<VecQ> hull_vertices(std::vector<VecQ> points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() <= 1) return points;
    std::vector<VecQ> verts;
    for (size_t i = 0; i < points.size(); ++i) {
        std::vector<VecQ> others;
        others.reserve(points.size() - 1);
        for (size_t j = 0; j < points.size(); ++j)
            if (j != i) others.push_back(points[j]);
        if (!point_in_convex_hull(points[i], others)) verts.push_back(points[i]);
    }
    return verts;
}

/// Closed halfspace <normal, x> <= offset with primitive integer normal.
struct HalfSpace {
    std::vector<Integer> normal;
    Rational offset;

    Rational eval(const VecQ& x) const {
        Rational s(0);
        for (size_t i = 0; i < normal.size(); ++i) s += Rational(normal[i]) * x[i];
        return s;
    }
    bool contains(const VecQ& x) const { return eval(x) <= offset; }

    friend bool operator<(const HalfSpace& a, const HalfSpace& b) {
        if (a.normal != b.normal) return a.normal < b.normal;
        return a.offset < b.offset;
    }
    friend bool operator==(const HalfSpace& a, const HalfSpace& b) {
        return a.normal == b.normal && a.offset == b.offset;
    }
};

namespace detail {

// Scale a rational normal vector to a primitive integer one (times the offset).
inline HalfSpace make_primitive(const VecQ& n, const Rational& beta) {
    Integer lcm(1);
    for (auto& c : n) lcm = boost::multiprecision::lcm(lcm, rat_den(c));
    std::vector<Integer> in(n.size());
    Integer g(0);
    for (size_t i = 0; i < n.size(); ++i) {
        in[i] = rat_num(n[i]) * (lcm / rat_den(n[i]));
        g = boost::multiprecision::gcd(g, boost::multiprecision::abs(in[i]));
    }
    if (g == 0) throw std::logic_error("make_primitive: zero normal");
    for (auto& c : in) c /= g;
    return HalfSpace{std::move(in), beta * Rational(lcm) / Rational(g)};
}

// Normal of the hyperplane spanned by rows (generalized cross product).
inline VecQ hyperplane_normal(const std::vector<VecQ>& diffs, int d) {
    VecQ n(d);
    for (int i = 0; i < d; ++i) {
        Mat<Rational> minor(d - 1, d - 1);
        for (int r = 0; r < d - 1; ++r) {
            int cc = 0;
            for (int c = 0; c < d; ++c) {
                if (c == i) continue;
                minor(r, cc++) = diffs[r][c];
            }
        }
        Rational m = (d == 1) ? Rational(1) : det_rational(minor);
        n[i] = (i % 2 == 0) ? m : -m;
    }
    return n;
}

}  // namespace detail

/// Halfspace <n, x> <= b from rational data, normal made primitive integer.
inline HalfSpace halfspace(const VecQ& normal, const Rational& offset) {
    return detail::make_primitive(normal, offset);
}

/**
 * Facet halfspaces of a full-dimensional polytope given by its exact vertex
 * set: every d-subset of vertices spanning a hyperplane with all vertices on
 * one side contributes a facet. Small vertex counts only.
 */
inline std::vector<HalfSpace> facet_halfspaces(const std::vector<VecQ>& verts, int d) {
    std::set<HalfSpace> out;
    const int n = static_cast<int>(verts.size());
    if (n < d + 1) throw std::invalid_argument("facet_halfspaces: not full-dimensional");
    std::vector<int> idx(d);
    std::vector<char> choose(n, 0);
    std::fill(choose.begin(), choose.begin() + d, 1);
    std::vector<char> comb(n);
    // iterate over all d-subsets via prev_permutation on the selection mask
    std::vector<char> mask(n, 0);
    std::fill(mask.begin(), mask.begin() + d, 1);
    std::sort(mask.begin(), mask.end(), std::greater<char>());
    do {
        std::vector<const VecQ*> pts;
        for (int i = 0; i < n; ++i)
            if (mask[i]) pts.push_back(&verts[i]);
        std::vector<VecQ> diffs;
        for (int i = 1; i < d; ++i) diffs.push_back(vec_sub(*pts[i], *pts[0]));
        VecQ nrm = detail::hyperplane_normal(diffs, d);
        bool zero = true;
        for (auto& c : nrm)
            if (c != 0) zero = false;
        if (zero) continue;
        Rational beta = dot(nrm, *pts[0]);
        int below = 0, above = 0;
        for (auto& v : verts) {
            Rational s = dot(nrm, v);
            if (s < beta)
                ++below;
            else if (s > beta)
                ++above;
        }
        if (below > 0 && above > 0) continue;
        if (above > 0) {
            for (auto& c : nrm) c = -c;
            beta = -beta;
        }
        out.insert(detail::make_primitive(nrm, beta));
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return {out.begin(), out.end()};
}

/// Vertex enumeration of { x : all halfspaces hold } for a bounded region.
inline std::vector<VecQ> vertices_from_halfspaces(const std::vector<HalfSpace>& hs, int d) {
    const int m = static_cast<int>(hs.size());
    if (m < d) return {};
    std::vector<VecQ> pts;
    std::vector<char> mask(m, 0);
    std::fill(mask.begin(), mask.begin() + d, 1);
    std::sort(mask.begin(), mask.end(), std::greater<char>());
    do {
        Mat<Rational> a(d, d);
        VecQ b(d);
        int r = 0;
        for (int i = 0; i < m; ++i) {
            if (!mask[i]) continue;
            for (int j = 0; j < d; ++j) a(r, j) = Rational(hs[i].normal[j]);
            b[r] = hs[i].offset;
            ++r;
        }
        auto x = solve_square(a, b);
        if (!x) continue;
        bool inside = true;
        for (auto& h : hs)
            if (!h.contains(*x)) {
                inside = false;
                break;
            }
        if (inside) pts.push_back(*x);
    } while (std::prev_permutation(mask.begin(), mask.end()));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

namespace detail {

// Triangulation of the convex hull of an exact vertex set of affine dimension
// k (living in ambient dimension >= k), as index tuples of size k+1.
inline std::vector<std::vector<int>> triangulate_vertices(const std::vector<VecQ>& verts, int k);

// Pick k coordinates on which the point set keeps affine dimension k, and
// project. Indices are preserved.
inline std::vector<VecQ> project_to_independent_coords(const std::vector<VecQ>& pts, int k) {
    std::vector<VecQ> diffs;
    for (size_t i = 1; i < pts.size(); ++i) diffs.push_back(vec_sub(pts[i], pts[0]));
    const int dim = static_cast<int>(pts[0].size());
    // Column-select via Gaussian elimination on the difference matrix.
    std::vector<VecQ> work = diffs;
    std::vector<int> cols;
    int row = 0;
    for (int c = 0; c < dim && row < static_cast<int>(work.size()); ++c) {
        int pivot = -1;
        for (int r = row; r < static_cast<int>(work.size()); ++r)
            if (work[r][c] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(work[row], work[pivot]);
        for (int r = 0; r < static_cast<int>(work.size()); ++r) {
            if (r == row || work[r][c] == 0) continue;
            Rational f = work[r][c] / work[row][c];
            for (int j = c; j < dim; ++j) work[r][j] -= f * work[row][j];
        }
        cols.push_back(c);
        ++row;
        if (static_cast<int>(cols.size()) == k) break;
    }
    if (static_cast<int>(cols.size()) != k)
        throw std::logic_error("project_to_independent_coords: rank deficiency");
    std::vector<VecQ> proj(pts.size(), VecQ(k));
    for (size_t i = 0; i < pts.size(); ++i)
        for (int j = 0; j < k; ++j) proj[i][j] = pts[i][cols[j]];
    return proj;
}

inline std::vector<std::vector<int>> triangulate_vertices(const std::vector<VecQ>& verts, int k) {
    const int n = static_cast<int>(verts.size());
    if (n == k + 1) {
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        return {all};
    }
    if (k == 1) {
        // Vertex set of a segment must be its two endpoints.
        if (n != 2) throw std::logic_error("triangulate_vertices: bad segment");
        return {{0, 1}};
    }
    std::vector<VecQ> pts = verts;
    if (static_cast<int>(verts[0].size()) > k) pts = project_to_independent_coords(verts, k);

    std::vector<std::vector<int>> simplices;
    auto facets = facet_halfspaces(pts, k);
    const VecQ& apex = pts[0];
    for (auto& f : facets) {
        if (f.eval(apex) == f.offset) continue;  // apex on the facet
        std::vector<int> on;
        for (int i = 0; i < n; ++i)
            if (f.eval(pts[i]) == f.offset) on.push_back(i);
        std::vector<VecQ> fverts;
        for (int i : on) fverts.push_back(pts[i]);
        for (auto& sub : triangulate_vertices(fverts, k - 1)) {
            std::vector<int> simplex;
            simplex.push_back(0);
            for (int s : sub) simplex.push_back(on[s]);
            simplices.push_back(std::move(simplex));
        }
    }
    return simplices;
}

}  // namespace detail

/**
 * V-representation polytope with exact rational vertices. Construction
 * normalises the input to the exact vertex set of its convex hull; degenerate
 * (lower-dimensional) polytopes are allowed.
 */
class RationalPolytope {
  public:
    RationalPolytope() : dim_(0) {}

    static RationalPolytope from_points(int dim, std::vector<VecQ> pts) {
        for (auto& p : pts)
            if (static_cast<int>(p.size()) != dim)
                throw std::invalid_argument("RationalPolytope: point dimension mismatch");
        if (pts.empty()) throw std::invalid_argument("RationalPolytope: no points");
        RationalPolytope p;
        p.dim_ = dim;
        p.verts_ = hull_vertices(std::move(pts));
        return p;
    }

    int ambient_dim() const { return dim_; }
    const std::vector<VecQ>& vertices() const { return verts_; }

    int affine_dim() const {
        std::vector<VecQ> diffs;
        for (size_t i = 1; i < verts_.size(); ++i) diffs.push_back(vec_sub(verts_[i], verts_[0]));
        return rational_rank(diffs);
    }
    bool full_dimensional() const { return affine_dim() == dim_; }

    RationalPolytope dilated(const Rational& c) const {
        RationalPolytope p;
        p.dim_ = dim_;
        for (auto& v : verts_) p.verts_.push_back(vec_scale(v, c));
        std::sort(p.verts_.begin(), p.verts_.end());
        return p;
    }

    RationalPolytope translated(const VecQ& t) const {
        RationalPolytope p;
        p.dim_ = dim_;
        for (auto& v : verts_) p.verts_.push_back(vec_add(v, t));
        std::sort(p.verts_.begin(), p.verts_.end());
        return p;
    }

    friend RationalPolytope minkowski_sum(const RationalPolytope& a, const RationalPolytope& b) {
        if (a.dim_ != b.dim_) throw std::invalid_argument("minkowski_sum: dimension mismatch");
        std::vector<VecQ> pts;
        pts.reserve(a.verts_.size() * b.verts_.size());
        for (auto& va : a.verts_)
            for (auto& vb : b.verts_) pts.push_back(vec_add(va, vb));
        return from_points(a.dim_, std::move(pts));
    }

    std::vector<HalfSpace> facets() const {
        if (!full_dimensional()) throw std::domain_error("facets: polytope not full-dimensional");
        return facet_halfspaces(verts_, dim_);
    }

    std::vector<VecQ> facet_vertices(const HalfSpace& h) const {
        std::vector<VecQ> on;
        for (auto& v : verts_)
            if (h.eval(v) == h.offset) on.push_back(v);
        return on;
    }

    /// Euclidean volume of the hull in ambient dimension (0 when degenerate).
    Rational volume() const {
        if (dim_ == 0) return Rational(0);
        if (static_cast<int>(verts_.size()) < dim_ + 1) return Rational(0);
        if (affine_dim() < dim_) return Rational(0);
        if (dim_ == 1) {
            return verts_.back()[0] - verts_.front()[0];
        }
        Rational total(0);
        const VecQ& apex = verts_[0];
        for (auto& f : facet_halfspaces(verts_, dim_)) {
            if (f.eval(apex) == f.offset) continue;
            std::vector<VecQ> fverts = facet_vertices(f);
            for (auto& simplex : detail::triangulate_vertices(fverts, dim_ - 1)) {
                Mat<Rational> m(dim_, dim_);
                // simplex[0] is the recursive apex inside the facet; rows are
                // edge vectors of the cone over the facet simplex.
                for (int r = 0; r < dim_ - 1; ++r) {
                    VecQ e = vec_sub(fverts[simplex[r + 1]], fverts[simplex[0]]);
                    for (int c = 0; c < dim_; ++c) m(r, c) = e[c];
                }
                VecQ e = vec_sub(fverts[simplex[0]], apex);
                for (int c = 0; c < dim_; ++c) m(dim_ - 1, c) = e[c];
                total += rat_abs(det_rational(m));
            }
        }
        return total / Rational(int_factorial(dim_));
    }

    bool contains(const VecQ& x) const { return point_in_convex_hull(x, verts_); }

    Rational max_of(const VecQ& functional) const {
        Rational best = dot(functional, verts_[0]);
        for (auto& v : verts_) best = std::max(best, dot(functional, v));
        return best;
    }

    friend bool operator==(const RationalPolytope& a, const RationalPolytope& b) {
        return a.dim_ == b.dim_ && a.verts_ == b.verts_;
    }

  private:
    int dim_;
    std::vector<VecQ> verts_;  // sorted lexicographically
};

/// All proper nonempty faces as vertex-index sets: facets closed under
/// pairwise intersection. Deterministic order (sorted vertex sets).
inline std::vector<std::vector<int>> proper_faces(const RationalPolytope& p) {
    auto facets = p.facets();
    const auto& verts = p.vertices();
    std::set<std::vector<int>> faces;
    std::vector<std::vector<int>> facet_sets;
    for (auto& f : facets) {
        std::vector<int> on;
        for (int i = 0; i < static_cast<int>(verts.size()); ++i)
            if (f.eval(verts[i]) == f.offset) on.push_back(i);
        faces.insert(on);
        facet_sets.push_back(on);
    }
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<int>> current(faces.begin(), faces.end());
        for (auto& a : current)
            for (auto& b : facet_sets) {
                std::vector<int> inter;
                std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                      std::back_inserter(inter));
                if (!inter.empty() && !faces.count(inter)) {
                    faces.insert(inter);
                    grew = true;
                }
            }
    }
    return {faces.begin(), faces.end()};
}

}  // namespace isk
