#pragma once

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "isk/laurent.hpp"
#include "isk/smallmat.hpp"

namespace isk {

/**
 * Sparse multivariate polynomial over a scalar ring S. Terms map an exponent
 * vector (one entry per variable) to a nonzero coefficient. Variable names are
 * carried for serialization only; arithmetic assumes operands share the list.
 */
template <class S>
class MultiPoly {
  public:
    using Exponents = std::vector<int>;

    MultiPoly() = default;
    explicit MultiPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    static MultiPoly constant(std::vector<std::string> vars, const S& c) {
        MultiPoly p(std::move(vars));
        if (!scalar_is_zero(c)) p.terms_[Exponents(p.vars_.size(), 0)] = c;
        return p;
    }
    static MultiPoly variable(std::vector<std::string> vars, int index) {
        MultiPoly p(std::move(vars));
        Exponents e(p.vars_.size(), 0);
        e.at(index) = 1;
        p.terms_[e] = S(1);
        return p;
    }

    const std::vector<std::string>& vars() const { return vars_; }
    const std::map<Exponents, S>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    void add_term(const Exponents& e, const S& c) {
        if (static_cast<int>(e.size()) != static_cast<int>(vars_.size()))
            throw std::invalid_argument("MultiPoly: exponent arity mismatch");
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (!scalar_is_zero(c)) terms_[e] = c;
        } else {
            it->second += c;
            if (scalar_is_zero(it->second)) terms_.erase(it);
        }
    }

    MultiPoly operator-() const {
        MultiPoly r(vars_);
        for (auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }
    MultiPoly& operator+=(const MultiPoly& o) {
        for (auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) {
        for (auto& [e, c] : o.terms_) add_term(e, S(0) - c);
        return *this;
    }
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r(a.vars_);
        Exponents e(a.vars_.size());
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_) {
                S prod = ca * cb;
                if (scalar_is_zero(prod)) continue;
                for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, prod);
            }
        return r;
    }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.terms_ == b.terms_; }

    MultiPoly scaled(const S& c) const {
        MultiPoly r(vars_);
        for (auto& [e, k] : terms_) {
            S prod = k * c;
            if (!scalar_is_zero(prod)) r.terms_[e] = prod;
        }
        return r;
    }

    // Degree in the variable block [start, start+len).
    int block_degree(int start, int len) const {
        int deg = -1;
        for (auto& [e, c] : terms_) {
            int d = 0;
            for (int i = start; i < start + len; ++i) d += e[i];
            deg = std::max(deg, d);
        }
        return deg;
    }

    bool is_multihomogeneous(int start, int len, int expected) const {
        for (auto& [e, c] : terms_) {
            int d = 0;
            for (int i = start; i < start + len; ++i) d += e[i];
            if (d != expected) return false;
        }
        return true;
    }

    template <class S2>
    S2 eval(const std::vector<S2>& point) const {
        if (point.size() != vars_.size()) throw std::invalid_argument("MultiPoly::eval arity");
        S2 acc(0);
        for (auto& [e, c] : terms_) {
            S2 term = convert_scalar<S2>(c);
            for (size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k) term = term * point[i];
            acc += term;
        }
        return acc;
    }

    friend std::ostream& operator<<(std::ostream& os, const MultiPoly& p) {
        if (p.terms_.empty()) return os << "0";
        bool first = true;
        for (auto& [e, c] : p.terms_) {
            if (!first) os << " + ";
            os << "(" << c << ")";
            for (size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0) {
                    os << "*" << (i < p.vars_.size() ? p.vars_[i] : "x" + std::to_string(i));
                    if (e[i] != 1) os << "^" << e[i];
                }
            first = false;
        }
        return os;
    }

  private:
    template <class S2>
    static S2 convert_scalar(const S& c) {
        if constexpr (std::is_same_v<S2, S>)
            return c;
        else if constexpr (std::is_same_v<S, Rational> && std::is_same_v<S2, std::complex<double>>)
            return S2(to_double(c), 0.0);
        else if constexpr (std::is_same_v<S, Rational> && std::is_same_v<S2, LaurentQ>)
            return LaurentQ(c);
        else
            return S2(c);
    }

    std::vector<std::string> vars_;
    std::map<Exponents, S> terms_;
};

/**
 * Substitute the variables in block [start, start+len) by their images under
 * the matrix `sub` over a (possibly different) scalar ring: x_i -> sum_j
 * sub(i,j) x_j, leaving other variables untouched. Coefficients are embedded
 * through `embed`.
 */
template <class S2, class S, class Embed>
MultiPoly<S2> substitute_block_linear(const MultiPoly<S>& p, int start, int len,
                                      const Mat<S2>& sub, Embed embed) {
    if (sub.rows() != len || sub.cols() != len)
        throw std::invalid_argument("substitute_block_linear: matrix size mismatch");
    const int nvars = static_cast<int>(p.vars().size());
    MultiPoly<S2> result(p.vars());

    // Images of the block variables as degree-one polynomials.
    std::vector<MultiPoly<S2>> images;
    images.reserve(len);
    for (int i = 0; i < len; ++i) {
        MultiPoly<S2> img(p.vars());
        for (int j = 0; j < len; ++j) {
            const S2& c = sub(i, j);
            if (scalar_is_zero(c)) continue;
            typename MultiPoly<S2>::Exponents e(nvars, 0);
            e[start + j] = 1;
            img.add_term(e, c);
        }
        images.push_back(std::move(img));
    }

    for (auto& [e, c] : p.terms()) {
        MultiPoly<S2> term = MultiPoly<S2>::constant(p.vars(), embed(c));
        typename MultiPoly<S2>::Exponents rest = e;
        for (int i = start; i < start + len; ++i) rest[i] = 0;
        MultiPoly<S2> mono(p.vars());
        mono.add_term(rest, S2(1));
        term *= mono;
        for (int i = 0; i < len; ++i)
            for (int k = 0; k < e[start + i]; ++k) term *= images[i];
        result += term;
    }
    return result;
}

template <class S>
bool scalar_is_zero(const MultiPoly<S>& p) {
    return p.is_zero();
}
template <class S>
MultiPoly<S> ring_zero(const MultiPoly<S>& p) {
    return MultiPoly<S>(p.vars());
}
template <class S>
MultiPoly<S> ring_one(const MultiPoly<S>& p) {
    return MultiPoly<S>::constant(p.vars(), S(1));
}

using MultiPolyQ = MultiPoly<Rational>;

}  // namespace isk
