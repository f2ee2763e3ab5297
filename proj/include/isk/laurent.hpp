#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "isk/rational.hpp"

namespace isk {

// Valuation of the zero polynomial.
inline constexpr std::int64_t kValInfinity = std::numeric_limits<std::int64_t>::max();

template <class S>
inline bool scalar_is_zero(const S& s) {
    return s == S(0);
}

/**
 * Finite-support Laurent polynomial in one variable t over a scalar ring S.
 * No zero coefficients are stored; the zero polynomial has an empty map.
 */
template <class S>
class LaurentPoly {
  public:
    LaurentPoly() = default;
    LaurentPoly(const S& constant) {
        if (!scalar_is_zero(constant)) coeff_[0] = constant;
    }

    static LaurentPoly monomial(const S& c, std::int64_t exp) {
        LaurentPoly p;
        if (!scalar_is_zero(c)) p.coeff_[exp] = c;
        return p;
    }
    static LaurentPoly t(std::int64_t exp = 1) { return monomial(S(1), exp); }

    bool is_zero() const { return coeff_.empty(); }

    std::int64_t valuation() const {
        if (coeff_.empty()) return kValInfinity;
        return coeff_.begin()->first;
    }
    std::int64_t top_degree() const {
        if (coeff_.empty()) return kValInfinity;
        return coeff_.rbegin()->first;
    }

    S coefficient(std::int64_t exp) const {
        auto it = coeff_.find(exp);
        return it == coeff_.end() ? S(0) : it->second;
    }

    const std::map<std::int64_t, S>& terms() const { return coeff_; }

    void set(std::int64_t exp, const S& c) {
        if (scalar_is_zero(c))
            coeff_.erase(exp);
        else
            coeff_[exp] = c;
    }

    LaurentPoly operator-() const {
        LaurentPoly r;
        for (auto& [e, c] : coeff_) r.coeff_[e] = -c;
        return r;
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (auto& [e, c] : o.coeff_) {
            auto it = coeff_.find(e);
            if (it == coeff_.end()) {
                coeff_[e] = c;
            } else {
                it->second += c;
                if (scalar_is_zero(it->second)) coeff_.erase(it);
            }
        }
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) { return *this += -o; }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (auto& [ea, ca] : a.coeff_)
            for (auto& [eb, cb] : b.coeff_) {
                S prod = ca * cb;
                if (scalar_is_zero(prod)) continue;
                auto it = r.coeff_.find(ea + eb);
                if (it == r.coeff_.end()) {
                    r.coeff_[ea + eb] = prod;
                } else {
                    it->second += prod;
                    if (scalar_is_zero(it->second)) r.coeff_.erase(it);
                }
            }
        return r;
    }

    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.coeff_ == b.coeff_;
    }

    // Multiply by t^k.
    LaurentPoly shifted(std::int64_t k) const {
        LaurentPoly r;
        for (auto& [e, c] : coeff_) r.coeff_[e + k] = c;
        return r;
    }

    // Numeric evaluation at t = z.
    std::complex<double> eval(std::complex<double> z) const {
        std::complex<double> acc(0.0, 0.0);
        for (auto& [e, c] : coeff_) acc += scalar_to_complex(c) * pow_int(z, e);
        return acc;
    }

    friend std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) {
        if (p.coeff_.empty()) return os << "0";
        bool first = true;
        for (auto& [e, c] : p.coeff_) {
            if (!first) os << " + ";
            os << "(" << c << ")t^" << e;
            first = false;
        }
        return os;
    }

  private:
    static std::complex<double> pow_int(std::complex<double> z, std::int64_t e) {
        if (e == 0) return {1.0, 0.0};
        if (e < 0) return 1.0 / pow_int(z, -e);
        std::complex<double> acc(1.0, 0.0), b = z;
        std::int64_t k = e;
        while (k > 0) {
            if (k & 1) acc *= b;
            b *= b;
            k >>= 1;
        }
        return acc;
    }
    static std::complex<double> scalar_to_complex(const Rational& r) { return {to_double(r), 0.0}; }
    static std::complex<double> scalar_to_complex(const std::complex<double>& c) { return c; }
    static std::complex<double> scalar_to_complex(double d) { return {d, 0.0}; }

    std::map<std::int64_t, S> coeff_;
};

template <class S>
std::int64_t laurent_valuation(const LaurentPoly<S>& p) {
    return p.valuation();
}

using LaurentQ = LaurentPoly<Rational>;

}  // namespace isk
