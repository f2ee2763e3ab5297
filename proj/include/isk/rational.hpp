#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <stdexcept>
#include <string>

namespace isk {

// Exact scalar type used throughout the polyhedral and valuation layers.
// cpp_rational keeps the canonical form (positive denominator, reduced).
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer rat_num(const Rational& r) { return numerator(r); }
inline Integer rat_den(const Rational& r) { return denominator(r); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// Accepts "p", "p/q" and signed variants.
inline Rational rat_parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("rat_parse: empty string");
    try {
        return Rational(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("rat_parse: bad rational literal '" + s + "'");
    }
}

inline std::string rat_str(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

inline Rational rat_pow(const Rational& base, int e) {
    if (e == 0) return Rational(1);
    if (e < 0) {
        if (base == 0) throw std::domain_error("rat_pow: zero to negative power");
        return Rational(1) / rat_pow(base, -e);
    }
    Rational acc(1), b = base;
    int k = e;
    while (k > 0) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    return acc;
}

inline Integer int_factorial(int n) {
    Integer acc(1);
    for (int i = 2; i <= n; ++i) acc *= i;
    return acc;
}

inline Integer int_binomial(int n, int k) {
    if (k < 0 || k > n) return Integer(0);
    Integer acc(1);
    for (int i = 0; i < k; ++i) {
        acc *= (n - i);
        acc /= (i + 1);
    }
    return acc;
}

}  // namespace isk
