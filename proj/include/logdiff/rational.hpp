#pragma once

// Exact rational coefficients. Arbitrary precision, header-only backend.

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace logdiff {

using Integer = boost::multiprecision::cpp_int;
// Expression templates off: plain value semantics.
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline bool is_zero(const Rational& r) { return r.is_zero(); }

inline bool is_integer(const Rational& r) {
    return boost::multiprecision::denominator(r) == 1;
}

// Renders in lowest terms: "3", "-3", "3/2".
inline std::string to_string(const Rational& r) {
    return r.str();
}

// Accepts "p", "-p", "p/q". cpp_rational normalizes sign and gcd itself.
inline Rational parse_rational(const std::string& s) {
    try {
        Rational r(s);
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational literal: '" + s + "'");
    }
}

}  // namespace logdiff
