#pragma once

// Scalar support for the PL algebra: an exact rational type plus the small
// set of operations every Scalar must provide (floor, conversion, parsing).

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace linewalk {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool is_exact = false;
  static double floor(double x) { return std::floor(x); }
  static double to_double(double x) { return x; }
  static double from_double(double x) { return x; }
  static std::string to_string(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
  }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool is_exact = true;
  static Rational floor(const Rational& x) {
    BigInt num = boost::multiprecision::numerator(x);
    const BigInt den = boost::multiprecision::denominator(x);
    BigInt q = num / den;  // truncates toward zero
    if (num < 0 && q * den != num) q -= 1;
    return Rational(q);
  }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  // Exact: every finite double is a dyadic rational.
  static Rational from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value has no rational form");
    return Rational(x);
  }
  static std::string to_string(const Rational& x) {
    if (boost::multiprecision::denominator(x) == 1) return boost::multiprecision::numerator(x).str();
    return boost::multiprecision::numerator(x).str() + "/" +
           boost::multiprecision::denominator(x).str();
  }
};

template <typename Scalar>
double to_double(const Scalar& x) {
  return ScalarTraits<Scalar>::to_double(x);
}

template <typename To, typename From>
To scalar_cast(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else if constexpr (std::is_same_v<To, double>) {
    return ScalarTraits<From>::to_double(x);
  } else {
    return ScalarTraits<To>::from_double(ScalarTraits<From>::to_double(x));
  }
}

/// Parses "p/q", an integer, or a decimal literal ("1.25", "-3e-2") exactly.
Rational parse_rational(std::string_view text);

}  // namespace linewalk
