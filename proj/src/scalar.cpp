#include "linewalk/scalar.hpp"

#include <cctype>

namespace linewalk {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

BigInt parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  BigInt v{std::string(s)};
  return negative ? BigInt(-v) : v;
}

BigInt pow10(long exponent) {
  BigInt r = 1;
  for (long i = 0; i < exponent; ++i) r *= 10;
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const BigInt num = parse_integer(text.substr(0, slash));
    const BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }

  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    exponent = static_cast<long>(parse_integer(text.substr(e + 1)).convert_to<long>());
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    const auto frac = mantissa.substr(dot + 1);
    digits = std::string(mantissa.substr(0, dot)) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    digits = std::string(mantissa);
  }
  if (!all_digits(digits)) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  BigInt num(digits);
  if (negative) num = -num;
  if (exponent >= 0) return Rational(BigInt(num * pow10(exponent)));
  return Rational(num, pow10(-exponent));
}

}  // namespace linewalk
