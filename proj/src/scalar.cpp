#include "nnfock/scalar.hpp"

#include <algorithm>

namespace nnfock {

namespace {

boost::multiprecision::mpz_int pow10(std::size_t k) {
  boost::multiprecision::mpz_int p = 1;
  for (std::size_t i = 0; i < k; ++i) p *= 10;
  return p;
}

// Decimal integer parse; avoids GMP's base auto-detection on leading zeros.
boost::multiprecision::mpz_int mpz_decimal(std::string s) {
  bool negative = false;
  std::size_t pos = 0;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = (s[0] == '-');
    pos = 1;
  }
  while (pos + 1 < s.size() && s[pos] == '0') ++pos;
  std::string digits = s.substr(pos);
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw std::invalid_argument("bad integer literal '" + s + "'");
  boost::multiprecision::mpz_int v(digits);
  return negative ? boost::multiprecision::mpz_int(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string::npos) {
    boost::multiprecision::mpz_int num = mpz_decimal(s.substr(0, slash));
    boost::multiprecision::mpz_int den = mpz_decimal(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rational(num, den);
  }

  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '+' || s[0] == '-') {
    negative = (s[0] == '-');
    pos = 1;
  }

  std::string mantissa = s.substr(pos);
  long long exponent10 = 0;
  if (auto e = mantissa.find_first_of("eE"); e != std::string::npos) {
    exponent10 = std::stoll(mantissa.substr(e + 1));
    mantissa = mantissa.substr(0, e);
  }

  std::size_t frac_digits = 0;
  if (auto dot = mantissa.find('.'); dot != std::string::npos) {
    frac_digits = mantissa.size() - dot - 1;
    mantissa.erase(dot, 1);
  }
  boost::multiprecision::mpz_int num = mpz_decimal(mantissa);
  if (negative) num = -num;
  Rational r(num, pow10(frac_digits));
  if (exponent10 > 0)
    r *= Rational(pow10(static_cast<std::size_t>(exponent10)), 1);
  else if (exponent10 < 0)
    r /= Rational(pow10(static_cast<std::size_t>(-exponent10)), 1);
  return r;
}

std::string rational_to_string(const Rational& x) {
  std::string num = numerator(x).str();
  if (denominator(x) == 1) return num;
  return num + "/" + denominator(x).str();
}

}  // namespace nnfock
