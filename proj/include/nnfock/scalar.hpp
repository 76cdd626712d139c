#ifndef NNFOCK_SCALAR_HPP
#define NNFOCK_SCALAR_HPP

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nnfock {

/// Exact scalar used in rational mode. All combinatorial identities in the
/// library are polynomial in the input data, so they hold with residual
/// exactly zero over this type.
using Rational = boost::multiprecision::mpq_rational;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool is_exact = true;
  static Rational zero() { return Rational(0); }
  static bool is_zero(const Rational& x, const Rational& = Rational(0)) { return x == 0; }
  static double to_double(const Rational& x) { return x.template convert_to<double>(); }
  static Rational from_int(long long n) { return Rational(n); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool is_exact = false;
  static double zero() { return 0.0; }
  static bool is_zero(double x, double tol = 1e-9) { return std::abs(x) <= tol; }
  static double to_double(double x) { return x; }
  static double from_int(long long n) { return static_cast<double>(n); }
};

inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(double x) { return x; }

/// Parses "p/q", "p", or a decimal string like "-0.125" into an exact rational.
Rational parse_rational(std::string_view text);

/// Round-trippable textual form ("p/q" or "p").
std::string rational_to_string(const Rational& x);

template <class S>
S scalar_from_string(std::string_view text);

template <>
inline Rational scalar_from_string<Rational>(std::string_view text) {
  return parse_rational(text);
}

template <>
inline double scalar_from_string<double>(std::string_view text) {
  return std::stod(std::string(text));
}

}  // namespace nnfock

#endif
