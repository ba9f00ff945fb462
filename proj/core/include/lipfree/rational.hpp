#pragma once

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>

namespace lipfree {

using Rational = mpq_class;
using BigInt = mpz_class;

enum class ArithmeticMode { exact, floating };

std::string to_string(ArithmeticMode mode);
ArithmeticMode parse_mode(std::string_view text);

/// Parses "p/q", "p", or a decimal literal such as "0.125" into an exact
/// rational. Throws std::invalid_argument on malformed input or a zero
/// denominator.
Rational parse_rational(std::string_view text);

/// num/den in lowest terms (mpq_class(num, den) does not reduce).
inline Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Canonical "p/q" rendering ("p" when the denominator is one).
std::string format_rational(const Rational& value);

/// Exact q-th root of a nonnegative rational, if one exists.
std::optional<Rational> exact_root(const Rational& value, unsigned long degree);

/// value^alpha for rational alpha = p/q, when the result is rational.
std::optional<Rational> exact_power(const Rational& value, const Rational& alpha);

/// 2^{-exponent}, exactly.
Rational dyadic(long exponent);

Rational pow_rational(const Rational& base, unsigned long exponent);

/// Shortest decimal rendering that round-trips a double.
std::string format_double(double value);

// Scalar dispatch. The library runs every algorithm over exact rationals or
// binary64; ScalarTraits carries the few places where the two differ.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool is_exact = true;
  static constexpr ArithmeticMode mode = ArithmeticMode::exact;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static double to_double(const Rational& v) { return v.get_d(); }
  static Rational from_rational(const Rational& v) { return v; }
  static Rational abs(const Rational& v) { return ::abs(v); }
  static int sign(const Rational& v) { return sgn(v); }
  static std::string to_string(const Rational& v) { return format_rational(v); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool is_exact = false;
  static constexpr ArithmeticMode mode = ArithmeticMode::floating;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double to_double(double v) { return v; }
  static double from_rational(const Rational& v) { return v.get_d(); }
  static double abs(double v) { return std::fabs(v); }
  static int sign(double v) { return (v > 0) - (v < 0); }
  static std::string to_string(double v) { return format_double(v); }
};

template <class S>
concept Scalar = std::same_as<S, Rational> || std::same_as<S, double>;

template <Scalar S>
double to_double(const S& v) {
  return ScalarTraits<S>::to_double(v);
}

template <Scalar S>
bool is_zero(const S& v) {
  return ScalarTraits<S>::sign(v) == 0;
}

/// Relative comparison used for cross-checks between solver routes:
/// |a - b| <= tol * max(1, |a|, |b|).
inline bool approx_equal(double a, double b, double tol) {
  const double scale = std::fmax(1.0, std::fmax(std::fabs(a), std::fabs(b)));
  return std::fabs(a - b) <= tol * scale;
}

inline double relative_gap(double a, double b) {
  const double scale = std::fmax(1.0, std::fmax(std::fabs(a), std::fabs(b)));
  return std::fabs(a - b) / scale;
}

}  // namespace lipfree
