#include "lipfree/rational.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace lipfree {

std::string to_string(ArithmeticMode mode) {
  return mode == ArithmeticMode::exact ? "exact" : "float";
}

ArithmeticMode parse_mode(std::string_view text) {
  if (text == "exact") return ArithmeticMode::exact;
  if (text == "float" || text == "floating") return ArithmeticMode::floating;
  throw std::invalid_argument("unknown arithmetic mode '" + std::string(text) + "'");
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s) {
  if (!is_integer_literal(s)) {
    throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  }
  if (s[0] == '+') s.remove_prefix(1);
  return BigInt(std::string(s), 10);
}

// Decimal literal with optional exponent, e.g. "-1.25e-3".
Rational parse_decimal(std::string_view s) {
  std::string_view mantissa = s;
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = s.substr(0, e);
    std::string_view exp_text = s.substr(e + 1);
    if (!exp_text.empty() && exp_text[0] == '+') exp_text.remove_prefix(1);
    const auto [ptr, ec] =
        std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc() || ptr != exp_text.data() + exp_text.size()) {
      throw std::invalid_argument("malformed exponent in '" + std::string(s) + "'");
    }
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.remove_prefix(1);
  }
  const auto dot = mantissa.find('.');
  std::string digits(mantissa.substr(0, dot));
  std::string frac;
  if (dot != std::string_view::npos) frac = std::string(mantissa.substr(dot + 1));
  if (digits.empty() && frac.empty()) {
    throw std::invalid_argument("malformed number '" + std::string(s) + "'");
  }
  for (char c : digits + frac) {
    if (c < '0' || c > '9') throw std::invalid_argument("malformed number '" + std::string(s) + "'");
  }
  BigInt numerator(digits + frac, 10);
  exponent -= static_cast<long>(frac.size());
  Rational result(numerator);
  if (exponent > 0) {
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent));
    result *= scale;
  } else if (exponent < 0) {
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(-exponent));
    result /= scale;
  }
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash));
    BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (is_integer_literal(text)) return Rational(parse_integer(text));
  return parse_decimal(text);
}

std::string format_rational(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::optional<Rational> exact_root(const Rational& value, unsigned long degree) {
  if (degree == 0) return std::nullopt;
  if (sgn(value) < 0) return std::nullopt;
  if (degree == 1) return value;
  BigInt num_root, den_root;
  const int num_exact = mpz_root(num_root.get_mpz_t(), value.get_num_mpz_t(), degree);
  const int den_exact = mpz_root(den_root.get_mpz_t(), value.get_den_mpz_t(), degree);
  if (!num_exact || !den_exact) return std::nullopt;
  Rational r(num_root, den_root);
  r.canonicalize();
  return r;
}

Rational pow_rational(const Rational& base, unsigned long exponent) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::optional<Rational> exact_power(const Rational& value, const Rational& alpha) {
  if (sgn(alpha) <= 0 || sgn(value) < 0) return std::nullopt;
  if (!alpha.get_num().fits_ulong_p() || !alpha.get_den().fits_ulong_p()) return std::nullopt;
  const unsigned long p = alpha.get_num().get_ui();
  const unsigned long q = alpha.get_den().get_ui();
  auto root = exact_root(value, q);
  if (!root) return std::nullopt;
  return pow_rational(*root, p);
}

Rational dyadic(long exponent) {
  BigInt power;
  mpz_ui_pow_ui(power.get_mpz_t(), 2, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  return exponent >= 0 ? Rational(1, power) : Rational(power);
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buffer, ptr);
}

}  // namespace lipfree
