#pragma once

// Exact scalar support: arbitrary-precision rationals and the scalar traits
// that let the same templates run over `double` and `Rational`.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

namespace charmatch {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Raised when an exact (Rational) computation would need an irrational value.
class inexact_error : public std::domain_error {
 public:
  explicit inexact_error(const std::string& what)
      : std::domain_error("not representable exactly: " + what) {}
};

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }
inline double to_double(const BigInt& v) { return v.convert_to<double>(); }
inline double to_double(long long v) { return static_cast<double>(v); }

inline Rational make_rational(long long num, long long den = 1) {
  if (den == 0) throw std::domain_error("zero denominator");
  return Rational(num, den);
}

/// Exact decimal literal ("0.125", "2.5e-3") to Rational.
inline Rational rational_from_decimal(const std::string& text) {
  std::string mantissa = text;
  long long exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string::npos) {
    mantissa = text.substr(0, e);
    exp10 = std::stoll(text.substr(e + 1));
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.erase(0, 1);
  }
  BigInt digits = 0;
  long long frac_digits = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (char ch : mantissa) {
    if (ch == '.') {
      if (seen_point) throw std::invalid_argument("malformed number: " + text);
      seen_point = true;
      continue;
    }
    if (ch < '0' || ch > '9') throw std::invalid_argument("malformed number: " + text);
    digits = digits * 10 + (ch - '0');
    any_digit = true;
    if (seen_point) ++frac_digits;
  }
  if (!any_digit) throw std::invalid_argument("malformed number: " + text);
  exp10 -= frac_digits;
  Rational r(digits);
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exp10 < 0 ? -exp10 : exp10));
  r = exp10 < 0 ? r / Rational(scale) : r * Rational(scale);
  return negative ? Rational(-r) : r;
}

inline BigInt factorial_int(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

template <class T>
T factorial(unsigned n) {
  if constexpr (is_exact_v<T>) {
    return Rational(factorial_int(n));
  } else {
    return std::tgamma(static_cast<T>(n) + 1);
  }
}

/// Integer binomial C(n, k) for n >= 0; zero outside 0 <= k <= n.
template <class T>
T binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return T(0);
  if constexpr (is_exact_v<T>) {
    BigInt r = 1;
    for (long long i = 1; i <= k; ++i) {
      r *= (n - k + i);
      r /= i;
    }
    return Rational(r);
  } else {
    T r = 1;
    for (long long i = 1; i <= k; ++i) r = r * static_cast<T>(n - k + i) / static_cast<T>(i);
    return std::round(r);
  }
}

/// Generalized exponentiation: 0^0 = 1, otherwise ordinary integer power.
/// Negative exponents of zero are rejected.
template <class T>
T gpow(const T& base, long long k) {
  if (k == 0) return T(1);
  if (k < 0) {
    if (base == T(0)) throw std::domain_error("generalized power: 0 to a negative exponent");
    return T(1) / gpow(base, -k);
  }
  T result(1);
  T b = base;
  while (k > 0) {
    if (k & 1) result *= b;
    b *= b;
    k >>= 1;
  }
  return result;
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// Exact k-th root of a nonnegative rational, if it is rational.
inline Rational exact_root(const Rational& value, unsigned k) {
  if (value < 0) throw std::domain_error("root of a negative value");
  auto int_root = [k](const BigInt& v) -> BigInt {
    if (v == 0) return 0;
    // Newton iteration on integers, seeded from the double estimate.
    BigInt x(static_cast<long long>(std::llround(std::pow(to_double(v), 1.0 / k))) + 1);
    if (x <= 0) x = 1;
    for (int it = 0; it < 200; ++it) {
      BigInt xk1 = boost::multiprecision::pow(x, k - 1);
      BigInt next = ((k - 1) * x + v / xk1) / k;
      if (next >= x) break;
      x = next;
    }
    while (boost::multiprecision::pow(x, k) > v) --x;
    while (boost::multiprecision::pow(x + 1, k) <= v) ++x;
    return x;
  };
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  BigInt rn = int_root(num), rd = int_root(den);
  if (boost::multiprecision::pow(rn, k) != num || boost::multiprecision::pow(rd, k) != den) {
    throw inexact_error("root of " + value.str());
  }
  return Rational(rn, rd);
}

/// Elementary-function values at a scalar. For Rational these succeed only
/// where the value is rational (exp(0), ln(1), sqrt of a perfect square, ...).
template <class T>
struct scalar_ops;

template <>
struct scalar_ops<double> {
  static double exp(double v) { return std::exp(v); }
  static double log(double v) { return std::log(v); }
  static double sin(double v) { return std::sin(v); }
  static double cos(double v) { return std::cos(v); }
  static double sqrt(double v) { return std::sqrt(v); }
  static double atan(double v) { return std::atan(v); }
  static double pow(double v, double r) { return std::pow(v, r); }
  static double pi() { return M_PI; }
};

template <>
struct scalar_ops<Rational> {
  static Rational exp(const Rational& v) {
    if (v == 0) return 1;
    throw inexact_error("exp(" + v.str() + ")");
  }
  static Rational log(const Rational& v) {
    if (v == 1) return 0;
    throw inexact_error("ln(" + v.str() + ")");
  }
  static Rational sin(const Rational& v) {
    if (v == 0) return 0;
    throw inexact_error("sin(" + v.str() + ")");
  }
  static Rational cos(const Rational& v) {
    if (v == 0) return 1;
    throw inexact_error("cos(" + v.str() + ")");
  }
  static Rational sqrt(const Rational& v) { return exact_root(v, 2); }
  static Rational atan(const Rational& v) {
    if (v == 0) return 0;
    throw inexact_error("atan(" + v.str() + ")");
  }
  static Rational pow(const Rational& v, const Rational& r) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    BigInt p = numerator(r), q = denominator(r);
    if (q > 64 || abs(Rational(p)) > 4096) throw inexact_error("power " + r.str());
    Rational root = exact_root(v, static_cast<unsigned>(q));
    return gpow(root, static_cast<long long>(p));
  }
  [[noreturn]] static Rational pi() { throw inexact_error("pi"); }
};

}  // namespace charmatch
