#pragma once

// Exact combinatorial sequences and the few floating-point special
// functions the expansion formulas rely on.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "charmatch/polynomial.hpp"
#include "charmatch/rational.hpp"

namespace charmatch {

/// r (r-1) ... (r-k+1) / k!, for any real or rational r.
template <class T>
T binomial_general(const T& r, unsigned k) {
  T num(1);
  T den(1);
  for (unsigned i = 0; i < k; ++i) {
    num *= (r - T(static_cast<long long>(i)));
    den *= T(static_cast<long long>(i + 1));
  }
  return num / den;
}

/// Stirling numbers of the second kind from the alternating-sum formula,
/// with the generalized power 0^0 = 1 giving S(0,0) = 1.
inline Rational stirling2(unsigned n, unsigned k) {
  if (k > n) throw std::domain_error("stirling2: k > n");
  BigInt sum = 0;
  for (unsigned i = 0; i <= k; ++i) {
    BigInt term = boost::multiprecision::numerator(binomial<Rational>(k, i)) *
                  boost::multiprecision::numerator(gpow(Rational(k - i), n));
    sum += (i % 2 == 0) ? term : BigInt(-term);
  }
  return Rational(sum) / Rational(factorial_int(k));
}

/// Unsigned Stirling numbers of the first kind, c(n,k) = c(n-1,k-1) + (n-1) c(n-1,k).
inline Rational stirling1_unsigned(unsigned n, unsigned k) {
  if (k > n) throw std::domain_error("stirling1_unsigned: k > n");
  std::vector<BigInt> row{1};
  for (unsigned m = 1; m <= n; ++m) {
    std::vector<BigInt> next(m + 1, 0);
    for (unsigned j = 0; j <= m; ++j) {
      BigInt v = 0;
      if (j >= 1) v += row[j - 1];
      if (j < row.size()) v += BigInt(m - 1) * row[j];
      next[j] = v;
    }
    row = std::move(next);
  }
  return Rational(row[k]);
}

/// Signed central factorial numbers t(n, k): coefficients of
/// x (x + n/2 - 1)(x + n/2 - 2) ... (x - n/2 + 1).
inline Polynomial<Rational> central_factorial_row(unsigned n) {
  if (n == 0) throw std::domain_error("central factorial: n must be >= 1");
  Polynomial<Rational> p({Rational(0), Rational(1)});
  const Rational half_n(n, 2);
  for (unsigned j = 1; j + 1 <= n; ++j) {
    p = p * Polynomial<Rational>({half_n - Rational(j), Rational(1)});
  }
  return p;
}

inline Rational central_factorial_abs(unsigned n, unsigned k) {
  if (k > n) throw std::domain_error("central_factorial_abs: k > n");
  return abs(central_factorial_row(n).coeff(k));
}

/// Bernoulli numbers B_0..B_n with B_1 = -1/2.
inline std::vector<Rational> bernoulli_numbers(unsigned n) {
  std::vector<Rational> b(n + 1);
  b[0] = 1;
  for (unsigned m = 1; m <= n; ++m) {
    Rational s = 0;
    for (unsigned k = 0; k < m; ++k) s += binomial<Rational>(m + 1, k) * b[k];
    b[m] = -s / Rational(m + 1);
  }
  return b;
}

inline Polynomial<Rational> bernoulli_poly(unsigned n) {
  const std::vector<Rational> b = bernoulli_numbers(n);
  std::vector<Rational> c(n + 1);
  for (unsigned k = 0; k <= n; ++k) c[k] = binomial<Rational>(n, k) * b[n - k];
  return Polynomial<Rational>(std::move(c));
}

/// Legendre polynomial coefficients. Unshifted (on (-1,1)) use
/// 2^n C(n,j) C((n+j-1)/2, n); shifted (on (0,1)) use (-1)^(n+j) C(n,j) C(n+j,j).
inline Polynomial<Rational> legendre_coeffs(unsigned n, bool shifted = false) {
  std::vector<Rational> c(n + 1);
  for (unsigned j = 0; j <= n; ++j) {
    if (shifted) {
      Rational v = binomial<Rational>(n, j) * binomial<Rational>(n + j, j);
      c[j] = ((n + j) % 2 == 0) ? v : Rational(-v);
    } else {
      Rational upper(static_cast<long long>(n + j) - 1, 2);
      c[j] = gpow(Rational(2), n) * binomial<Rational>(n, j) * binomial_general(upper, n);
    }
  }
  return Polynomial<Rational>(std::move(c));
}

inline int moebius(long long n) {
  if (n <= 0) throw std::domain_error("moebius: n must be positive");
  int sign = 1;
  for (long long p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

/// Dirichlet inverse of sin(n pi / 2): (-1)^{sum over primes p | n of (p+1)/2}
/// for square-free odd n, zero otherwise.
inline int nu(long long n) {
  if (n <= 0) throw std::domain_error("nu: n must be positive");
  if (n % 2 == 0) return 0;
  long long exponent = 0;
  for (long long p = 3; p * p <= n; p += 2) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    exponent += (p + 1) / 2;
  }
  if (n > 1) exponent += (n + 1) / 2;
  return exponent % 2 == 0 ? 1 : -1;
}

/// Arithmetic sequences are stored 1-based: element 0 is unused and kept at zero.
template <class T>
std::vector<T> dirichlet_convolve(const std::vector<T>& u, const std::vector<T>& v, std::size_t order) {
  if (u.size() <= order || v.size() <= order) {
    throw std::invalid_argument("dirichlet_convolve: sequences shorter than the requested order");
  }
  std::vector<T> w(order + 1, T(0));
  for (std::size_t k = 1; k <= order; ++k) {
    if (u[k] == T(0)) continue;
    for (std::size_t m = 1; k * m <= order; ++m) w[k * m] += u[k] * v[m];
  }
  return w;
}

template <class T>
std::vector<T> dirichlet_inverse(const std::vector<T>& u, std::size_t order) {
  if (u.size() <= order || order < 1) throw std::invalid_argument("dirichlet_inverse: sequence too short");
  if (u[1] == T(0)) throw std::domain_error("no Dirichlet inverse: u_1 = 0");
  if constexpr (std::is_integral_v<T>) {
    if (u[1] != T(1) && u[1] != T(-1)) {
      throw std::domain_error("dirichlet_inverse: integral sequences need u_1 = +-1");
    }
  }
  std::vector<T> inv(order + 1, T(0));
  inv[1] = T(1) / u[1];
  // Accumulate sum_{d | n, d < n} u_{n/d} inv_d by sweeping multiples of each d.
  std::vector<T> acc(order + 1, T(0));
  for (std::size_t d = 1; d <= order; ++d) {
    if (d > 1) inv[d] = -acc[d] / u[1];
    if (inv[d] == T(0)) continue;
    for (std::size_t m = 2; d * m <= order; ++m) acc[d * m] += u[m] * inv[d];
  }
  return inv;
}

namespace detail {

template <class F>
F bessel_j_series(unsigned n, F x) {
  const F half = x / 2;
  F term = 1;
  for (unsigned i = 1; i <= n; ++i) term = term * half / F(i);
  F sum = term;
  const F minus_q = -half * half;
  for (unsigned m = 0; m < 500; ++m) {
    term = term * minus_q / (F(m + 1) * F(m + 1 + n));
    sum += term;
    using std::abs;
    if (abs(term) < F(1e-18) * abs(sum) || abs(term) < F(1e-300)) break;
  }
  return sum;
}

}  // namespace detail

/// Bessel function of the first kind J_n(x), ascending series. Arguments with
/// |x| > 8 are summed in 50-digit arithmetic to absorb the cancellation.
inline double bessel_j(unsigned n, double x) {
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (std::abs(x) <= 8.0) return detail::bessel_j_series<double>(n, x);
  using wide = boost::multiprecision::cpp_bin_float_50;
  return static_cast<double>(detail::bessel_j_series<wide>(n, wide(x)));
}

/// Exact at zero only.
inline Rational bessel_j(unsigned n, const Rational& x) {
  if (x != 0) throw inexact_error("J_n at nonzero rational argument");
  return n == 0 ? Rational(1) : Rational(0);
}

/// Principal branch W_0 via damped Halley iteration.
inline double lambert_w0(double x) {
  const double branch = -std::exp(-1.0);
  if (std::isnan(x) || x < branch) throw std::domain_error("lambert_w0: x < -1/e");
  if (x == branch) return -1.0;
  if (x == 0.0) return 0.0;
  double w;
  if (std::abs(x) < 0.3) {
    w = x - x * x;
  } else if (x > 3.0) {
    const double l1 = std::log(x), l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  } else if (x < -0.3) {
    const double p = std::sqrt(2.0 * (std::exp(1.0) * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else {
    w = std::log1p(x) * 0.8;
  }
  for (int it = 0; it < 50; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    double step = f / denom;
    // Damping: never step across the branch point.
    while (w - step <= -1.0 && std::abs(step) > 1e-300) step *= 0.5;
    w -= step;
    if (std::abs(step) <= 4 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) break;
  }
  return w;
}

/// Bell-polynomial special values used by the powers-of-g expansions.
/// lah: B_{n,k}(1!,2!,...) = C(n-1,k-1) n!/k!; idempotent: B_{n,k}(1,2,...) = C(n,k) k^(n-k).
inline Rational lah(unsigned n, unsigned k) {
  if (k > n) throw std::domain_error("lah: k > n");
  if (n == 0) return 1;
  if (k == 0) return 0;
  return binomial<Rational>(n - 1, k - 1) * Rational(factorial_int(n)) / Rational(factorial_int(k));
}

inline Rational idempotent(unsigned n, unsigned k) {
  if (k > n) throw std::domain_error("idempotent: k > n");
  return binomial<Rational>(n, k) * gpow(Rational(k), n - k);
}

enum class SeqKind {
  stirling2,
  stirling1_unsigned,
  central_factorial_abs,
  bernoulli_number,
  moebius,
  nu,
  bell_arg_special,
  lah,
};

/// Immutable table of exact sequence values up to a maximum order.
/// Triangular kinds are indexed (n, k) with 0 <= k <= n; the rest by n only.
class SeqTable {
 public:
  SeqTable(SeqKind kind, unsigned max_order) : kind_(kind), max_order_(max_order) {
    switch (kind) {
      case SeqKind::bernoulli_number:
        for (const Rational& b : bernoulli_numbers(max_order)) rows_.push_back({b});
        break;
      case SeqKind::moebius:
      case SeqKind::nu:
        rows_.push_back({});  // no n = 0 entry
        for (unsigned n = 1; n <= max_order; ++n) {
          rows_.push_back({Rational(kind == SeqKind::moebius ? moebius(n) : nu(n))});
        }
        break;
      default:
        for (unsigned n = 0; n <= max_order; ++n) {
          std::vector<Rational> row;
          if (kind == SeqKind::central_factorial_abs && n == 0) {
            rows_.push_back(row);
            continue;
          }
          for (unsigned k = 0; k <= n; ++k) row.push_back(entry(kind, n, k));
          rows_.push_back(std::move(row));
        }
    }
  }

  SeqKind kind() const { return kind_; }
  unsigned max_order() const { return max_order_; }
  bool triangular() const {
    return kind_ != SeqKind::bernoulli_number && kind_ != SeqKind::moebius && kind_ != SeqKind::nu;
  }

  std::optional<Rational> at(unsigned n, unsigned k) const {
    if (!triangular() || n >= rows_.size() || k >= rows_[n].size()) return std::nullopt;
    return rows_[n][k];
  }
  std::optional<Rational> at(unsigned n) const {
    if (triangular() || n >= rows_.size() || rows_[n].empty()) return std::nullopt;
    return rows_[n][0];
  }

 private:
  static Rational entry(SeqKind kind, unsigned n, unsigned k) {
    switch (kind) {
      case SeqKind::stirling2: return stirling2(n, k);
      case SeqKind::stirling1_unsigned: return stirling1_unsigned(n, k);
      case SeqKind::central_factorial_abs: return central_factorial_abs(n, k);
      case SeqKind::bell_arg_special: return idempotent(n, k);
      case SeqKind::lah: return lah(n, k);
      default: throw std::logic_error("SeqTable: not a triangular kind");
    }
  }

  SeqKind kind_;
  unsigned max_order_;
  std::vector<std::vector<Rational>> rows_;
};

}  // namespace charmatch
