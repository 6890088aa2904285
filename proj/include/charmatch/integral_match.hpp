#pragma once

// Integral characteristic numbers: raw moments with Legendre matching,
// projection (Fourier, Legendre-Fourier), repeated integrals, and the
// Bernoulli endpoint-difference family.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "charmatch/expansions.hpp"
#include "charmatch/expr.hpp"
#include "charmatch/framework.hpp"
#include "charmatch/polynomial.hpp"
#include "charmatch/quadrature.hpp"
#include "charmatch/specfun.hpp"

namespace charmatch {

template <class T>
struct MomentSet {
  T a = T(-1);
  T b = T(1);
  std::vector<T> values;
  std::string source;  // "exact" or "quadrature"

  CharNumbers<T> chars() const {
    FamilyParams<T> p;
    p.a = a;
    p.b = b;
    return CharNumbers<T>::from_values(values, CharFamily::moment, p);
  }
};

template <class T>
void to_json(nlohmann::json& j, const MomentSet<T>& m) {
  std::vector<double> v;
  for (const T& x : m.values) v.push_back(to_double(x));
  j = nlohmann::json{{"interval", {to_double(m.a), to_double(m.b)}}, {"values", v}, {"source", m.source}};
}

namespace detail {

/// int_a^b w(x) f(x) dx: exact for polynomial f when T is Rational, quadrature otherwise.
template <class T>
T integrate_expr(const Expr& f, const Polynomial<T>& w, const T& a, const T& b, const Quadrature& quad,
                 bool* exact = nullptr) {
  if constexpr (is_exact_v<T>) {
    if (auto p = f.to_polynomial()) {
      if (exact) *exact = true;
      return (w * *p).integrate(a, b);
    }
  }
  if (exact) *exact = false;
  const Polynomial<double> wd = w.template cast<double>();
  return T(quad.integrate([&](double x) { return wd(x) * f(x); }, to_double(a), to_double(b)));
}

}  // namespace detail

/// c_n = int_a^b x^n f(x) dx for n = 0..N.
template <class T>
MomentSet<T> moments_compute(const Expr& f, const T& a, const T& b, int order, const Quadrature& quad = Quadrature()) {
  if (!(a < b)) throw std::invalid_argument("moments: interval needs a < b");
  MomentSet<T> m;
  m.a = a;
  m.b = b;
  bool exact = false;
  for (int n = 0; n <= order; ++n) {
    m.values.push_back(detail::integrate_expr(f, Polynomial<T>::monomial(n), a, b, quad, &exact));
  }
  m.source = exact ? "exact" : "quadrature";
  return m;
}

/// Legendre coefficients from moments on (-1,1): beta_n = (2n+1)/2 sum_j gamma_j^n c_j.
template <class T>
std::vector<T> legendre_betas(const std::vector<T>& moments) {
  std::vector<T> beta(moments.size(), T(0));
  for (std::size_t n = 0; n < moments.size(); ++n) {
    const Polynomial<Rational> P = legendre_coeffs(static_cast<unsigned>(n));
    T s(0);
    for (std::size_t j = 0; j <= n; ++j) {
      if (P.coeff(j) == 0) continue;
      if constexpr (is_exact_v<T>) {
        s += P.coeff(j) * moments[j];
      } else {
        s += to_double(P.coeff(j)) * moments[j];
      }
    }
    beta[n] = s * T(2 * static_cast<long long>(n) + 1) / T(2);
  }
  return beta;
}

template <class T>
Polynomial<T> legendre_series(const std::vector<T>& beta, bool shifted = false) {
  Polynomial<T> p({T(0)});
  for (std::size_t n = 0; n < beta.size(); ++n) {
    if (beta[n] == T(0)) continue;
    p = p + legendre_coeffs(static_cast<unsigned>(n), shifted).template cast<T>() * beta[n];
  }
  return p;
}

/// Polynomial sum beta_n P_n whose first N+1 moments on (-1,1) equal c.
template <class T>
Approximant<T> legendre_moment_match(const CharNumbers<T>& c) {
  if (c.family != CharFamily::moment) throw family_mismatch("legendre_moment_match: needs moment numbers");
  if (!(c.params.a == T(-1) && c.params.b == T(1))) {
    throw std::invalid_argument("legendre_moment_match: moments must be taken on (-1,1)");
  }
  const std::vector<T> beta = legendre_betas(c.values);
  Approximant<T> A = Approximant<T>::from_polynomial(legendre_series(beta), ExpansionKind::legendre_moment);
  A.coeffs.values = beta;
  return A;
}

/// Delta_m^[N]: polynomial of degree N with int x^n Delta = delta_{n,m} for n <= N.
inline Polynomial<Rational> moment_partial_delta(int m, int order) {
  if (m < 0 || m > order) throw std::invalid_argument("moment_partial_delta: need 0 <= m <= N");
  std::vector<Rational> e(static_cast<std::size_t>(order) + 1, Rational(0));
  e[m] = 1;
  return legendre_series(legendre_betas(e));
}

/// sum beta_n P_n(x) by the three-term recurrence.
inline double legendre_sum(const std::vector<double>& beta, double x) {
  double p0 = 1.0, p1 = x, s = beta.empty() ? 0.0 : beta[0];
  if (beta.size() > 1) s += beta[1] * x;
  for (std::size_t n = 2; n < beta.size(); ++n) {
    const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
    s += beta[n] * p2;
    p0 = p1;
    p1 = p2;
  }
  return s;
}

/// max |Delta_m^[N]| on a uniform 2001-point grid of [-1,1], for each N.
inline std::vector<double> moment_delta_growth(int m, const std::vector<int>& orders, int points = 2001) {
  std::vector<double> out;
  int prev = -1;
  for (int N : orders) {
    if (N <= prev) throw std::invalid_argument("moment_delta_growth: orders must increase");
    prev = N;
    std::vector<Rational> e(static_cast<std::size_t>(N) + 1, Rational(0));
    if (m > N) throw std::invalid_argument("moment_delta_growth: m exceeds N");
    e[m] = 1;
    std::vector<double> beta;
    for (const Rational& b : legendre_betas(e)) beta.push_back(to_double(b));
    double sup = 0.0;
    for (int i = 0; i < points; ++i) {
      const double x = -1.0 + 2.0 * i / (points - 1);
      sup = std::max(sup, std::abs(legendre_sum(beta, x)));
    }
    out.push_back(sup);
  }
  return out;
}

// ---------------------------------------------------------------- projections

/// Fourier basis on (-pi,pi): v_0 = 1/sqrt2, v_odd = sin((n+1)x/2), v_even = cos(nx/2).
inline double fourier_basis(int n, double x) {
  if (n == 0) return 1.0 / std::sqrt(2.0);
  if (n % 2 == 1) return std::sin((n + 1) / 2.0 * x);
  return std::cos(n / 2.0 * x);
}

/// Raw integrals int v_n f over the basis interval (P_n on (-1,1) for Legendre).
inline std::vector<double> projection_raw_integrals(const Expr& f, ProjectionBasis basis, int order,
                                                    const Quadrature& quad = Quadrature()) {
  std::vector<double> out;
  for (int n = 0; n <= order; ++n) {
    if (basis == ProjectionBasis::fourier) {
      out.push_back(quad.integrate([&](double x) { return fourier_basis(n, x) * f(x); }, -M_PI, M_PI));
    } else {
      const Polynomial<double> P = legendre_coeffs(n).cast<double>();
      out.push_back(quad.integrate([&](double x) { return P(x) * f(x); }, -1.0, 1.0));
    }
  }
  return out;
}

/// c_n = <v_n, f> / <v_n, v_n>, so that a_n = c_n for the expansion sum a_n v_n.
inline CharNumbers<double> projection_chars(const Expr& f, ProjectionBasis basis, int order,
                                            const Quadrature& quad = Quadrature()) {
  std::vector<double> raw = projection_raw_integrals(f, basis, order, quad);
  for (int n = 0; n <= order; ++n) raw[n] /= basis == ProjectionBasis::fourier ? M_PI : 2.0 / (2 * n + 1);
  FamilyParams<double> p;
  p.basis = basis;
  if (basis == ProjectionBasis::fourier) {
    p.a = -M_PI;
    p.b = M_PI;
  }
  return CharNumbers<double>::from_values(std::move(raw), CharFamily::projection, p);
}

/// a_n = c_n for the Fourier and Legendre-Fourier delta expansions.
inline CoeffSeq<double> fourier_coeffs(const Expr& f, int order, const Quadrature& quad = Quadrature()) {
  CoeffSeq<double> s;
  s.values = projection_chars(f, ProjectionBasis::fourier, order, quad).values;
  s.kind = ExpansionKind::fourier;
  return s;
}

inline CoeffSeq<double> legendre_fourier_coeffs(const Expr& f, int order, const Quadrature& quad = Quadrature()) {
  CoeffSeq<double> s;
  s.values = projection_chars(f, ProjectionBasis::legendre, order, quad).values;
  s.kind = ExpansionKind::legendre_fourier;
  return s;
}

namespace detail {
struct FourierForm {
  std::vector<double> a;
  template <class S>
  S operator()(const S& t) const {
    using std::cos;
    using std::sin;
    S acc = t * 0.0 + a[0] / std::sqrt(2.0);
    for (std::size_t n = 1; n < a.size(); ++n) {
      if (n % 2 == 1) {
        acc = acc + sin(t * ((n + 1) / 2.0)) * a[n];
      } else {
        acc = acc + cos(t * (n / 2.0)) * a[n];
      }
    }
    return acc;
  }
};
}  // namespace detail

inline Approximant<double> fourier_approx(const CharNumbers<double>& c) {
  if (c.family != CharFamily::projection || c.params.basis != ProjectionBasis::fourier) {
    throw family_mismatch("fourier: needs Fourier projection numbers");
  }
  CoeffSeq<double> s;
  s.values = c.values;
  s.kind = ExpansionKind::fourier;
  return make_approximant(s, 0.0, detail::FourierForm{c.values});
}

/// sum a_n P_n(x).
template <class T>
Approximant<T> legendre_fourier_approx(const CharNumbers<T>& c) {
  if (c.family != CharFamily::projection || c.params.basis != ProjectionBasis::legendre) {
    throw family_mismatch("legendre-fourier: needs Legendre projection numbers");
  }
  Approximant<T> A = Approximant<T>::from_polynomial(legendre_series(c.values), ExpansionKind::legendre_fourier);
  A.coeffs.values = c.values;
  return A;
}

// ---------------------------------------------------------------- repeated integrals

/// c_n = (1/(n-1)!) int_{-1}^{1} (1-t)^(n-1) f(t) dt, n >= 1.
template <class T>
T higher_integral_char(const Expr& f, int n, const Quadrature& quad = Quadrature()) {
  if (n < 1) throw std::domain_error("higher integral numbers start at n = 1");
  Polynomial<T> w({T(1)});
  for (int k = 1; k < n; ++k) w = w * Polynomial<T>({T(1), T(-1)});
  return detail::integrate_expr(f, w, T(-1), T(1), quad) / factorial<T>(n - 1);
}

/// c_1..c_N; values[0] is unused.
template <class T>
CharNumbers<T> higher_integral_chars(const Expr& f, int order, const Quadrature& quad = Quadrature()) {
  if (order < 1) throw std::domain_error("higher integral numbers start at n = 1");
  std::vector<T> v(static_cast<std::size_t>(order) + 1, T(0));
  for (int n = 1; n <= order; ++n) v[n] = higher_integral_char<T>(f, n, quad);
  return CharNumbers<T>::from_values(std::move(v), CharFamily::higher_integral);
}

/// Moments of h(y) = f(1-2y) on (0,1) are m_k = k! c_{k+1} / 2^(k+1); h is matched with
/// shifted Legendre polynomials and A(x) = h((1-x)/2).
template <class T>
Approximant<T> higher_integral_approx(const CharNumbers<T>& c) {
  if (c.family != CharFamily::higher_integral) throw family_mismatch("higher_integral_approx: wrong family");
  const int N = c.order();
  if (N < 1) throw std::domain_error("higher_integral_approx: needs c_1");
  std::vector<T> m(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) m[k] = factorial<T>(k) * c.values[k + 1] / gpow(T(2), k + 1);
  std::vector<T> beta(m.size(), T(0));
  for (std::size_t n = 0; n < m.size(); ++n) {
    const Polynomial<Rational> P = legendre_coeffs(static_cast<unsigned>(n), true);
    T s(0);
    for (std::size_t j = 0; j <= n; ++j) {
      if constexpr (is_exact_v<T>) {
        s += P.coeff(j) * m[j];
      } else {
        s += to_double(P.coeff(j)) * m[j];
      }
    }
    beta[n] = s * T(2 * static_cast<long long>(n) + 1);
  }
  const Polynomial<T> h = legendre_series(beta, true);
  Approximant<T> A =
      Approximant<T>::from_polynomial(h.compose_affine(T(-1) / T(2), T(1) / T(2)), ExpansionKind::higher_integral);
  A.coeffs.values = beta;
  return A;
}

// ---------------------------------------------------------------- Bernoulli

enum class BernoulliC0 { anchor, integral };

/// c_n = f^(n-1)(b) - f^(n-1)(a) for n >= 1; c_0 = f(anchor) (default anchor a) or int_a^b f.
template <class T>
CharNumbers<T> bernoulli_chars(const Expr& f, const T& a, const T& b, int order,
                               BernoulliC0 mode = BernoulliC0::anchor, std::optional<T> anchor = std::nullopt,
                               const Quadrature& quad = Quadrature()) {
  if (!(a < b)) throw std::domain_error("bernoulli: interval needs a < b");
  std::vector<T> v(static_cast<std::size_t>(order) + 1, T(0));
  if (order >= 1) {
    const std::vector<T> db = f.jet(b, order - 1).derivatives();
    const std::vector<T> da = f.jet(a, order - 1).derivatives();
    for (int n = 1; n <= order; ++n) v[n] = db[n - 1] - da[n - 1];
  }
  FamilyParams<T> p;
  p.a = a;
  p.b = b;
  if (mode == BernoulliC0::anchor) {
    const T x0 = anchor.value_or(a);
    v[0] = f.jet(x0, 0)[0];
    p.anchor = x0;
  } else {
    v[0] = detail::integrate_expr(f, Polynomial<T>({T(1)}), a, b, quad);
  }
  return CharNumbers<T>::from_values(std::move(v), CharFamily::endpoint_difference, p);
}

/// Delta_n on (a,b): (b-a)^(n-1) B_n((x-a)/(b-a)) / n!.
template <class T>
Polynomial<T> bernoulli_delta(int n, const T& a, const T& b) {
  const T L = b - a;
  const Polynomial<T> B = bernoulli_poly(n).template cast<T>();
  return B.compose_affine(T(1) / L, T(-a) / L) * (gpow(L, n - 1) / factorial<T>(n));
}

/// sum_{n>=1} c_n Delta_n plus the c_0 term: with an anchor x0 the constant is
/// f(x0) - A_{n>0}(x0), otherwise c_0 Delta_0.
template <class T>
Approximant<T> bernoulli_approx(const CharNumbers<T>& c) {
  if (c.family != CharFamily::endpoint_difference) throw family_mismatch("bernoulli_approx: wrong family");
  const T& a = c.params.a;
  const T& b = c.params.b;
  Polynomial<T> p({T(0)});
  for (int n = 1; n <= c.order(); ++n) {
    if (c.values[n] == T(0)) continue;
    p = p + bernoulli_delta<T>(n, a, b) * c.values[n];
  }
  std::vector<T> coeffs = c.values;
  if (c.params.anchor) {
    const T shift = c.values[0] - p.evaluate(*c.params.anchor);
    p = p + Polynomial<T>({shift});
    coeffs[0] = shift;
  } else {
    p = p + bernoulli_delta<T>(0, a, b) * c.values[0];
  }
  Approximant<T> A = Approximant<T>::from_polynomial(p, ExpansionKind::bernoulli);
  A.coeffs.values = coeffs;
  A.coeffs.params.a = a;
  A.coeffs.params.b = b;
  A.coeffs.params.anchor = c.params.anchor;
  return A;
}

/// For each eps: max_k |[x-a]^k coefficient of the Bernoulli approximant on (a, a+eps)
/// minus f^(k)(a)/k!|, k = 0..N.
inline std::vector<double> bernoulli_taylor_limit(const Expr& f, double a, const std::vector<double>& eps_list,
                                                  int order) {
  const std::vector<double> taylor = f.jet(a, order).coeffs();
  std::vector<double> out;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw std::domain_error("bernoulli_taylor_limit: eps must be positive");
    const CharNumbers<double> c = bernoulli_chars<double>(f, a, a + eps, order);
    const Polynomial<double> local = bernoulli_approx(c).poly->compose_affine(1.0, a);
    double err = 0.0;
    for (int k = 0; k <= order; ++k) err = std::max(err, std::abs(local.coeff(k) - taylor[k]));
    out.push_back(err);
  }
  return out;
}

}  // namespace charmatch
