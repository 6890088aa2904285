#pragma once

// Derivative-matching expansions. Every builder takes c_n = f^(n)(x0) and
// returns coefficients for a fixed basis written in t = x - x0.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "charmatch/framework.hpp"
#include "charmatch/jet.hpp"
#include "charmatch/rational.hpp"
#include "charmatch/specfun.hpp"

namespace charmatch {

template <class S>
struct scalar_of {
  using type = double;
};
template <class T>
struct scalar_of<Jet<T>> {
  using type = T;
};
template <class S>
using scalar_of_t = typename scalar_of<S>::type;

namespace detail {

/// Coefficients held exactly and as doubles, selected by evaluation ring.
template <class T>
struct Coefs {
  std::vector<T> exact;
  std::vector<double> approx;

  explicit Coefs(std::vector<T> v) : exact(std::move(v)) {
    for (const T& x : exact) approx.push_back(to_double(x));
  }
  template <class S>
  const auto& get() const {
    if constexpr (std::is_same_v<S, double>) {
      return approx;
    } else {
      return exact;
    }
  }
  std::size_t size() const { return exact.size(); }
};

/// sum_n a[n] y^n by Horner.
template <class S, class V>
S horner(const V& a, const S& y) {
  S acc = y * scalar_of_t<S>(0) + a.back();
  for (std::size_t k = a.size() - 1; k-- > 0;) acc = acc * y + a[k];
  return acc;
}

template <class T>
void require_derivative(const CharNumbers<T>& c, const char* who) {
  if (c.family != CharFamily::derivative) {
    throw family_mismatch(std::string(who) + ": needs derivative characteristic numbers");
  }
  if (c.values.empty()) throw std::invalid_argument(std::string(who) + ": empty characteristic numbers");
}

template <class T>
CoeffSeq<T> seq(std::vector<T> values, ExpansionKind kind, KindParams<T> params = {}) {
  CoeffSeq<T> s;
  s.values = std::move(values);
  s.kind = kind;
  s.params = std::move(params);
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------- Taylor

template <class T>
CoeffSeq<T> taylor_coeffs(const CharNumbers<T>& c) {
  detail::require_derivative(c, "taylor");
  return detail::seq(c.values, ExpansionKind::taylor);
}

/// sum a_n t^n / n!
template <class T>
Approximant<T> taylor_approx(const CoeffSeq<T>& a, const T& x0) {
  std::vector<T> scaled(a.values.size());
  for (std::size_t n = 0; n < scaled.size(); ++n) scaled[n] = a.values[n] / factorial<T>(n);
  Polynomial<T> p = Polynomial<T>(scaled).compose_affine(T(1), T(-x0));
  Approximant<T> A = Approximant<T>::from_polynomial(p, ExpansionKind::taylor);
  A.coeffs = a;
  A.x0 = x0;
  return A;
}

// ---------------------------------------------------------------- NsBf

/// a_0 = c_0, a_n = sum_i 2^(n-2i) [C(n-i-1, n-2i-1) + 2 C(n-i-1, n-2i)] c_(n-2i).
/// The sum runs over 2i <= n; `strict` restricts it to 2i < n, which drops
/// the c_0 contribution at even n.
template <class T>
CoeffSeq<T> nsbf_coeffs(const CharNumbers<T>& c, bool strict = false) {
  detail::require_derivative(c, "nsbf");
  const int N = c.order();
  std::vector<T> a(c.values.size(), T(0));
  a[0] = c.values[0];
  for (int n = 1; n <= N; ++n) {
    T s(0);
    for (int i = 0; strict ? 2 * i < n : 2 * i <= n; ++i) {
      const T bracket = binomial<T>(n - i - 1, n - 2 * i - 1) + T(2) * binomial<T>(n - i - 1, n - 2 * i);
      s += gpow(T(2), n - 2 * i) * bracket * c.values[n - 2 * i];
    }
    a[n] = s;
  }
  KindParams<T> p;
  p.nsbf_strict = strict;
  return detail::seq(std::move(a), ExpansionKind::nsbf, p);
}

namespace detail {
template <class T>
struct NsbfForm {
  Coefs<T> a;
  template <class S>
  S operator()(const S& t) const {
    const auto& c = a.template get<S>();
    S acc = t * scalar_of_t<S>(0);
    for (std::size_t n = 0; n < c.size(); ++n) {
      if (c[n] == 0) continue;
      acc = acc + bessel_j(static_cast<unsigned>(n), t) * c[n];
    }
    return acc;
  }
};
}  // namespace detail

/// sum a_n J_n(t)
template <class T>
Approximant<T> nsbf_approx(const CoeffSeq<T>& a, const T& x0) {
  return make_approximant(a, x0, detail::NsbfForm<T>{detail::Coefs<T>(a.values)});
}

// ---------------------------------------------------------------- Pade

/// P_m(t) / Q_n(t) with Q(0) = 1. values = [p_0..p_m, q_1..q_n].
template <class T>
CoeffSeq<T> pade_solve(const CharNumbers<T>& c, int m, int n) {
  detail::require_derivative(c, "pade");
  if (m < 0 || n < 0) throw std::invalid_argument("pade: degrees must be nonnegative");
  if (c.order() < m + n) throw std::invalid_argument("pade: needs m+n+1 characteristic numbers");
  std::vector<T> f(static_cast<std::size_t>(m + n) + 1);
  for (int k = 0; k <= m + n; ++k) f[k] = c.values[k] / factorial<T>(k);
  auto fk = [&](int k) { return k < 0 ? T(0) : f[k]; };

  // sum_{j=1}^n q_j f_{k-j} = -f_k for k = m+1..m+n
  std::vector<std::vector<T>> M(n, std::vector<T>(n + 1, T(0)));
  for (int r = 0; r < n; ++r) {
    const int k = m + 1 + r;
    for (int j = 1; j <= n; ++j) M[r][j - 1] = fk(k - j);
    M[r][n] = -fk(k);
  }
  // Row echelon form. A rank-deficient but consistent system (f itself a
  // lower-order rational function) keeps its free q_j at zero.
  double scale = 0.0;
  if constexpr (!is_exact_v<T>) {
    for (int r = 0; r < n; ++r) {
      for (int j = 0; j <= n; ++j) scale = std::max(scale, std::abs(M[r][j]));
    }
  }
  auto is_zero = [&](const T& v) {
    if constexpr (is_exact_v<T>) {
      return v == 0;
    } else {
      return std::abs(v) <= 1e-14 * scale;
    }
  };
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < n && row < n; ++col) {
    int piv = -1;
    double best = 0.0;
    for (int r = row; r < n; ++r) {
      if (is_zero(M[r][col])) continue;
      if constexpr (is_exact_v<T>) {
        piv = r;
        break;
      } else if (std::abs(M[r][col]) > best) {
        best = std::abs(M[r][col]);
        piv = r;
      }
    }
    if (piv < 0) continue;
    std::swap(M[row], M[piv]);
    for (int r = row + 1; r < n; ++r) {
      if (M[r][col] == T(0)) continue;
      const T factor = M[r][col] / M[row][col];
      for (int j = col; j <= n; ++j) M[r][j] -= factor * M[row][j];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (int r = row; r < n; ++r) {
    if (!is_zero(M[r][n])) {
      throw std::domain_error("degenerate Padé block [" + std::to_string(m) + "/" + std::to_string(n) + "]");
    }
  }
  std::vector<T> q(static_cast<std::size_t>(n) + 1, T(0));
  q[0] = T(1);
  for (int r = row - 1; r >= 0; --r) {
    const int col = pivot_col[r];
    T s = M[r][n];
    for (int j = col + 1; j < n; ++j) s -= M[r][j] * q[j + 1];
    q[col + 1] = s / M[r][col];
  }
  std::vector<T> out;
  for (int i = 0; i <= m; ++i) {
    T s(0);
    for (int j = 0; j <= std::min(i, n); ++j) s += q[j] * fk(i - j);
    out.push_back(s);
  }
  for (int j = 1; j <= n; ++j) out.push_back(q[j]);
  KindParams<T> p;
  p.pade_m = m;
  p.pade_n = n;
  return detail::seq(std::move(out), ExpansionKind::pade, p);
}

namespace detail {
template <class T>
struct PadeForm {
  Coefs<T> num, den;
  template <class S>
  S operator()(const S& t) const {
    return horner(num.template get<S>(), t) / horner(den.template get<S>(), t);
  }
};
}  // namespace detail

template <class T>
Approximant<T> pade_approx(const CoeffSeq<T>& a, const T& x0) {
  const int m = a.params.pade_m, n = a.params.pade_n;
  std::vector<T> num(a.values.begin(), a.values.begin() + m + 1);
  std::vector<T> den{T(1)};
  den.insert(den.end(), a.values.begin() + m + 1, a.values.begin() + m + 1 + n);
  return make_approximant(a, x0, detail::PadeForm<T>{detail::Coefs<T>(num), detail::Coefs<T>(den)});
}

// ---------------------------------------------------------------- powers of sines

/// a_0 = c_0, a_n = (2^n / n!) sum_{k=1}^n c_k |t(n,k)|
template <class T>
CoeffSeq<T> pow_sine_coeffs(const CharNumbers<T>& c) {
  detail::require_derivative(c, "pow-sine");
  std::vector<T> a(c.values.size(), T(0));
  a[0] = c.values[0];
  for (int n = 1; n <= c.order(); ++n) {
    const Polynomial<Rational> row = central_factorial_row(n);
    T s(0);
    for (int k = 1; k <= n; ++k) {
      const Rational t = abs(row.coeff(k));
      if constexpr (is_exact_v<T>) {
        s += c.values[k] * t;
      } else {
        s += c.values[k] * to_double(t);
      }
    }
    a[n] = s * gpow(T(2), n) / factorial<T>(n);
  }
  return detail::seq(std::move(a), ExpansionKind::pow_sine);
}

namespace detail {
template <class T>
struct PowSineForm {
  Coefs<T> a;
  template <class S>
  S operator()(const S& t) const {
    using std::sin;
    using K = scalar_of_t<S>;
    return horner(a.template get<S>(), S(sin(t * K(K(1) / K(2)))));
  }
};
}  // namespace detail

/// a_0 + sum a_n sin(t/2)^n
template <class T>
Approximant<T> pow_sine_approx(const CoeffSeq<T>& a, const T& x0) {
  return make_approximant(a, x0, detail::PowSineForm<T>{detail::Coefs<T>(a.values)});
}

// ---------------------------------------------------------------- exp-weighted

/// Lower-triangular D (derivatives from coefficients) and its closed-form inverse.
template <class T>
struct DMatrix {
  TriMatrix<T> D;
  TriMatrix<T> Dinv;
  T w;
  int q;
};

/// D[m][j] = [v_{m-j} = 0] m! (u q)! / ((m-j)! u!) w^u with u = u_{m-j};
/// Dinv[n][i] = [v_{n-i} = 0] (-1)^u w^u / ((v_n + q u_i)! u!) with u = u_{n-i}.
template <class T>
DMatrix<T> dmatrix_build(const T& w, int q, int order) {
  if (q < 1) throw std::invalid_argument("exp-weighted: q must be a positive integer");
  DMatrix<T> d{TriMatrix<T>(order), TriMatrix<T>(order), w, q};
  for (int m = 0; m <= order; ++m) {
    for (int j = 0; j <= m; ++j) {
      const int diff = m - j;
      if (diff % q != 0) continue;
      const int u = diff / q;
      d.D.at(m, j) = factorial<T>(m) * factorial<T>(u * q) / (factorial<T>(diff) * factorial<T>(u)) * gpow(w, u);
      const int vn = m % q, ui = j / q;
      const T sign = (u % 2 == 0) ? T(1) : T(-1);
      d.Dinv.at(m, j) = sign * gpow(w, u) / (factorial<T>(vn + q * ui) * factorial<T>(u));
    }
  }
  return d;
}

/// a_n = sum_i m_{n,i} c_i for exp(w t^q) sum a_n t^n.
template <class T>
CoeffSeq<T> exp_weighted_coeffs(const CharNumbers<T>& c, const T& w, int q) {
  detail::require_derivative(c, "exp-weighted");
  const DMatrix<T> d = dmatrix_build(w, q, c.order());
  std::vector<T> a = d.Dinv.multiply(c.values);
  KindParams<T> p;
  p.w = w;
  p.q = q;
  return detail::seq(std::move(a), ExpansionKind::exp_weighted, p);
}

namespace detail {
template <class T>
struct ExpWeightedForm {
  Coefs<T> a;
  T w;
  double wd;
  int q;
  template <class S>
  S operator()(const S& t) const {
    using std::exp;
    using std::pow;
    S tq = pow(t, q);
    if constexpr (std::is_same_v<S, double>) {
      return exp(wd * tq) * horner(a.approx, t);
    } else {
      return exp(tq * w) * horner(a.exact, t);
    }
  }
};
}  // namespace detail

template <class T>
Approximant<T> exp_weighted_approx(const CoeffSeq<T>& a, const T& x0) {
  return make_approximant(a, x0,
                          detail::ExpWeightedForm<T>{detail::Coefs<T>(a.values), a.params.w,
                                                     to_double(a.params.w), a.params.q});
}

// ---------------------------------------------------------------- powers of g

enum class GVariant { log_powers, stirling1_g, lambert_w_g, lah };

/// b_{n,k} for g^{-1} with derivative sequence (1,1,..), (0!,1!,..), (1,2,..) or (1!,2!,..).
inline Rational g_table_entry(GVariant v, unsigned n, unsigned k) {
  if (k == 0) return n == 0 ? Rational(1) : Rational(0);
  switch (v) {
    case GVariant::log_powers: return stirling2(n, k);
    case GVariant::stirling1_g: return stirling1_unsigned(n, k);
    case GVariant::lambert_w_g: return idempotent(n, k);
    case GVariant::lah: return lah(n, k);
  }
  throw std::logic_error("g_table_entry");
}

inline ExpansionKind g_variant_kind(GVariant v) {
  switch (v) {
    case GVariant::log_powers: return ExpansionKind::log_powers;
    case GVariant::stirling1_g: return ExpansionKind::stirling1_g;
    case GVariant::lambert_w_g: return ExpansionKind::lambert_w_g;
    case GVariant::lah: return ExpansionKind::rational_x_over_x1;
  }
  throw std::logic_error("g_variant_kind");
}

/// a_n = (1/n!) sum_{k=0}^n c_k b_{n,k}
template <class T>
CoeffSeq<T> powers_of_g_coeffs(const CharNumbers<T>& c, GVariant v) {
  detail::require_derivative(c, "powers-of-g");
  std::vector<T> a(c.values.size(), T(0));
  for (int n = 0; n <= c.order(); ++n) {
    T s(0);
    for (int k = 0; k <= n; ++k) {
      const Rational b = g_table_entry(v, n, k);
      if (b == 0) continue;
      if constexpr (is_exact_v<T>) {
        s += c.values[k] * b;
      } else {
        s += c.values[k] * to_double(b);
      }
    }
    a[n] = s / factorial<T>(n);
  }
  return detail::seq(std::move(a), g_variant_kind(v));
}

/// Rational expansion in (t/(t - alpha))^n, pole at alpha. alpha = -1 gives the
/// plain basis (t/(t+1))^n; other alpha rescale c_n by (-alpha)^n.
template <class T>
CoeffSeq<T> rational_x1_coeffs(const CharNumbers<T>& c, const T& alpha = T(-1)) {
  detail::require_derivative(c, "newpade");
  if (alpha == T(0)) throw std::domain_error("newpade: alpha must be nonzero");
  CharNumbers<T> scaled = c;
  for (int n = 0; n <= c.order(); ++n) scaled.values[n] = gpow(T(-alpha), n) * c.values[n];
  CoeffSeq<T> s = powers_of_g_coeffs(scaled, GVariant::lah);
  s.params.alpha = alpha;
  return s;
}

namespace detail {
template <class T>
struct PowersOfGForm {
  Coefs<T> a;
  GVariant v;
  T alpha;
  double alphad;
  template <class S>
  S operator()(const S& t) const {
    using std::exp;
    using std::log;
    using K = scalar_of_t<S>;
    S y = t;
    switch (v) {
      case GVariant::log_powers: y = log(t + K(1)); break;
      case GVariant::stirling1_g: y = K(1) - exp(-t); break;
      case GVariant::lambert_w_g:
        if constexpr (std::is_same_v<S, double>) {
          y = lambert_w0(t);
        } else {
          y = lambert_w(t);
        }
        break;
      case GVariant::lah:
        if constexpr (std::is_same_v<S, double>) {
          y = t / (t - alphad);
        } else {
          y = t / (t - alpha);
        }
        break;
    }
    return horner(a.template get<S>(), y);
  }
};
}  // namespace detail

template <class T>
Approximant<T> powers_of_g_approx(const CoeffSeq<T>& a, const T& x0) {
  GVariant v;
  switch (a.kind) {
    case ExpansionKind::log_powers: v = GVariant::log_powers; break;
    case ExpansionKind::stirling1_g: v = GVariant::stirling1_g; break;
    case ExpansionKind::lambert_w_g: v = GVariant::lambert_w_g; break;
    case ExpansionKind::rational_x_over_x1: v = GVariant::lah; break;
    default: throw family_mismatch("powers_of_g_approx: not a powers-of-g kind");
  }
  Approximant<T> A = make_approximant(
      a, x0, detail::PowersOfGForm<T>{detail::Coefs<T>(a.values), v, a.params.alpha, to_double(a.params.alpha)});
  const double x0d = to_double(x0), alphad = to_double(a.params.alpha);
  switch (v) {
    case GVariant::log_powers:
      A.in_domain = [x0d](double x) { return x - x0d > -1.0; };
      A.domain_desc = "x - x0 > -1";
      break;
    case GVariant::lambert_w_g:
      A.in_domain = [x0d](double x) { return x - x0d >= -std::exp(-1.0); };
      A.domain_desc = "x - x0 >= -1/e";
      break;
    case GVariant::lah:
      A.in_domain = [x0d, alphad](double x) { return x - x0d != alphad; };
      A.domain_desc = "x - x0 != alpha";
      break;
    default: break;
  }
  return A;
}

// ---------------------------------------------------------------- Dirichlet family

enum class DirichletVariant { G, rat1, rat2 };

/// G(x) = sum_{n>=1} mu_n x^n truncated at N, with the geometric tail bound.
struct SeriesValue {
  double value;
  double tail_bound;
};

inline SeriesValue moebius_G_eval(double x, int N) {
  if (!(std::abs(x) < 1.0)) throw std::domain_error("G(x) needs |x| < 1");
  double s = 0.0, p = 1.0;
  for (int n = 1; n <= N; ++n) {
    p *= x;
    const int mu = moebius(n);
    if (mu != 0) s += mu * p;
  }
  const double ax = std::abs(x);
  return {s, std::pow(ax, N + 1) / (1.0 - ax)};
}

/// G(x) summed until the tail bound drops below 1e-17.
inline double moebius_G(double x) {
  if (!(std::abs(x) < 1.0)) throw std::domain_error("G(x) needs |x| < 1");
  const double ax = std::abs(x);
  if (ax == 0.0) return 0.0;
  int N = static_cast<int>(std::ceil(std::log(1e-17 * (1.0 - ax)) / std::log(ax)));
  N = std::clamp(N, 1, 2000000);
  return moebius_G_eval(x, N).value;
}

/// values[0] = b0, values[n] = a_n = (u * f)_n with f_n = c_n / n! and
/// u = 1 (G), mu (rat1) or nu (rat2).
template <class T>
CoeffSeq<T> dirichlet_expansion_coeffs(const CharNumbers<T>& c, DirichletVariant v) {
  detail::require_derivative(c, "dirichlet");
  const int N = c.order();
  std::vector<T> f(c.values.size(), T(0));
  for (int n = 1; n <= N; ++n) f[n] = c.values[n] / factorial<T>(n);
  std::vector<T> u(c.values.size(), T(0));
  for (int n = 1; n <= N; ++n) {
    switch (v) {
      case DirichletVariant::G: u[n] = T(1); break;
      case DirichletVariant::rat1: u[n] = T(moebius(n)); break;
      case DirichletVariant::rat2: u[n] = T(nu(n)); break;
    }
  }
  std::vector<T> a = N >= 1 ? dirichlet_convolve(u, f, N) : std::vector<T>{T(0)};
  a[0] = c.values[0];
  ExpansionKind kind = ExpansionKind::dirichlet_G;
  if (v == DirichletVariant::rat1) {
    for (int n = 1; n <= N; ++n) a[0] -= a[n];
    kind = ExpansionKind::dirichlet_rat1;
  } else if (v == DirichletVariant::rat2) {
    kind = ExpansionKind::dirichlet_rat2;
  }
  return detail::seq(std::move(a), kind);
}

namespace detail {

template <class T>
Jet<T> moebius_G(const Jet<T>& u) {
  if (!(u[0] == T(0))) throw evaluation_error("G", "jet needs zero constant term");
  std::vector<T> mu(static_cast<std::size_t>(u.order()) + 1, T(0));
  for (int k = 1; k <= u.order(); ++k) mu[k] = T(moebius(k));
  return horner(mu, u);
}

template <class T>
struct DirichletForm {
  Coefs<T> a;
  DirichletVariant v;
  template <class S>
  S operator()(const S& t) const {
    using K = scalar_of_t<S>;
    const auto& c = a.template get<S>();
    S acc = t * K(0) + c[0];
    S tn = t;
    for (std::size_t n = 1; n < c.size(); ++n) {
      if (n > 1) tn = tn * t;
      if (c[n] == 0) continue;
      S g = tn;
      switch (v) {
        case DirichletVariant::G:
          if constexpr (std::is_same_v<S, double>) {
            g = charmatch::moebius_G(tn);
          } else {
            g = moebius_G(tn);
          }
          break;
        case DirichletVariant::rat1: g = K(1) / (K(1) - tn); break;
        case DirichletVariant::rat2: g = tn / (tn * tn + K(1)); break;
      }
      acc = acc + g * c[n];
    }
    return acc;
  }
};

}  // namespace detail

template <class T>
Approximant<T> dirichlet_approx(const CoeffSeq<T>& a, const T& x0) {
  DirichletVariant v;
  switch (a.kind) {
    case ExpansionKind::dirichlet_G: v = DirichletVariant::G; break;
    case ExpansionKind::dirichlet_rat1: v = DirichletVariant::rat1; break;
    case ExpansionKind::dirichlet_rat2: v = DirichletVariant::rat2; break;
    default: throw family_mismatch("dirichlet_approx: not a Dirichlet kind");
  }
  Approximant<T> A = make_approximant(a, x0, detail::DirichletForm<T>{detail::Coefs<T>(a.values), v});
  const double x0d = to_double(x0);
  if (v == DirichletVariant::G) {
    A.in_domain = [x0d](double x) { return std::abs(x - x0d) < 1.0; };
    A.domain_desc = "|x - x0| < 1";
  } else if (v == DirichletVariant::rat1) {
    A.in_domain = [x0d](double x) { return std::abs(x - x0d) != 1.0; };
    A.domain_desc = "|x - x0| != 1";
  }
  return A;
}

// ---------------------------------------------------------------- dex

/// dex_[N,n](x) = sum_k x^(n+kN) / (n+kN)!
inline double dex_eval(int N, int n, double x) {
  if (N < 1) throw std::domain_error("dex: ring size must be >= 1");
  if (n < 0 || n >= N) throw std::domain_error("dex: index must satisfy 0 <= n < N");
  // Running term x^m/m!; keep those with m = n mod N.
  double term = 1.0, sum = 0.0;
  const double ax = std::abs(x);
  for (int m = 0; m < 100000; ++m) {
    if (m > 0) term *= x / m;
    if (m % N == n) sum += term;
    if (m >= n && m > ax && std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

/// Jet of dex_[N,n](u); d/dx dex_[N,n] = dex_[N,n-1 mod N].
template <class T>
Jet<T> dex(int N, int n, const Jet<T>& u) {
  if (n < 0 || n >= N) throw std::domain_error("dex: index must satisfy 0 <= n < N");
  std::vector<T> outer(static_cast<std::size_t>(u.order()) + 1);
  for (int k = 0; k <= u.order(); ++k) {
    const int idx = ((n - k) % N + N) % N;
    T v;
    if constexpr (is_exact_v<T>) {
      if (u[0] != 0) throw inexact_error("dex at nonzero rational argument");
      v = idx == 0 ? T(1) : T(0);
    } else {
      v = dex_eval(N, idx, u[0]);
    }
    outer[k] = v / factorial<T>(k);
  }
  return compose(Jet<T>(u[0], std::move(outer)), u);
}

namespace detail {
template <class T>
struct DexForm {
  Coefs<T> a;
  int ring;
  template <class S>
  S operator()(const S& t) const {
    using K = scalar_of_t<S>;
    const auto& c = a.template get<S>();
    S acc = t * K(0);
    for (int n = 0; n < ring; ++n) {
      if (c[n] == 0) continue;
      if constexpr (std::is_same_v<S, double>) {
        acc += c[n] * dex_eval(ring, n, t);
      } else {
        acc = acc + dex(ring, n, t) * c[n];
      }
    }
    return acc;
  }
};
}  // namespace detail

/// sum_{n<N} c_n dex_[N,n](t); matches c_0..c_{N-1}. Uses the first `ring`
/// characteristic numbers; ring defaults to all of them.
template <class T>
Approximant<T> dex_approx(const CharNumbers<T>& c, int ring = 0) {
  detail::require_derivative(c, "dex");
  if (ring <= 0) ring = static_cast<int>(c.values.size());
  if (ring > static_cast<int>(c.values.size())) throw std::invalid_argument("dex: ring larger than available c_n");
  std::vector<T> a(c.values.begin(), c.values.begin() + ring);
  KindParams<T> p;
  p.ring = ring;
  return make_approximant(detail::seq(a, ExpansionKind::dex, p), c.params.x0,
                          detail::DexForm<T>{detail::Coefs<T>(a), ring});
}

/// d^p P(0) for p = 0..pmax with P = sum_{i=2}^{pmax+1} (dex_[i,0] - 1).
inline std::vector<Rational> prime_indicator_P(int pmax) {
  if (pmax < 2) throw std::domain_error("prime_indicator_P: pmax must be >= 2");
  const Jet<Rational> x = Jet<Rational>::variable(Rational(0), pmax);
  Jet<Rational> P = x.zero_like();
  for (int i = 2; i <= pmax + 1; ++i) P = P + (dex(i, 0, x) - Rational(1));
  return P.derivatives();
}

// ---------------------------------------------------------------- nonlinear

/// Omega = Lambda^{-1}.
template <class S>
S apply_inverse_map(NonlinearMap m, const S& u) {
  using std::exp;
  switch (m) {
    case NonlinearMap::identity: return u;
    case NonlinearMap::ln: return exp(u);
    case NonlinearMap::sqrt: return u * u;
    case NonlinearMap::cube:
      if constexpr (std::is_same_v<S, double>) {
        return std::cbrt(u);
      } else {
        using T = typename S::value_type;
        if (u[0] == T(0)) throw evaluation_error("cbrt", "jet with zero constant term");
        const T third = T(1) / T(3);
        if (u[0] < T(0)) return -pow_real(-u, third);
        return pow_real(u, third);
      }
  }
  throw std::logic_error("apply_inverse_map");
}

namespace detail {
template <class T>
struct NonlinearForm {
  Coefs<T> scaled;  // a_n / n!
  NonlinearMap lambda;
  template <class S>
  S operator()(const S& t) const {
    S inner = horner(scaled.template get<S>(), t);
    if constexpr (std::is_same_v<S, double>) {
      if (lambda == NonlinearMap::sqrt && inner < 0) return std::numeric_limits<double>::quiet_NaN();
    }
    return apply_inverse_map(lambda, inner);
  }
};
}  // namespace detail

/// Omega(sum a_n t^n / n!) with a_n supplied directly.
template <class T>
Approximant<T> nonlinear_from_coeffs(const std::vector<T>& a, NonlinearMap lambda, const T& x0) {
  std::vector<T> scaled(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) scaled[n] = a[n] / factorial<T>(n);
  KindParams<T> p;
  p.lambda = lambda;
  return make_approximant(detail::seq(a, ExpansionKind::nonlinear, p), x0,
                          detail::NonlinearForm<T>{detail::Coefs<T>(scaled), lambda});
}

/// a_n = c_n, where c came from the nonlinear family with the same Lambda.
template <class T>
Approximant<T> nonlinear_approx(const CharNumbers<T>& c) {
  if (c.family != CharFamily::nonlinear) throw family_mismatch("nonlinear: needs nonlinear characteristic numbers");
  return nonlinear_from_coeffs(c.values, c.params.lambda, c.params.x0);
}

// ---------------------------------------------------------------- dispatch

/// Builds any derivative-family expansion from its characteristic numbers.
/// Pade uses (pade_m, pade_n) from params; when both are zero it takes
/// m = ceil(N/2), n = N - m, or the nearest nondegenerate split. dex uses a ring of N+1.
template <class T>
Approximant<T> build_derivative_expansion(ExpansionKind kind, const CharNumbers<T>& c,
                                          const KindParams<T>& params = {}) {
  const T& x0 = c.params.x0;
  switch (kind) {
    case ExpansionKind::taylor: return taylor_approx(taylor_coeffs(c), x0);
    case ExpansionKind::nsbf: return nsbf_approx(nsbf_coeffs(c, params.nsbf_strict), x0);
    case ExpansionKind::pade: {
      if (params.pade_m != 0 || params.pade_n != 0) return pade_approx(pade_solve(c, params.pade_m, params.pade_n), x0);
      // Default split: nearest to diagonal whose block is not degenerate
      // (odd or even f skip every other entry of the Pade table).
      const int N = c.order(), m0 = (N + 1) / 2;
      for (int step = 1; step <= 2 * N + 1; ++step) {
        const int m = m0 + (step % 2 ? -1 : 1) * (step / 2);  // m0, m0+1, m0-1, ...
        if (m < 0 || m > N) continue;
        try {
          return pade_approx(pade_solve(c, m, N - m), x0);
        } catch (const std::domain_error&) {
        }
      }
      return pade_approx(pade_solve(c, m0, N - m0), x0);
    }
    case ExpansionKind::pow_sine: return pow_sine_approx(pow_sine_coeffs(c), x0);
    case ExpansionKind::exp_weighted: return exp_weighted_approx(exp_weighted_coeffs(c, params.w, params.q), x0);
    case ExpansionKind::log_powers: return powers_of_g_approx(powers_of_g_coeffs(c, GVariant::log_powers), x0);
    case ExpansionKind::stirling1_g: return powers_of_g_approx(powers_of_g_coeffs(c, GVariant::stirling1_g), x0);
    case ExpansionKind::lambert_w_g: return powers_of_g_approx(powers_of_g_coeffs(c, GVariant::lambert_w_g), x0);
    case ExpansionKind::rational_x_over_x1: return powers_of_g_approx(rational_x1_coeffs(c, params.alpha), x0);
    case ExpansionKind::dirichlet_G: return dirichlet_approx(dirichlet_expansion_coeffs(c, DirichletVariant::G), x0);
    case ExpansionKind::dirichlet_rat1:
      return dirichlet_approx(dirichlet_expansion_coeffs(c, DirichletVariant::rat1), x0);
    case ExpansionKind::dirichlet_rat2:
      return dirichlet_approx(dirichlet_expansion_coeffs(c, DirichletVariant::rat2), x0);
    case ExpansionKind::dex: return dex_approx(c);
    case ExpansionKind::nonlinear: return nonlinear_approx(c);
    default:
      throw family_mismatch(std::string("kind ") + kind_name(kind) + " is not built from derivative numbers");
  }
}

/// Rebuilds an approximant of the same kind from (possibly edited) coefficients.
template <class T>
Approximant<T> approx_from_coeffs(const CoeffSeq<T>& a, const T& x0) {
  switch (a.kind) {
    case ExpansionKind::taylor: return taylor_approx(a, x0);
    case ExpansionKind::nsbf: return nsbf_approx(a, x0);
    case ExpansionKind::pade: return pade_approx(a, x0);
    case ExpansionKind::pow_sine: return pow_sine_approx(a, x0);
    case ExpansionKind::exp_weighted: return exp_weighted_approx(a, x0);
    case ExpansionKind::log_powers:
    case ExpansionKind::stirling1_g:
    case ExpansionKind::lambert_w_g:
    case ExpansionKind::rational_x_over_x1: return powers_of_g_approx(a, x0);
    case ExpansionKind::dirichlet_G:
    case ExpansionKind::dirichlet_rat1:
    case ExpansionKind::dirichlet_rat2: return dirichlet_approx(a, x0);
    case ExpansionKind::dex: {
      CharNumbers<T> c = CharNumbers<T>::from_values(a.values, CharFamily::derivative);
      c.params.x0 = x0;
      return dex_approx(c, a.params.ring);
    }
    case ExpansionKind::nonlinear: return nonlinear_from_coeffs(a.values, a.params.lambda, x0);
    default: throw family_mismatch(std::string("approx_from_coeffs: unsupported kind ") + kind_name(a.kind));
  }
}

}  // namespace charmatch
