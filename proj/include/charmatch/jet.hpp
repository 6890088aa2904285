#pragma once

// Truncated power series at a point. coeffs[n] = f^(n)(center) / n!.
// The same recurrences run over double and over Rational; in the exact case
// an elementary function only succeeds where its value at the center is
// rational (exp(0) = 1, ln(1) = 0, sqrt(4) = 2, ...).

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "charmatch/rational.hpp"
#include "charmatch/specfun.hpp"

namespace charmatch {

/// A primitive was applied outside the domain where its jet exists.
class evaluation_error : public std::domain_error {
 public:
  evaluation_error(const std::string& primitive, const std::string& why)
      : std::domain_error(primitive + ": " + why) {}
};

template <class T>
class Jet {
 public:
  using value_type = T;

  Jet(T center, std::vector<T> coeffs) : center_(std::move(center)), c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("jet needs at least one coefficient");
  }

  static Jet constant(const T& value, const T& center, int order) {
    std::vector<T> c(static_cast<std::size_t>(order) + 1, T(0));
    c[0] = value;
    return Jet(center, std::move(c));
  }
  /// The identity function x at `center`.
  static Jet variable(const T& center, int order) {
    std::vector<T> c(static_cast<std::size_t>(order) + 1, T(0));
    c[0] = center;
    if (order >= 1) c[1] = T(1);
    return Jet(center, std::move(c));
  }

  const T& center() const { return center_; }
  int order() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<T>& coeffs() const { return c_; }
  const T& operator[](std::size_t k) const { return c_[k]; }
  T& operator[](std::size_t k) { return c_[k]; }
  const T& value() const { return c_[0]; }

  /// n-th derivative at the center, n! * coeffs[n].
  T derivative(int n) const { return c_[static_cast<std::size_t>(n)] * factorial<T>(static_cast<unsigned>(n)); }
  std::vector<T> derivatives() const {
    std::vector<T> d(c_.size());
    for (std::size_t n = 0; n < c_.size(); ++n) d[n] = derivative(static_cast<int>(n));
    return d;
  }

  Jet zero_like() const { return constant(T(0), center_, order()); }

  Jet& operator+=(const Jet& o) {
    check_compatible(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_compatible(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }
  Jet& operator+=(const T& s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(const T& s) {
    c_[0] -= s;
    return *this;
  }
  Jet& operator*=(const T& s) {
    for (T& v : c_) v *= s;
    return *this;
  }
  Jet& operator/=(const T& s) {
    for (T& v : c_) v /= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    for (T& v : a.c_) v = -v;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    const std::size_t n = a.c_.size();
    std::vector<T> r(n, T(0));
    for (std::size_t i = 0; i < n; ++i) {
      if (a.c_[i] == T(0)) continue;
      for (std::size_t j = 0; i + j < n; ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Jet(a.center_, std::move(r));
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    if (b.c_[0] == T(0)) throw evaluation_error("division", "jet with zero constant term");
    const std::size_t n = a.c_.size();
    std::vector<T> q(n, T(0));
    for (std::size_t k = 0; k < n; ++k) {
      T s = a.c_[k];
      for (std::size_t j = 1; j <= k; ++j) s -= b.c_[j] * q[k - j];
      q[k] = s / b.c_[0];
    }
    return Jet(a.center_, std::move(q));
  }

  friend Jet operator+(Jet a, const T& s) { return a += s; }
  friend Jet operator+(const T& s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, const T& s) { return a -= s; }
  friend Jet operator-(const T& s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, const T& s) { return a *= s; }
  friend Jet operator*(const T& s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, const T& s) { return a /= s; }
  friend Jet operator/(const T& s, const Jet& a) { return constant(s, a.center_, a.order()) / a; }

  void check_compatible(const Jet& o) const {
    if (o.c_.size() != c_.size()) throw std::invalid_argument("jet order mismatch");
    if (!(o.center_ == center_)) throw std::invalid_argument("jet center mismatch");
  }

 private:
  T center_;
  std::vector<T> c_;
};

namespace detail {

/// Builds a jet from its derivative jet d (of f') and the value f(center).
template <class T>
Jet<T> integrate_derivative(const T& value, const Jet<T>& d, const Jet<T>& like) {
  Jet<T> r = like.zero_like();
  r[0] = value;
  for (int n = 1; n <= like.order(); ++n) r[n] = d[n - 1] / T(n);
  return r;
}

template <class T>
Jet<T> derivative_jet(const Jet<T>& u) {
  Jet<T> d = u.zero_like();
  for (int n = 0; n < u.order(); ++n) d[n] = u[n + 1] * T(n + 1);
  return d;
}

}  // namespace detail

template <class T>
Jet<T> exp(const Jet<T>& u) {
  Jet<T> e = u.zero_like();
  e[0] = scalar_ops<T>::exp(u[0]);
  for (int n = 1; n <= u.order(); ++n) {
    T s(0);
    for (int k = 1; k <= n; ++k) s += T(k) * u[k] * e[n - k];
    e[n] = s / T(n);
  }
  return e;
}

template <class T>
Jet<T> log(const Jet<T>& u) {
  if (!(u[0] > T(0))) throw evaluation_error("ln", "jet with nonpositive constant term");
  Jet<T> l = u.zero_like();
  l[0] = scalar_ops<T>::log(u[0]);
  for (int n = 1; n <= u.order(); ++n) {
    T s(0);
    for (int k = 1; k < n; ++k) s += T(k) * l[k] * u[n - k];
    l[n] = (u[n] - s / T(n)) / u[0];
  }
  return l;
}

template <class T>
std::pair<Jet<T>, Jet<T>> sincos(const Jet<T>& u) {
  Jet<T> s = u.zero_like(), c = u.zero_like();
  s[0] = scalar_ops<T>::sin(u[0]);
  c[0] = scalar_ops<T>::cos(u[0]);
  for (int n = 1; n <= u.order(); ++n) {
    T ss(0), cc(0);
    for (int k = 1; k <= n; ++k) {
      ss += T(k) * u[k] * c[n - k];
      cc += T(k) * u[k] * s[n - k];
    }
    s[n] = ss / T(n);
    c[n] = -cc / T(n);
  }
  return {s, c};
}

template <class T>
Jet<T> sin(const Jet<T>& u) { return sincos(u).first; }
template <class T>
Jet<T> cos(const Jet<T>& u) { return sincos(u).second; }
template <class T>
Jet<T> tan(const Jet<T>& u) {
  auto [s, c] = sincos(u);
  return s / c;
}

template <class T>
Jet<T> sqrt(const Jet<T>& u) {
  if (!(u[0] > T(0))) throw evaluation_error("sqrt", "jet with nonpositive constant term");
  Jet<T> r = u.zero_like();
  r[0] = scalar_ops<T>::sqrt(u[0]);
  for (int n = 1; n <= u.order(); ++n) {
    T s(0);
    for (int k = 1; k < n; ++k) s += r[k] * r[n - k];
    r[n] = (u[n] - s) / (T(2) * r[0]);
  }
  return r;
}

/// u^r for a real exponent; needs a positive constant term.
template <class T>
Jet<T> pow_real(const Jet<T>& u, const T& r) {
  if (!(u[0] > T(0))) throw evaluation_error("pow", "jet with nonpositive constant term");
  Jet<T> p = u.zero_like();
  p[0] = scalar_ops<T>::pow(u[0], r);
  for (int n = 1; n <= u.order(); ++n) {
    T s(0);
    for (int k = 1; k <= n; ++k) s += (r * T(k) - T(n - k)) * u[k] * p[n - k];
    p[n] = s / (T(n) * u[0]);
  }
  return p;
}

template <class T>
Jet<T> pow(const Jet<T>& u, int k) {
  if (k < 0) {
    if (u[0] == T(0)) throw evaluation_error("pow", "negative power of a jet with zero constant term");
    return T(1) / pow(u, -k);
  }
  Jet<T> result = Jet<T>::constant(T(1), u.center(), u.order());
  Jet<T> base = u;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

template <class T>
Jet<T> atan(const Jet<T>& u) {
  Jet<T> du = detail::derivative_jet(u);
  Jet<T> d = du / (T(1) + u * u);
  return detail::integrate_derivative(scalar_ops<T>::atan(u[0]), d, u);
}

/// Composition f(g): `outer` is the jet of f at g(center), `inner` the jet of g.
template <class T>
Jet<T> compose(const Jet<T>& outer, const Jet<T>& inner) {
  if (!(outer.center() == inner[0])) {
    throw std::invalid_argument("jet_compose: outer center must equal the inner value");
  }
  if (outer.order() != inner.order()) throw std::invalid_argument("jet_compose: order mismatch");
  Jet<T> h = inner;
  h[0] = T(0);
  Jet<T> acc = Jet<T>::constant(outer[outer.order()], inner.center(), inner.order());
  for (int k = outer.order(); k-- > 0;) acc = acc * h + outer[k];
  return acc;
}

/// J_n(u). Derivatives of J_n at u0 follow
/// J_n^(k) = 2^-k sum_j (-1)^j C(k,j) J_{n-k+2j}.
template <class T>
Jet<T> bessel_j(unsigned n, const Jet<T>& u) {
  const int order = u.order();
  auto jn = [&](long long m) -> T {
    const unsigned am = static_cast<unsigned>(m < 0 ? -m : m);
    T v = bessel_j(am, u[0]);
    return (m < 0 && (am % 2 == 1)) ? T(-v) : v;
  };
  std::vector<T> outer(static_cast<std::size_t>(order) + 1);
  for (int k = 0; k <= order; ++k) {
    T s(0);
    for (int j = 0; j <= k; ++j) {
      T term = binomial<T>(k, j) * jn(static_cast<long long>(n) - k + 2 * j);
      s += (j % 2 == 0) ? term : T(-term);
    }
    outer[k] = s / (gpow(T(2), k) * factorial<T>(static_cast<unsigned>(k)));
  }
  return compose(Jet<T>(u[0], std::move(outer)), u);
}

/// Principal Lambert W of a jet by Newton iteration in the jet ring;
/// each step doubles the number of correct coefficients.
template <class T>
Jet<T> lambert_w(const Jet<T>& u) {
  T w0;
  if constexpr (is_exact_v<T>) {
    if (u[0] != T(0)) throw inexact_error("W at nonzero rational argument");
    w0 = T(0);
  } else {
    w0 = lambert_w0(u[0]);
    if (w0 == T(-1) && u.order() > 0) throw evaluation_error("lambert_w", "branch point");
  }
  Jet<T> w = Jet<T>::constant(w0, u.center(), u.order());
  int steps = 1;
  for (int good = 1; good <= u.order(); good *= 2) ++steps;
  for (int it = 0; it < steps; ++it) {
    Jet<T> ew = exp(w);
    if constexpr (!is_exact_v<T>) ew[0] = std::exp(w[0]);
    Jet<T> f = w * ew - u;
    w = w - f / (ew * (w + T(1)));
    w[0] = w0;
  }
  return w;
}

}  // namespace charmatch
