#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "charmatch/rational.hpp"

namespace charmatch {

/// Dense univariate polynomial, coefficients in ascending powers.
template <class T>
class Polynomial {
 public:
  Polynomial() : c_{T(0)} {}
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(T(0));
  }
  Polynomial(std::initializer_list<T> coeffs) : Polynomial(std::vector<T>(coeffs)) {}

  static Polynomial monomial(std::size_t k, T scale = T(1)) {
    std::vector<T> c(k + 1, T(0));
    c[k] = scale;
    return Polynomial(std::move(c));
  }

  /// Number of stored coefficients minus one; trailing zeros count.
  std::size_t size_degree() const { return c_.size() - 1; }

  std::size_t degree() const {
    std::size_t d = c_.size() - 1;
    while (d > 0 && c_[d] == T(0)) --d;
    return d;
  }

  const std::vector<T>& coeffs() const { return c_; }
  const T& operator[](std::size_t k) const { return c_[k]; }
  T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }

  /// Horner evaluation over any ring S that accepts T scalars.
  template <class S>
  S evaluate(const S& x) const {
    S acc = x * T(0);
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
    return acc;
  }

  double operator()(double x) const {
    double acc = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + to_double(c_[k]);
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() == 1) return Polynomial();
    std::vector<T> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * T(static_cast<long long>(k));
    return Polynomial(std::move(d));
  }

  Polynomial antiderivative() const {
    std::vector<T> d(c_.size() + 1, T(0));
    for (std::size_t k = 0; k < c_.size(); ++k) d[k + 1] = c_[k] / T(static_cast<long long>(k + 1));
    return Polynomial(std::move(d));
  }

  T integrate(const T& a, const T& b) const {
    Polynomial p = antiderivative();
    return p.evaluate(b) - p.evaluate(a);
  }

  /// p(scale * x + shift)
  Polynomial compose_affine(const T& scale, const T& shift) const {
    Polynomial inner({shift, scale});
    Polynomial result({T(0)});
    for (std::size_t k = c_.size(); k-- > 0;) result = result * inner + Polynomial({c_[k]});
    return result;
  }

  template <class D>
  Polynomial<D> cast() const {
    std::vector<D> out;
    out.reserve(c_.size());
    for (const T& v : c_) {
      if constexpr (std::is_same_v<D, double>) {
        out.push_back(to_double(v));
      } else {
        out.push_back(D(v));
      }
    }
    return Polynomial<D>(std::move(out));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    return a + b * T(-1);
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == T(0)) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const Polynomial& a, const T& s) {
    std::vector<T> r = a.c_;
    for (T& v : r) v *= s;
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const T& s, const Polynomial& a) { return a * s; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    std::size_t n = std::max(a.c_.size(), b.c_.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (a.coeff(k) != b.coeff(k)) return false;
    }
    return true;
  }

 private:
  std::vector<T> c_;
};

}  // namespace charmatch
