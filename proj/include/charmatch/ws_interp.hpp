#pragma once

// Value matching: Lagrange, Newton, rho-generalized interpolation, and the
// generalized Whittaker-Shannon series
//   A(x) = sum_n a_n N(x) sin(pi s(x)) / (s_n (x - x_n)),   x_n = s^-1(n),
// with s_n the slope of lambda(x) = N(x) sin(pi s(x)) at x_n.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "charmatch/expansions.hpp"
#include "charmatch/expr.hpp"
#include "charmatch/framework.hpp"
#include "charmatch/polynomial.hpp"
#include "charmatch/quadrature.hpp"
#include "charmatch/specfun.hpp"

namespace charmatch {

template <class T>
CharNumbers<T> value_chars(const Expr& f, const std::vector<T>& nodes) {
  FamilyParams<T> p;
  p.nodes = nodes;
  std::vector<T> v;
  v.reserve(nodes.size());
  for (const T& x : nodes) v.push_back(f.jet(x, 0)[0]);
  return CharNumbers<T>::from_values(std::move(v), CharFamily::node_values, std::move(p));
}

namespace detail {

template <class T>
void require_distinct(const std::vector<T>& nodes, const char* who) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (nodes[i] == nodes[j]) throw std::invalid_argument(std::string(who) + ": duplicate nodes");
    }
  }
}

template <class T>
void require_values(const CharNumbers<T>& c, const char* who) {
  if (c.family != CharFamily::node_values) throw family_mismatch(std::string(who) + ": needs node values");
  c.validate();
  require_distinct(c.params.nodes, who);
}

}  // namespace detail

/// prod_{k != n} (x - x_k) / (x_n - x_k).
template <class T>
Polynomial<T> lagrange_basis(const std::vector<T>& nodes, std::size_t n) {
  Polynomial<T> p({T(1)});
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (k == n) continue;
    const T den = nodes[n] - nodes[k];
    p = p * Polynomial<T>({T(-nodes[k]) / den, T(1) / den});
  }
  return p;
}

template <class T>
Approximant<T> lagrange_interp(const CharNumbers<T>& c) {
  detail::require_values(c, "lagrange");
  Polynomial<T> p({T(0)});
  for (std::size_t n = 0; n < c.values.size(); ++n) {
    if (c.values[n] == T(0)) continue;
    p = p + lagrange_basis(c.params.nodes, n) * c.values[n];
  }
  Approximant<T> A = Approximant<T>::from_polynomial(p, ExpansionKind::lagrange);
  A.coeffs.values = c.values;
  return A;
}

/// Divided differences f[x_0..x_n].
template <class T>
std::vector<T> divided_differences(const std::vector<T>& nodes, const std::vector<T>& values) {
  detail::require_distinct(nodes, "newton");
  std::vector<T> d = values;
  const std::size_t n = d.size();
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = n - 1; i >= j; --i) {
      d[i] = (d[i] - d[i - 1]) / (nodes[i] - nodes[i - j]);
      if (i == j) break;
    }
  }
  return d;
}

/// sum a_n prod_{i<n} (x - x_i) with a_n the divided differences.
template <class T>
Approximant<T> newton_interp(const CharNumbers<T>& c) {
  detail::require_values(c, "newton");
  const std::vector<T> a = divided_differences(c.params.nodes, c.values);
  Polynomial<T> p({T(0)});
  for (std::size_t n = a.size(); n-- > 0;) {
    p = p * Polynomial<T>({T(-c.params.nodes[n]), T(1)}) + Polynomial<T>({a[n]});
  }
  Approximant<T> A = Approximant<T>::from_polynomial(p, ExpansionKind::newton);
  A.coeffs.values = a;
  return A;
}

namespace detail {
template <class T>
struct RhoForm {
  Expr rho;
  Coefs<T> nodes;
  Coefs<T> weights;  // c_n / prod_{k != n} rho(x_n - x_k)

  template <class S>
  S operator()(const S& x) const {
    using K = scalar_of_t<S>;
    const auto& xs = nodes.template get<S>();
    const auto& w = weights.template get<S>();
    S acc = x * K(0);
    for (std::size_t n = 0; n < xs.size(); ++n) {
      if (w[n] == 0) continue;
      S term = x * K(0) + K(1);
      for (std::size_t k = 0; k < xs.size(); ++k) {
        if (k != n) term = term * rho.evaluate(S(x - xs[k]));
      }
      acc = acc + term * w[n];
    }
    return acc;
  }
};
}  // namespace detail

/// sum_n c_n prod_{k != n} rho(x - x_k) / rho(x_n - x_k).
template <class T>
Approximant<T> rho_interp(const CharNumbers<T>& c, const Expr& rho) {
  detail::require_values(c, "rho");
  const std::vector<T>& x = c.params.nodes;
  std::vector<T> w(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    T den(1);
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (k == n) continue;
      const T r = rho.jet(T(x[n] - x[k]), 0)[0];
      if (r == T(0) || !std::isfinite(to_double(r))) {
        throw std::domain_error("rho_interp: rho vanishes at a node difference");
      }
      den *= r;
    }
    w[n] = c.values[n] / den;
  }
  CoeffSeq<T> s;
  s.values = c.values;
  s.kind = ExpansionKind::rho;
  return make_approximant(s, T(0), detail::RhoForm<T>{rho, detail::Coefs<T>(x), detail::Coefs<T>(w)});
}

// ---------------------------------------------------------------- generalized WS

struct NodeSystem {
  std::string name;
  Expr scale;                 // s(x)
  Expr norm;                  // N(x)
  std::vector<int> indices;   // retained n
  std::vector<double> nodes;  // x_n
  std::vector<double> slopes; // s_n = lambda'(x_n)
  std::vector<double> lam2, lam3;
  std::vector<double> closed_slopes;  // closed-form s_n when known

  Expr lambda() const { return norm * Expr::unary(Expr::Op::sin, Expr::irrational(M_PI, "pi") * scale); }
  std::size_t size() const { return nodes.size(); }
};

/// Builds the system from s, N and a node map n -> s^-1(n); slopes and the second and
/// third derivatives of lambda at the nodes come from jets.
inline NodeSystem make_node_system(std::string name, Expr scale, Expr norm, const std::function<double(int)>& node_of,
                                   std::vector<int> indices,
                                   const std::function<double(int)>& closed_slope = nullptr) {
  NodeSystem ns;
  ns.name = std::move(name);
  ns.scale = std::move(scale);
  ns.norm = std::move(norm);
  ns.indices = std::move(indices);
  const Expr lam = ns.lambda();
  for (int n : ns.indices) {
    const double x = node_of(n);
    const Jet<double> j = lam.jet(x, 3);
    ns.nodes.push_back(x);
    ns.slopes.push_back(j.derivative(1));
    ns.lam2.push_back(j.derivative(2));
    ns.lam3.push_back(j.derivative(3));
    if (closed_slope) ns.closed_slopes.push_back(closed_slope(n));
    if (!(std::abs(ns.slopes.back()) > 0.0) || !std::isfinite(ns.slopes.back())) {
      throw std::domain_error(ns.name + ": zero slope at node n = " + std::to_string(n));
    }
  }
  std::vector<double> sorted = ns.nodes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument(ns.name + ": nodes must be distinct");
  }
  return ns;
}

inline std::vector<int> index_window(int lo, int hi, bool exclude_zero) {
  std::vector<int> out;
  for (int n = lo; n <= hi; ++n) {
    if (!(exclude_zero && n == 0)) out.push_back(n);
  }
  return out;
}

inline double sign_pow(int n) { return n % 2 == 0 ? 1.0 : -1.0; }

/// s(x) = x, N = 1, x_n = n: the classical cardinal series.
inline NodeSystem ws_classical(int N, bool exclude_zero = false) {
  return make_node_system(
      "ws-classical", Expr::variable(), Expr::constant(1.0), [](int n) { return double(n); },
      index_window(-N, N, exclude_zero), [](int n) { return M_PI * sign_pow(n); });
}

inline const std::vector<std::string>& ws_preset_names() {
  static const std::vector<std::string> names{"ws-a", "ws-b", "ws-c", "ws-d", "ws-e", "ws-f"};
  return names;
}

/// Presets ws-a .. ws-f.
inline NodeSystem ws_node_system(const std::string& preset, int N) {
  const Expr x = Expr::variable();
  if (preset == "ws-a" || preset == "a") {
    return make_node_system(
        "ws-a", Expr::parse("x^3"), Expr::constant(1.0), [](int n) { return std::cbrt(double(n)); },
        index_window(-N, N, true),
        [](int n) { return 3.0 * M_PI * std::pow(std::abs(double(n)), 2.0 / 3.0) * sign_pow(n); });
  }
  if (preset == "ws-b" || preset == "b") {
    return make_node_system(
        "ws-b", Expr::parse("tan(x)"), Expr::constant(1.0), [](int n) { return std::atan(double(n)); },
        index_window(-N, N, false), [](int n) { return M_PI * (double(n) * n + 1.0) * sign_pow(n); });
  }
  if (preset == "ws-c" || preset == "c") {
    return make_node_system(
        "ws-c", Expr::parse("exp(x)"), Expr::constant(1.0), [](int n) { return std::log(double(n)); },
        index_window(1, N, false), [](int n) { return M_PI * n * sign_pow(n); });
  }
  if (preset == "ws-d" || preset == "d") {
    return make_node_system(
        "ws-d", Expr::parse("1/x"), Expr::parse("x^2"), [](int n) { return 1.0 / n; }, index_window(-N, N, true),
        [](int n) { return -M_PI * sign_pow(n); });
  }
  if (preset == "ws-e" || preset == "e") {
    return make_node_system(
        "ws-e", Expr::parse("x/(1-x^2)"), Expr::parse("1-x^2"),
        [](int n) { return 2.0 * n / (std::sqrt(4.0 * n * n + 1.0) + 1.0); }, index_window(-N, N, false),
        [](int n) { return M_PI * sign_pow(n) * std::sqrt(4.0 * n * n + 1.0); });
  }
  if (preset == "ws-f" || preset == "f") {
    return make_node_system(
        "ws-f", Expr::parse("x*exp(x^2)"), Expr::constant(1.0),
        [](int n) {
          if (n == 0) return 0.0;
          const double r = std::sqrt(lambert_w0(2.0 * n * n) / 2.0);
          return n > 0 ? r : -r;
        },
        index_window(-N, N, false));
  }
  throw std::invalid_argument("unknown node preset '" + preset + "'");
}

/// The function each preset is demonstrated on.
inline Expr ws_preset_function(const std::string& preset) {
  const std::string p = preset.size() == 1 ? "ws-" + preset : preset;
  if (p == "ws-a") return Expr::parse("1-x^2");
  if (p == "ws-b") return Expr::parse("exp(x)");
  if (p == "ws-c") return Expr::parse("cos(x)");
  if (p == "ws-d") return Expr::parse("ln(x^2+1)");
  if (p == "ws-e") return Expr::parse("sqrt(1-x^2)");
  if (p == "ws-f") return Expr::parse("j0(x)");
  throw std::invalid_argument("unknown node preset '" + preset + "'");
}

inline std::vector<NodeSystem> ws_node_systems(int N = 20) {
  std::vector<NodeSystem> out;
  for (const std::string& name : ws_preset_names()) out.push_back(ws_node_system(name, N));
  return out;
}

inline CharNumbers<double> ws_value_chars(const NodeSystem& ns, const Expr& f) {
  return value_chars<double>(f, ns.nodes);
}

namespace detail {

inline double ws_switch_radius(double xn) { return 1e-6 * (1.0 + std::abs(xn)); }

/// lambda and lambda' at x; near a node both come from the cubic expansion there.
struct LambdaEval {
  double value;
  double slope;
  int near = -1;  // index of the node inside its switch radius, if any
  double d = 0.0;
};

inline LambdaEval lambda_at(const NodeSystem& ns, const Expr& lam, double x) {
  for (std::size_t m = 0; m < ns.size(); ++m) {
    const double d = x - ns.nodes[m];
    if (std::abs(d) < ws_switch_radius(ns.nodes[m])) {
      const double v = ns.slopes[m] * d + ns.lam2[m] * d * d / 2.0 + ns.lam3[m] * d * d * d / 6.0;
      const double s = ns.slopes[m] + ns.lam2[m] * d + ns.lam3[m] * d * d / 2.0;
      return {v, s, static_cast<int>(m), d};
    }
  }
  const Jet<double> j = lam.evaluate(Jet<double>::variable(x, 1));
  return {j[0], j[1]};
}

}  // namespace detail

/// Approximant of the generalized WS series with coefficients a_n = c_n.
inline Approximant<double> ws_build(const NodeSystem& ns, const CharNumbers<double>& c) {
  if (c.family != CharFamily::node_values) throw family_mismatch("ws: needs node values");
  if (c.values.size() != ns.size()) throw std::invalid_argument("ws: one value per node required");
  const Expr lam = ns.lambda();
  Approximant<double> A;
  A.coeffs.values = c.values;
  A.coeffs.kind = ExpansionKind::whittaker_shannon;
  A.point = [ns, lam, a = c.values](double x) {
    const detail::LambdaEval L = detail::lambda_at(ns, lam, x);
    double acc = 0.0;
    for (std::size_t n = 0; n < ns.size(); ++n) {
      if (a[n] == 0.0) continue;
      if (static_cast<int>(n) == L.near) {
        acc += a[n] * (1.0 + ns.lam2[n] * L.d / (2.0 * ns.slopes[n]) + ns.lam3[n] * L.d * L.d / (6.0 * ns.slopes[n]));
      } else {
        acc += a[n] * L.value / (ns.slopes[n] * (x - ns.nodes[n]));
      }
    }
    return acc;
  };
  return A;
}

/// c_n = int_a^{x_n} f.
inline CharNumbers<double> ws_integral_chars(const NodeSystem& ns, const Expr& f, double a,
                                             const Quadrature& quad = Quadrature()) {
  FamilyParams<double> p;
  p.a = a;
  p.nodes = ns.nodes;
  std::vector<double> v;
  for (double xn : ns.nodes) v.push_back(quad.integrate([&](double t) { return f(t); }, a, xn));
  return CharNumbers<double>::from_values(std::move(v), CharFamily::node_integrals, std::move(p));
}

/// Interpolates the primitive F with blocks (x - a)/(x_n - a) K_n(x), K_n the WS term,
/// so F(a) = 0 and F(x_n) = c_n, then returns F' in closed form.
inline Approximant<double> ws_integral_match(const NodeSystem& ns, const CharNumbers<double>& c) {
  if (c.family != CharFamily::node_integrals) throw family_mismatch("ws-integral: needs node integrals");
  if (c.values.size() != ns.size()) throw std::invalid_argument("ws-integral: one value per node required");
  const double a = c.params.a;
  for (double xn : ns.nodes) {
    if (xn == a) throw std::invalid_argument("ws-integral: base point a coincides with a node");
  }
  const Expr lam = ns.lambda();
  const double la = lam(a);
  if (!std::isfinite(la)) throw std::domain_error("ws-integral: lambda undefined at a");
  Approximant<double> A;
  A.coeffs.values = c.values;
  A.coeffs.kind = ExpansionKind::ws_integral;
  A.coeffs.params.a = a;
  A.point = [ns, lam, a, cv = c.values](double x) {
    const detail::LambdaEval L = detail::lambda_at(ns, lam, x);
    double acc = 0.0;
    for (std::size_t n = 0; n < ns.size(); ++n) {
      if (cv[n] == 0.0) continue;
      const double s = ns.slopes[n];
      const double h = ns.nodes[n] - a;
      double K, dK;
      if (static_cast<int>(n) == L.near) {
        K = 1.0 + ns.lam2[n] / (2.0 * s) * L.d + ns.lam3[n] / (6.0 * s) * L.d * L.d;
        dK = ns.lam2[n] / (2.0 * s) + ns.lam3[n] / (3.0 * s) * L.d;
      } else {
        const double d = x - ns.nodes[n];
        K = L.value / (s * d);
        dK = (L.slope * d - L.value) / (s * d * d);
      }
      acc += cv[n] * (K + (x - a) * dK) / h;
    }
    return acc;
  };
  return A;
}

/// The primitive interpolant F itself (F(a) = 0, F(x_n) = c_n).
inline std::function<double(double)> ws_integral_primitive(const NodeSystem& ns, const CharNumbers<double>& c) {
  const Expr lam = ns.lambda();
  const double a = c.params.a;
  return [ns, lam, a, cv = c.values](double x) {
    const detail::LambdaEval L = detail::lambda_at(ns, lam, x);
    double acc = 0.0;
    for (std::size_t n = 0; n < ns.size(); ++n) {
      const double s = ns.slopes[n];
      const double K = static_cast<int>(n) == L.near ? 1.0 + ns.lam2[n] * L.d / (2.0 * s) + ns.lam3[n] * L.d * L.d / (6.0 * s)
                                                     : L.value / (s * (x - ns.nodes[n]));
      acc += cv[n] * (x - a) / (ns.nodes[n] - a) * K;
    }
    return acc;
  };
}

struct GibbsReport {
  int n_small = 20;
  int n_large = 100;
  double err_small = 0.0;
  double err_large = 0.0;
  bool decreased() const { return err_large < err_small; }
};

/// Max |A - f| over 0.9 <= |x| <= 1 - 1e-4 for preset ws-e at two orders.
inline GibbsReport ws_gibbs_report(int n_small = 20, int n_large = 100, int points = 1000) {
  const Expr f = ws_preset_function("ws-e");
  GibbsReport r;
  r.n_small = n_small;
  r.n_large = n_large;
  auto sup = [&](int N) {
    const NodeSystem ns = ws_node_system("ws-e", N);
    const Approximant<double> A = ws_build(ns, ws_value_chars(ns, f));
    double e = 0.0;
    for (int i = 0; i < points; ++i) {
      const double x = 0.9 + (1.0 - 1e-4 - 0.9) * i / (points - 1);
      e = std::max({e, std::abs(A(x) - f(x)), std::abs(A(-x) - f(-x))});
    }
    return e;
  };
  r.err_small = sup(n_small);
  r.err_large = sup(n_large);
  return r;
}

}  // namespace charmatch
