#pragma once

// Characteristic numbers, coefficient sequences, approximants, triangular
// solving and the matching verifier.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "charmatch/expr.hpp"
#include "charmatch/jet.hpp"
#include "charmatch/polynomial.hpp"
#include "charmatch/quadrature.hpp"
#include "charmatch/rational.hpp"

namespace charmatch {

/// An approximant was measured with functionals it was not built from.
class family_mismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class CharFamily {
  derivative,           // c_n = f^(n)(x0)
  moment,               // c_n = int_a^b x^n f
  higher_integral,      // c_n = int_a^b (b-t)^(n-1) f(t) dt / (n-1)!, n >= 1
  endpoint_difference,  // c_n = f^(n-1)(b) - f^(n-1)(a); c_0 = f(anchor) or int_a^b f
  node_values,          // c_n = f(x_n)
  node_integrals,       // c_n = int_a^{x_n} f
  nonlinear,            // c_n = d^n Lambda(f) at x0
  projection,           // c_n = <v_n, f> / <v_n, v_n>
};

enum class NonlinearMap { identity, ln, sqrt, cube };
enum class ProjectionBasis { fourier, legendre };

inline const char* family_name(CharFamily f) {
  switch (f) {
    case CharFamily::derivative: return "derivative";
    case CharFamily::moment: return "moment";
    case CharFamily::higher_integral: return "higher_integral";
    case CharFamily::endpoint_difference: return "endpoint_difference";
    case CharFamily::node_values: return "node_values";
    case CharFamily::node_integrals: return "node_integrals";
    case CharFamily::nonlinear: return "nonlinear";
    case CharFamily::projection: return "projection";
  }
  return "?";
}

inline const char* map_name(NonlinearMap m) {
  switch (m) {
    case NonlinearMap::identity: return "identity";
    case NonlinearMap::ln: return "ln";
    case NonlinearMap::sqrt: return "sqrt";
    case NonlinearMap::cube: return "cube";
  }
  return "?";
}

inline NonlinearMap parse_map(const std::string& name) {
  if (name == "identity" || name == "id") return NonlinearMap::identity;
  if (name == "ln" || name == "log") return NonlinearMap::ln;
  if (name == "sqrt") return NonlinearMap::sqrt;
  if (name == "cube") return NonlinearMap::cube;
  throw std::invalid_argument("unknown nonlinear map '" + name + "'");
}

/// Lambda applied in the jet ring.
template <class T>
Jet<T> apply_map(NonlinearMap m, const Jet<T>& u) {
  switch (m) {
    case NonlinearMap::identity: return u;
    case NonlinearMap::ln: return log(u);
    case NonlinearMap::sqrt: return sqrt(u);
    case NonlinearMap::cube: return u * u * u;
  }
  throw std::logic_error("apply_map");
}

template <class T>
struct FamilyParams {
  T x0 = T(0);
  T a = T(-1);
  T b = T(1);
  std::vector<T> nodes;
  NonlinearMap lambda = NonlinearMap::identity;
  std::optional<T> anchor;
  ProjectionBasis basis = ProjectionBasis::legendre;
};

template <class T>
struct CharNumbers {
  std::vector<T> values;  // values[n] = c_n; entries below first_index are unused
  CharFamily family = CharFamily::derivative;
  FamilyParams<T> params;
  int first_index = 0;

  int order() const { return static_cast<int>(values.size()) - 1; }

  void validate() const {
    if (values.empty()) throw std::invalid_argument("characteristic numbers: empty sequence");
    switch (family) {
      case CharFamily::moment:
      case CharFamily::higher_integral:
      case CharFamily::endpoint_difference:
        if (!(params.a < params.b)) throw std::invalid_argument("characteristic numbers: interval needs a < b");
        break;
      case CharFamily::node_values:
      case CharFamily::node_integrals:
        if (params.nodes.size() != values.size()) {
          throw std::invalid_argument("characteristic numbers: one value per node required");
        }
        break;
      default: break;
    }
  }

  /// c_n = f^(n)(x0) for n = 0..N.
  static CharNumbers derivative(const Expr& f, const T& x0, int order) {
    CharNumbers c;
    c.values = f.jet(x0, order).derivatives();
    c.family = CharFamily::derivative;
    c.params.x0 = x0;
    return c;
  }

  /// c_n = d^n Lambda(f(x)) / dx^n at x0.
  static CharNumbers nonlinear(const Expr& f, NonlinearMap lambda, const T& x0, int order) {
    CharNumbers c;
    c.values = apply_map(lambda, f.jet(x0, order)).derivatives();
    c.family = CharFamily::nonlinear;
    c.params.x0 = x0;
    c.params.lambda = lambda;
    return c;
  }

  static CharNumbers from_values(std::vector<T> values, CharFamily family, FamilyParams<T> params = {}) {
    CharNumbers c;
    c.values = std::move(values);
    c.family = family;
    c.params = std::move(params);
    c.first_index = family == CharFamily::higher_integral ? 1 : 0;
    return c;
  }
};

enum class ExpansionKind {
  taylor,
  nsbf,
  pade,
  pow_sine,
  exp_weighted,
  log_powers,
  rational_x_over_x1,
  stirling1_g,
  lambert_w_g,
  dirichlet_G,
  dirichlet_rat1,
  dirichlet_rat2,
  dex,
  nonlinear,
  legendre_moment,
  fourier,
  legendre_fourier,
  higher_integral,
  bernoulli,
  lagrange,
  newton,
  rho,
  whittaker_shannon,
  ws_integral,
};

struct KindInfo {
  ExpansionKind kind;
  const char* name;
  CharFamily family;
  bool triangular;
  bool delta;
};

inline const std::vector<KindInfo>& kind_table() {
  static const std::vector<KindInfo> table = {
      {ExpansionKind::taylor, "taylor", CharFamily::derivative, true, true},
      {ExpansionKind::nsbf, "nsbf", CharFamily::derivative, true, false},
      {ExpansionKind::pade, "pade", CharFamily::derivative, false, false},
      {ExpansionKind::pow_sine, "pow-sine", CharFamily::derivative, true, false},
      {ExpansionKind::exp_weighted, "exp-weighted", CharFamily::derivative, true, false},
      {ExpansionKind::log_powers, "log-powers", CharFamily::derivative, true, false},
      {ExpansionKind::rational_x_over_x1, "newpade", CharFamily::derivative, true, false},
      {ExpansionKind::stirling1_g, "stirling1-g", CharFamily::derivative, true, false},
      {ExpansionKind::lambert_w_g, "lambert-w-g", CharFamily::derivative, true, false},
      {ExpansionKind::dirichlet_G, "dirichlet-g", CharFamily::derivative, true, false},
      {ExpansionKind::dirichlet_rat1, "dirichlet-rat1", CharFamily::derivative, true, false},
      {ExpansionKind::dirichlet_rat2, "dirichlet-rat2", CharFamily::derivative, true, false},
      {ExpansionKind::dex, "dex", CharFamily::derivative, true, true},
      {ExpansionKind::nonlinear, "nonlinear", CharFamily::nonlinear, true, true},
      {ExpansionKind::legendre_moment, "legendre-moment", CharFamily::moment, true, false},
      {ExpansionKind::fourier, "fourier", CharFamily::projection, true, true},
      {ExpansionKind::legendre_fourier, "legendre-fourier", CharFamily::projection, true, true},
      {ExpansionKind::higher_integral, "higher-integral", CharFamily::higher_integral, true, false},
      {ExpansionKind::bernoulli, "bernoulli", CharFamily::endpoint_difference, true, true},
      {ExpansionKind::lagrange, "lagrange", CharFamily::node_values, true, true},
      {ExpansionKind::newton, "newton", CharFamily::node_values, true, false},
      {ExpansionKind::rho, "rho", CharFamily::node_values, true, true},
      {ExpansionKind::whittaker_shannon, "ws", CharFamily::node_values, true, true},
      {ExpansionKind::ws_integral, "ws-integral", CharFamily::node_integrals, true, false},
  };
  return table;
}

inline const KindInfo& kind_info(ExpansionKind k) {
  for (const KindInfo& info : kind_table()) {
    if (info.kind == k) return info;
  }
  throw std::logic_error("kind_info: unregistered kind");
}

inline const char* kind_name(ExpansionKind k) { return kind_info(k).name; }
inline CharFamily native_family(ExpansionKind k) { return kind_info(k).family; }
inline bool is_triangular(ExpansionKind k) { return kind_info(k).triangular; }
inline bool is_delta(ExpansionKind k) { return kind_info(k).delta; }

/// Case-insensitive lookup that ignores '-' and '_'.
inline std::optional<ExpansionKind> parse_kind(const std::string& text) {
  auto norm = [](const std::string& s) {
    std::string out;
    for (char ch : s) {
      if (ch == '-' || ch == '_') continue;
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    return out;
  };
  const std::string key = norm(text);
  for (const KindInfo& info : kind_table()) {
    if (norm(info.name) == key) return info.kind;
  }
  if (key == "rationalxoverx1") return ExpansionKind::rational_x_over_x1;
  if (key == "powsines" || key == "powersofsine") return ExpansionKind::pow_sine;
  if (key == "whittakershannon") return ExpansionKind::whittaker_shannon;
  if (key == "moment") return ExpansionKind::legendre_moment;
  return std::nullopt;
}

template <class T>
struct KindParams {
  T w = T(0);
  int q = 1;
  T alpha = T(-1);
  int pade_m = 0;
  int pade_n = 0;
  int ring = 1;
  NonlinearMap lambda = NonlinearMap::identity;
  bool nsbf_strict = false;
  T a = T(-1);
  T b = T(1);
  std::optional<T> anchor;
};

template <class T>
struct CoeffSeq {
  std::vector<T> values;
  ExpansionKind kind = ExpansionKind::taylor;
  KindParams<T> params;

  int order() const { return static_cast<int>(values.size()) - 1; }
  const T& operator[](std::size_t n) const { return values[n]; }
};

/// Lifts a coefficient into the evaluation ring S (double or Jet<T>).
template <class S, class T>
auto lift(const T& v) {
  if constexpr (std::is_same_v<S, double>) {
    return to_double(v);
  } else {
    return v;
  }
}

/// An evaluable expansion. Point evaluation is in double; the jet route
/// carries the expansion exactly when T is Rational.
template <class T>
struct Approximant {
  CoeffSeq<T> coeffs;
  T x0 = T(0);
  std::function<double(double)> point;
  std::function<Jet<T>(const Jet<T>&)> jet_fn;
  std::optional<Polynomial<T>> poly;  // closed form in x when the approximant is a polynomial
  std::function<bool(double)> in_domain;
  std::string domain_desc = "all reals";
  double residual_floor = 1e-12;

  ExpansionKind kind() const { return coeffs.kind; }

  double operator()(double x) const {
    if (in_domain && !in_domain(x)) {
      throw std::domain_error(std::string(kind_name(kind())) + ": x outside " + domain_desc);
    }
    return point(x);
  }

  /// Jet of the approximant at `center`.
  Jet<T> jet(const T& center, int order) const {
    Jet<T> x = Jet<T>::variable(center, order);
    if (jet_fn) return jet_fn(x);
    if (poly) return poly->evaluate(x);
    throw std::logic_error(std::string(kind_name(kind())) + ": no jet evaluation available");
  }

  static Approximant from_polynomial(Polynomial<T> p, ExpansionKind kind = ExpansionKind::taylor) {
    Approximant a;
    a.coeffs.kind = kind;
    a.coeffs.values = p.coeffs();
    a.point = [p](double x) { return p(x); };
    a.poly = std::move(p);
    return a;
  }
};

/// Wraps a form object with `template<class S> S operator()(const S& t)`,
/// t = x - x0, into an Approximant.
template <class T, class Form>
Approximant<T> make_approximant(CoeffSeq<T> coeffs, const T& x0, Form form) {
  Approximant<T> a;
  a.coeffs = std::move(coeffs);
  a.x0 = x0;
  const double x0d = to_double(x0);
  a.point = [form, x0d](double x) { return form(x - x0d); };
  a.jet_fn = [form, x0](const Jet<T>& x) { return form(x - x0); };
  return a;
}

/// Lower-triangular matrix, row n holds entries m = 0..n.
template <class T>
class TriMatrix {
 public:
  explicit TriMatrix(int order) : rows_(static_cast<std::size_t>(order) + 1) {
    for (std::size_t n = 0; n < rows_.size(); ++n) rows_[n].assign(n + 1, T(0));
  }
  int order() const { return static_cast<int>(rows_.size()) - 1; }
  const T& at(int n, int m) const { return rows_.at(n).at(m); }
  T& at(int n, int m) { return rows_.at(n).at(m); }

  std::vector<T> multiply(const std::vector<T>& t) const {
    std::vector<T> c(rows_.size(), T(0));
    for (std::size_t n = 0; n < rows_.size(); ++n) {
      for (std::size_t m = 0; m <= n; ++m) c[n] += rows_[n][m] * t[m];
    }
    return c;
  }

 private:
  std::vector<std::vector<T>> rows_;
};

/// Solves sum_{m<=n} T[n][m] t_m = c_n by forward substitution.
template <class T>
std::vector<T> tri_forward_solve(const TriMatrix<T>& m, const std::vector<T>& c) {
  if (static_cast<int>(c.size()) < m.order() + 1) throw std::invalid_argument("tri_forward_solve: too few values");
  std::vector<T> t(static_cast<std::size_t>(m.order()) + 1, T(0));
  for (int n = 0; n <= m.order(); ++n) {
    if (m.at(n, n) == T(0)) {
      throw std::domain_error("dependent triangular system: zero diagonal at " + std::to_string(n));
    }
    T s = c[n];
    for (int k = 0; k < n; ++k) s -= m.at(n, k) * t[k];
    t[n] = s / m.at(n, n);
  }
  return t;
}

namespace detail {

/// int_a^b w(x) A(x) dx with w a polynomial weight, exact when possible.
template <class T>
T weighted_integral(const Approximant<T>& A, const Polynomial<T>& weight, const T& a, const T& b,
                    const Quadrature& quad) {
  if (A.poly) return (weight * *A.poly).integrate(a, b);
  const Polynomial<double> wd = weight.template cast<double>();
  const double v = quad.integrate([&](double x) { return wd(x) * A.point(x); }, to_double(a), to_double(b));
  return T(v);
}

template <class T>
T point_value(const Approximant<T>& A, const T& x) {
  if (A.poly) return A.poly->evaluate(x);
  if constexpr (is_exact_v<T>) {
    if (A.jet_fn) {
      try {
        return A.jet(x, 0)[0];
      } catch (const inexact_error&) {
      }
    }
  }
  return T(A.point(to_double(x)));
}

}  // namespace detail

/// Applies the functionals of `family` to A, returning C_0(A)..C_N(A).
template <class T>
std::vector<T> measure(const Approximant<T>& A, CharFamily family, const FamilyParams<T>& p, int order,
                       int first_index = 0, const Quadrature& quad = Quadrature()) {
  std::vector<T> out(static_cast<std::size_t>(order) + 1, T(0));
  switch (family) {
    case CharFamily::derivative: {
      out = A.jet(p.x0, order).derivatives();
      break;
    }
    case CharFamily::nonlinear: {
      out = apply_map(p.lambda, A.jet(p.x0, order)).derivatives();
      break;
    }
    case CharFamily::moment: {
      for (int n = 0; n <= order; ++n) {
        out[n] = detail::weighted_integral(A, Polynomial<T>::monomial(n), p.a, p.b, quad);
      }
      break;
    }
    case CharFamily::higher_integral: {
      for (int n = std::max(first_index, 1); n <= order; ++n) {
        Polynomial<T> w({T(1)});
        const Polynomial<T> lin({p.b, T(-1)});
        for (int k = 1; k < n; ++k) w = w * lin;
        w = w * (T(1) / factorial<T>(n - 1));
        out[n] = detail::weighted_integral(A, w, p.a, p.b, quad);
      }
      break;
    }
    case CharFamily::endpoint_difference: {
      if (p.anchor) {
        out[0] = detail::point_value(A, *p.anchor);
      } else {
        out[0] = detail::weighted_integral(A, Polynomial<T>({T(1)}), p.a, p.b, quad);
      }
      if (order >= 1) {
        if (A.poly) {
          Polynomial<T> d = *A.poly;
          for (int n = 1; n <= order; ++n) {
            out[n] = d.evaluate(p.b) - d.evaluate(p.a);
            d = d.derivative();
          }
        } else {
          const std::vector<T> db = A.jet(p.b, order - 1).derivatives();
          const std::vector<T> da = A.jet(p.a, order - 1).derivatives();
          for (int n = 1; n <= order; ++n) out[n] = db[n - 1] - da[n - 1];
        }
      }
      break;
    }
    case CharFamily::node_values: {
      if (p.nodes.size() < out.size()) throw std::invalid_argument("measure: fewer nodes than values");
      for (int n = 0; n <= order; ++n) out[n] = detail::point_value(A, p.nodes[n]);
      break;
    }
    case CharFamily::node_integrals: {
      if (p.nodes.size() < out.size()) throw std::invalid_argument("measure: fewer nodes than values");
      for (int n = 0; n <= order; ++n) {
        out[n] = detail::weighted_integral(A, Polynomial<T>({T(1)}), p.a, p.nodes[n], quad);
      }
      break;
    }
    case CharFamily::projection: {
      if (p.basis == ProjectionBasis::legendre) {
        for (int n = 0; n <= order; ++n) {
          const Polynomial<T> pn = legendre_coeffs(n).template cast<T>();
          out[n] = detail::weighted_integral(A, pn, T(-1), T(1), quad) * T(2 * n + 1) / T(2);
        }
      } else {
        for (int n = 0; n <= order; ++n) {
          double ip, norm;
          if (n == 0) {
            ip = quad.integrate([&](double x) { return A.point(x) / std::sqrt(2.0); }, -M_PI, M_PI);
            norm = M_PI;
          } else {
            const double k = (n % 2 == 1) ? (n + 1) / 2.0 : n / 2.0;
            const bool odd = n % 2 == 1;
            ip = quad.integrate([&](double x) { return (odd ? std::sin(k * x) : std::cos(k * x)) * A.point(x); },
                                -M_PI, M_PI);
            norm = M_PI;
          }
          out[n] = T(ip / norm);
        }
      }
      break;
    }
  }
  return out;
}

struct VerifyOptions {
  double tol = 1e-9;
  double floor = 1e-12;
  Quadrature quad = Quadrature();
};

struct VerifyReport {
  std::string kind;
  int order = 0;
  std::vector<double> residuals;
  double max_residual = 0.0;
  bool pass = true;
};

inline void to_json(nlohmann::json& j, const VerifyReport& r) {
  j = nlohmann::json{{"kind", r.kind},
                     {"order", r.order},
                     {"residuals", r.residuals},
                     {"max_residual", r.max_residual},
                     {"pass", r.pass}};
}

/// Residuals |C_n(A) - c_n| for n = first_index..N; n passes when the residual is at
/// most max(tol |c_n|, floor).
template <class T>
VerifyReport verify_matching(const Approximant<T>& A, const CharNumbers<T>& c, const VerifyOptions& opt = {}) {
  c.validate();
  if (native_family(A.kind()) != c.family) {
    throw family_mismatch(std::string("kind ") + kind_name(A.kind()) + " is not measured by the " +
                          family_name(c.family) + " family");
  }
  const std::vector<T> m = measure(A, c.family, c.params, c.order(), c.first_index, opt.quad);
  VerifyReport r;
  r.kind = kind_name(A.kind());
  r.order = c.order();
  const double floor = std::max(opt.floor, A.residual_floor);
  for (int n = c.first_index; n <= c.order(); ++n) {
    const T diff = m[n] - c.values[n];
    const double res = std::abs(to_double(diff));
    const bool exact_zero = diff == T(0);
    r.residuals.push_back(exact_zero ? 0.0 : res);
    r.max_residual = std::max(r.max_residual, res);
    if (!exact_zero && !(res <= std::max(opt.tol * std::abs(to_double(c.values[n])), floor))) r.pass = false;
  }
  return r;
}

/// M[n][m] = C_n(basis[m]).
template <class T>
std::vector<std::vector<T>> delta_check(const std::vector<Approximant<T>>& basis, CharFamily family,
                                        const FamilyParams<T>& params, int first_index = 0) {
  const int order = static_cast<int>(basis.size()) - 1 + first_index;
  std::vector<std::vector<T>> M(basis.size(), std::vector<T>(basis.size(), T(0)));
  for (std::size_t m = 0; m < basis.size(); ++m) {
    const std::vector<T> col = measure(basis[m], family, params, order, first_index);
    for (std::size_t n = 0; n < basis.size(); ++n) M[n][m] = col[n + first_index];
  }
  return M;
}

template <class T>
bool is_identity(const std::vector<std::vector<T>>& M, double tol = 0.0) {
  for (std::size_t n = 0; n < M.size(); ++n) {
    for (std::size_t m = 0; m < M[n].size(); ++m) {
      const double target = n == m ? 1.0 : 0.0;
      if (tol == 0.0) {
        if (!(M[n][m] == T(target))) return false;
      } else if (std::abs(to_double(M[n][m]) - target) > tol) {
        return false;
      }
    }
  }
  return true;
}

/// Zero above the diagonal and nonzero on it.
template <class T>
bool is_lower_triangular(const std::vector<std::vector<T>>& M, double tol = 0.0) {
  for (std::size_t n = 0; n < M.size(); ++n) {
    if (tol == 0.0 ? M[n][n] == T(0) : std::abs(to_double(M[n][n])) <= tol) return false;
    for (std::size_t m = n + 1; m < M[n].size(); ++m) {
      if (tol == 0.0 ? !(M[n][m] == T(0)) : std::abs(to_double(M[n][m])) > tol) return false;
    }
  }
  return true;
}

}  // namespace charmatch
