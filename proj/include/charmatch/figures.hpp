#pragma once

// Figure data sets as CSV and a plain SVG line plot.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "charmatch/expansions.hpp"
#include "charmatch/expr.hpp"
#include "charmatch/integral_match.hpp"
#include "charmatch/ws_interp.hpp"

namespace charmatch {

struct Grid {
  double lo = -1.0;
  double hi = 1.0;
  int points = 2001;

  void validate() const {
    if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument("grid needs lo < hi");
  }
  double at(int i) const { return i == points - 1 ? hi : lo + (hi - lo) * i / (points - 1); }
};

struct Curve {
  std::string name;
  std::vector<double> y;
  int reference = -1;  // index of the curve this one approximates
};

struct FigureData {
  std::string name;
  std::string title;
  std::vector<double> x;
  std::vector<Curve> curves;
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Evaluates on the grid; points outside the approximant's domain give NaN.
inline std::vector<double> sample(const std::function<double(double)>& f, const std::vector<double>& x) {
  std::vector<double> y;
  y.reserve(x.size());
  for (double t : x) {
    double v;
    try {
      v = f(t);
    } catch (const std::domain_error&) {
      v = std::numeric_limits<double>::quiet_NaN();
    }
    y.push_back(v);
  }
  return y;
}

/// Columns: x, every curve, then err_<name> = curve - reference for approximating curves.
inline void write_csv(std::ostream& os, const FigureData& fig) {
  os << "x";
  for (const Curve& c : fig.curves) os << ',' << c.name;
  for (const Curve& c : fig.curves) {
    if (c.reference >= 0) os << ",err_" << c.name;
  }
  os << '\n';
  for (std::size_t i = 0; i < fig.x.size(); ++i) {
    os << format_number(fig.x[i]);
    for (const Curve& c : fig.curves) os << ',' << format_number(c.y[i]);
    for (const Curve& c : fig.curves) {
      if (c.reference >= 0) os << ',' << format_number(c.y[i] - fig.curves[c.reference].y[i]);
    }
    os << '\n';
  }
}

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline double nice_step(double span) {
  const double raw = span / 8.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace detail

/// 800x600 line plot. The y range is set by the reference curves (those that
/// approximate nothing) with a margin; points outside are clipped.
inline void write_svg(std::ostream& os, const FigureData& fig) {
  const double W = 800, H = 600, L = 70, R = 170, T = 40, B = 50;
  double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
  for (const Curve& c : fig.curves) {
    if (c.reference >= 0) continue;
    for (double v : c.y) {
      if (std::isfinite(v)) {
        ylo = std::min(ylo, v);
        yhi = std::max(yhi, v);
      }
    }
  }
  if (!std::isfinite(ylo)) ylo = -1, yhi = 1;
  if (yhi - ylo < 1e-12) ylo -= 1, yhi += 1;
  const double pad = 0.25 * (yhi - ylo);
  ylo -= pad;
  yhi += pad;
  const double xlo = fig.x.front(), xhi = fig.x.back();
  auto px = [&](double x) { return L + (x - xlo) / (xhi - xlo) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ylo) / (yhi - ylo) * (H - T - B); };

  static const char* colors[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  os << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  os << "<text x=\"" << detail::svg_num(L) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << fig.title
     << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << (W - L - R) << "\" height=\"" << (H - T - B)
     << "\" fill=\"none\" stroke=\"#444\"/>\n";
  const double xs = detail::nice_step(xhi - xlo), ys = detail::nice_step(yhi - ylo);
  for (double t = std::ceil(xlo / xs) * xs; t <= xhi + 1e-9 * xs; t += xs) {
    const double u = px(t);
    os << "<line x1=\"" << detail::svg_num(u) << "\" y1=\"" << (H - B) << "\" x2=\"" << detail::svg_num(u)
       << "\" y2=\"" << (H - B + 5) << "\" stroke=\"#444\"/>";
    os << "<text x=\"" << detail::svg_num(u) << "\" y=\"" << (H - B + 20)
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << format_number(std::abs(t) < 1e-12 * xs ? 0.0 : t)
       << "</text>\n";
  }
  for (double t = std::ceil(ylo / ys) * ys; t <= yhi + 1e-9 * ys; t += ys) {
    const double v = py(t);
    os << "<line x1=\"" << (L - 5) << "\" y1=\"" << detail::svg_num(v) << "\" x2=\"" << L << "\" y2=\""
       << detail::svg_num(v) << "\" stroke=\"#444\"/>";
    os << "<text x=\"" << (L - 8) << "\" y=\"" << detail::svg_num(v + 4)
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" << format_number(std::abs(t) < 1e-12 * ys ? 0.0 : t)
       << "</text>\n";
  }
  for (std::size_t k = 0; k < fig.curves.size(); ++k) {
    const Curve& c = fig.curves[k];
    const char* color = colors[k % 7];
    std::ostringstream pts;
    auto flush = [&]() {
      if (pts.tellp() > 0) {
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts.str()
           << "\"/>\n";
      }
      pts.str("");
      pts.clear();
    };
    for (std::size_t i = 0; i < fig.x.size(); ++i) {
      const double v = c.y[i];
      if (!std::isfinite(v) || v < ylo || v > yhi) {
        flush();
        continue;
      }
      pts << detail::svg_num(px(fig.x[i])) << ',' << detail::svg_num(py(v)) << ' ';
    }
    flush();
    const double ly = T + 20 + 20 * k;
    os << "<line x1=\"" << (W - R + 15) << "\" y1=\"" << ly << "\" x2=\"" << (W - R + 40) << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
    os << "<text x=\"" << (W - R + 45) << "\" y=\"" << (ly + 4) << "\" font-family=\"sans-serif\" font-size=\"12\">"
       << c.name << "</text>\n";
  }
  os << "</svg>\n";
}

// ---------------------------------------------------------------- figure definitions

inline const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{
      "besscos",    "legout",     "exppoly",    "logpowers", "newpade", "inargpow-a", "inargpow-b",
      "inargpow-c", "inargpow-d", "pprime",     "nonlin",    "ws-a",    "ws-b",       "ws-c",
      "ws-d",       "ws-e",       "ws-f"};
  return names;
}

inline Grid default_grid(const std::string& name) {
  if (name == "besscos") return {-4 * M_PI, 4 * M_PI, 2001};
  if (name == "legout") return {-2, 2, 2001};
  if (name == "exppoly") return {-6, 6, 2001};
  if (name == "logpowers" || name == "newpade") return {-0.9, 4, 2001};
  if (name == "inargpow-a" || name == "inargpow-b" || name == "inargpow-c") return {-0.95, 0.95, 2001};
  if (name == "inargpow-d") return {-2, 2, 2001};
  if (name == "pprime") return {-3, 3, 2001};
  if (name == "nonlin") return {-3, 3, 2001};
  if (name == "ws-a") return {-2.5, 2.5, 2001};
  if (name == "ws-b") return {-1.5, 1.5, 2001};
  if (name == "ws-c") return {0, 3, 2001};
  if (name == "ws-d") return {-1, 1, 2000};  // even count keeps x = 0, where s = 1/x is undefined, off the grid
  if (name == "ws-e") return {-0.999, 0.999, 2001};
  if (name == "ws-f") return {-1.5, 1.5, 2001};
  throw std::invalid_argument("unknown figure '" + name + "'");
}

namespace detail {

inline Approximant<double> derivative_approx(const std::string& f, ExpansionKind kind, int order,
                                             const KindParams<double>& kp = {}) {
  return build_derivative_expansion(kind, CharNumbers<double>::derivative(Expr::parse(f), 0.0, order), kp);
}

struct FigureBuilder {
  FigureData fig;

  int add(const std::string& name, const std::function<double(double)>& f, int reference = -1) {
    fig.curves.push_back({name, sample(f, fig.x), reference});
    return static_cast<int>(fig.curves.size()) - 1;
  }
  int add_function(const std::string& name, const std::string& text) {
    const Expr e = Expr::parse(text);
    return add(name, [e](double x) { return e(x); });
  }
  void add_approx(const std::string& name, const Approximant<double>& A, int reference) {
    add(name, [A](double x) { return A(x); }, reference);
  }
};

}  // namespace detail

inline FigureData make_figure(const std::string& name, std::optional<Grid> grid = std::nullopt) {
  const Grid g = grid.value_or(default_grid(name));
  g.validate();
  detail::FigureBuilder b;
  b.fig.name = name;
  for (int i = 0; i < g.points; ++i) b.fig.x.push_back(g.at(i));
  using detail::derivative_approx;

  if (name == "besscos") {
    b.fig.title = "sin(x): Taylor and NsBf, N = 10";
    const int f = b.add_function("sin", "sin(x)");
    b.add_approx("taylor10", derivative_approx("sin(x)", ExpansionKind::taylor, 10), f);
    b.add_approx("nsbf10", derivative_approx("sin(x)", ExpansionKind::nsbf, 10), f);
  } else if (name == "legout") {
    b.fig.title = "Legendre-Fourier, N = 10";
    for (const auto& [label, text] : {std::pair{"atan", "atan(x)"}, std::pair{"exp", "exp(x)"}}) {
      const int f = b.add_function(label, text);
      b.add_approx(std::string("lf10_") + label,
                   legendre_fourier_approx(projection_chars(Expr::parse(text), ProjectionBasis::legendre, 10)), f);
    }
  } else if (name == "exppoly") {
    b.fig.title = "exp-weighted, 11 terms, q = 2, w = -1/2";
    KindParams<double> kp;
    kp.w = -0.5;
    kp.q = 2;
    for (const auto& [label, text] : {std::pair{"sin", "sin(x)"}, std::pair{"atan", "atan(x)"}}) {
      const int f = b.add_function(label, text);
      b.add_approx(std::string("expw10_") + label, derivative_approx(text, ExpansionKind::exp_weighted, 10, kp), f);
    }
  } else if (name == "logpowers" || name == "newpade") {
    const ExpansionKind kind = name == "logpowers" ? ExpansionKind::log_powers : ExpansionKind::rational_x_over_x1;
    b.fig.title = name == "logpowers" ? "powers of ln(x+1), 11 terms" : "powers of x/(x+1), 11 terms";
    for (const auto& [label, text] : {std::pair{"sin", "sin(x)"}, std::pair{"atan", "atan(x)"}}) {
      const int f = b.add_function(label, text);
      b.add_approx(std::string(kind_name(kind)) + "10_" + label, derivative_approx(text, kind, 10), f);
    }
  } else if (name == "inargpow-a") {
    b.fig.title = "G(x) = sum mu(n) x^n";
    b.add("G", [](double x) { return moebius_G(x); });
  } else if (name == "inargpow-b" || name == "inargpow-c" || name == "inargpow-d") {
    const ExpansionKind kind = name == "inargpow-b"   ? ExpansionKind::dirichlet_G
                               : name == "inargpow-c" ? ExpansionKind::dirichlet_rat1
                                                      : ExpansionKind::dirichlet_rat2;
    b.fig.title = std::string(kind_name(kind)) + ", 10 terms";
    for (const auto& [label, text] : {std::pair{"exp", "exp(x)"}, std::pair{"sin5", "sin(5*x)"}}) {
      const int f = b.add_function(label, text);
      b.add_approx(std::string(kind_name(kind)) + "10_" + label, derivative_approx(text, kind, 10), f);
    }
  } else if (name == "pprime") {
    b.fig.title = "P(x) and its first derivatives";
    const int pmax = 30;
    for (int k = 0; k <= 3; ++k) {
      b.add(k == 0 ? "P" : "d" + std::to_string(k) + "P", [k, pmax](double x) {
        double s = 0.0;
        for (int i = 2; i <= pmax + 1; ++i) s += dex_eval(i, ((-k) % i + i) % i, x) - (k == 0 ? 1.0 : 0.0);
        return s;
      });
    }
  } else if (name == "nonlin") {
    b.fig.title = "nonlinear matching, 11 terms";
    struct Case {
      const char* label;
      const char* f;
      NonlinearMap map;
    };
    for (const Case& c : {Case{"2+sin", "2+sin(x)", NonlinearMap::ln}, Case{"atan", "atan(x)", NonlinearMap::cube},
                          Case{"exp", "exp(x)", NonlinearMap::sqrt}}) {
      const int f = b.add_function(c.label, c.f);
      b.add_approx(std::string("nl10_") + map_name(c.map) + "_" + c.label,
                   nonlinear_approx(CharNumbers<double>::nonlinear(Expr::parse(c.f), c.map, 0.0, 10)), f);
    }
  } else if (name.rfind("ws-", 0) == 0) {
    const Expr fx = ws_preset_function(name);
    b.fig.title = name + ": " + fx.str();
    const int f = b.add("f", [fx](double x) { return fx(x); });
    const std::vector<int> orders = name == "ws-e" || name == "ws-c" ? std::vector<int>{20, 100} : std::vector<int>{20};
    for (int N : orders) {
      const NodeSystem ns = ws_node_system(name, N);
      b.add_approx("ws" + std::to_string(N), ws_build(ns, ws_value_chars(ns, fx)), f);
    }
  } else {
    throw std::invalid_argument("unknown figure '" + name + "'");
  }
  return b.fig;
}

}  // namespace charmatch
