// charmatch: build, inspect and verify characteristic-number expansions.
//
//   charmatch coeffs  --f "exp(x)" --kind taylor --order 3
//   charmatch verify  --f "exp(x)" --kind newpade --order 8
//   charmatch figure  besscos --csv out.csv --svg out.svg
//   charmatch compare --f "sin(x)" --kinds nsbf,taylor --order 10 --grid 0,9.42,2001
//
// Exit codes: 0 ok/pass, 1 verification failed, 2 usage error, 3 family mismatch.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "charmatch/charmatch.hpp"

using namespace charmatch;
using nlohmann::json;

namespace {

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string f;
  std::string kind;
  int order = 10;
  std::string x0 = "0";
  std::string w = "0";
  int q = 1;
  std::string alpha = "-1";
  std::string interval;  // "a,b"
  std::string grid;      // "lo,hi,points"
  std::string preset;
  std::string lambda = "identity";
  std::string pade;  // "m,n"
  std::string nodes; // "x1,x2,..."
  std::string rho = "x";
  std::string family;
  std::string base = "0";
  std::string csv, svg, json_path;
  std::vector<std::string> kinds;
  int perturb = -1;
  bool inexact = false;
  bool x0_given = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

/// Accepts any constant expression: "-1/2", "0.25", "pi/4".
double parse_double(const std::string& text) {
  const Expr e = Expr::parse(text);
  const double v = e(0.0);
  if (!std::isfinite(v)) throw usage_error("not a finite number: '" + text + "'");
  return v;
}

std::optional<Rational> parse_exact(const std::string& text) {
  auto p = Expr::parse(text).to_polynomial();
  if (!p || p->degree() > 0) return std::nullopt;
  return (*p)[0];
}

template <class T>
T parse_scalar(const std::string& text) {
  if constexpr (is_exact_v<T>) {
    auto r = parse_exact(text);
    if (!r) throw inexact_error("parameter '" + text + "'");
    return *r;
  } else {
    return parse_double(text);
  }
}

Grid parse_grid(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw usage_error("--grid expects lo,hi,points");
  Grid g{parse_double(parts[0]), parse_double(parts[1]), 0};
  try {
    g.points = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw usage_error("--grid points must be an integer");
  }
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  return g;
}

ExpansionKind require_kind(const std::string& name) {
  auto k = parse_kind(name);
  if (!k) throw usage_error("unknown expansion kind '" + name + "'");
  return *k;
}

CharFamily parse_family(const std::string& name) {
  for (CharFamily f : {CharFamily::derivative, CharFamily::moment, CharFamily::higher_integral,
                       CharFamily::endpoint_difference, CharFamily::node_values, CharFamily::node_integrals,
                       CharFamily::nonlinear, CharFamily::projection}) {
    if (name == family_name(f)) return f;
  }
  throw usage_error("unknown family '" + name + "'");
}

template <class T>
struct Built {
  CharNumbers<T> c;
  Approximant<T> A;
};

template <class T>
std::pair<T, T> interval_of(const RunConfig& cfg, const char* a_default, const char* b_default) {
  std::string a = a_default, b = b_default;
  if (!cfg.interval.empty()) {
    const auto parts = split(cfg.interval, ',');
    if (parts.size() != 2) throw usage_error("--interval expects a,b");
    a = parts[0];
    b = parts[1];
  }
  return {parse_scalar<T>(a), parse_scalar<T>(b)};
}

template <class T>
KindParams<T> kind_params(const RunConfig& cfg) {
  KindParams<T> kp;
  kp.w = parse_scalar<T>(cfg.w);
  kp.q = cfg.q;
  kp.alpha = parse_scalar<T>(cfg.alpha);
  kp.lambda = parse_map(cfg.lambda);
  if (!cfg.pade.empty()) {
    const auto parts = split(cfg.pade, ',');
    if (parts.size() != 2) throw usage_error("--pade expects m,n");
    kp.pade_m = std::stoi(parts[0]);
    kp.pade_n = std::stoi(parts[1]);
    if (kp.pade_m + kp.pade_n != cfg.order) throw usage_error("--pade m,n must satisfy m + n = order");
  }
  return kp;
}

/// Integrals are exact only for polynomial integrands.
template <class T>
void require_polynomial_if_exact(const Expr& f) {
  if constexpr (is_exact_v<T>) {
    if (!f.to_polynomial()) throw inexact_error("integral of a non-polynomial");
  }
}

/// Characteristic numbers of `family` for f; params follow the config.
template <class T>
CharNumbers<T> chars_for(const RunConfig& cfg, const Expr& f, CharFamily family) {
  const int N = cfg.order;
  switch (family) {
    case CharFamily::derivative: return CharNumbers<T>::derivative(f, parse_scalar<T>(cfg.x0), N);
    case CharFamily::nonlinear:
      return CharNumbers<T>::nonlinear(f, parse_map(cfg.lambda), parse_scalar<T>(cfg.x0), N);
    case CharFamily::moment: {
      require_polynomial_if_exact<T>(f);
      auto [a, b] = interval_of<T>(cfg, "-1", "1");
      return moments_compute<T>(f, a, b, N).chars();
    }
    case CharFamily::higher_integral:
      require_polynomial_if_exact<T>(f);
      return higher_integral_chars<T>(f, N);
    case CharFamily::endpoint_difference: {
      auto [a, b] = interval_of<T>(cfg, "0", "1");
      const T anchor = cfg.x0_given ? parse_scalar<T>(cfg.x0) : a;
      return bernoulli_chars<T>(f, a, b, N, BernoulliC0::anchor, anchor);
    }
    case CharFamily::node_values: {
      if (cfg.nodes.empty()) throw usage_error("--nodes is required for node-value kinds");
      std::vector<T> xs;
      for (const auto& s : split(cfg.nodes, ',')) xs.push_back(parse_scalar<T>(s));
      return value_chars<T>(f, xs);
    }
    case CharFamily::projection:
    case CharFamily::node_integrals: break;
  }
  throw inexact_error("family evaluated in double only");
}

template <class T>
Built<T> build(const RunConfig& cfg, const Expr& f, ExpansionKind kind) {
  const int N = cfg.order;
  if (N < 0) throw usage_error("--order must be >= 0");
  switch (native_family(kind)) {
    case CharFamily::derivative: {
      CharNumbers<T> c = chars_for<T>(cfg, f, CharFamily::derivative);
      return {c, build_derivative_expansion(kind, c, kind_params<T>(cfg))};
    }
    case CharFamily::nonlinear: {
      CharNumbers<T> c = chars_for<T>(cfg, f, CharFamily::nonlinear);
      return {c, nonlinear_approx(c)};
    }
    case CharFamily::moment: {
      CharNumbers<T> c = chars_for<T>(cfg, f, CharFamily::moment);
      return {c, legendre_moment_match(c)};
    }
    case CharFamily::higher_integral: {
      CharNumbers<T> c = chars_for<T>(cfg, f, CharFamily::higher_integral);
      return {c, higher_integral_approx(c)};
    }
    case CharFamily::endpoint_difference: {
      CharNumbers<T> c = chars_for<T>(cfg, f, CharFamily::endpoint_difference);
      return {c, bernoulli_approx(c)};
    }
    case CharFamily::node_values: {
      if (kind == ExpansionKind::whittaker_shannon) {
        if constexpr (is_exact_v<T>) {
          throw inexact_error("ws");
        } else {
          if (cfg.preset.empty()) throw usage_error("--preset ws-a..ws-f is required for kind ws");
          const NodeSystem ns = ws_node_system(cfg.preset, N);
          CharNumbers<double> c = ws_value_chars(ns, f);
          return {c, ws_build(ns, c)};
        }
      }
      CharNumbers<T> c = chars_for<T>(cfg, f, CharFamily::node_values);
      if (kind == ExpansionKind::lagrange) return {c, lagrange_interp(c)};
      if (kind == ExpansionKind::newton) return {c, newton_interp(c)};
      return {c, rho_interp(c, Expr::parse(cfg.rho))};
    }
    case CharFamily::projection: {
      if constexpr (is_exact_v<T>) {
        throw inexact_error("projection");
      } else {
        if (kind == ExpansionKind::fourier) {
          CharNumbers<double> c = projection_chars(f, ProjectionBasis::fourier, N);
          return {c, fourier_approx(c)};
        }
        CharNumbers<double> c = projection_chars(f, ProjectionBasis::legendre, N);
        return {c, legendre_fourier_approx(c)};
      }
    }
    case CharFamily::node_integrals: {
      if constexpr (is_exact_v<T>) {
        throw inexact_error("ws-integral");
      } else {
        const NodeSystem ns = cfg.preset.empty() || cfg.preset == "ws-classical"
                                  ? ws_classical(N, true)
                                  : ws_node_system(cfg.preset, N);
        CharNumbers<double> c = ws_integral_chars(ns, f, parse_double(cfg.base));
        return {c, ws_integral_match(ns, c)};
      }
    }
  }
  throw std::logic_error("build");
}

template <class T>
std::string show(const T& v) {
  if constexpr (is_exact_v<T>) {
    return v.str();
  } else {
    return format_number(v);
  }
}

template <class T>
json to_json_values(const std::vector<T>& v) {
  json out = json::array();
  for (const T& x : v) out.push_back(to_double(x));
  return out;
}

template <class T>
json exact_strings(const std::vector<T>& v) {
  json out = json::array();
  for (const T& x : v) out.push_back(show(x));
  return out;
}

void write_json_file(const std::string& path, const json& j) {
  if (path.empty()) return;
  std::ofstream os(path);
  if (!os) throw usage_error("cannot write " + path);
  os << j.dump(2) << '\n';
}

/// Runs `fn` in exact arithmetic when everything involved is rational, else in double.
template <class F>
int with_scalar(const RunConfig& cfg, F&& fn) {
  if (!cfg.inexact) {
    try {
      return fn(Rational());
    } catch (const inexact_error&) {
    }
  }
  return fn(0.0);
}

int cmd_coeffs(const RunConfig& cfg) {
  const ExpansionKind kind = require_kind(cfg.kind);
  const Expr f = Expr::parse(cfg.f);
  return with_scalar(cfg, [&](auto zero) {
    using T = decltype(zero);
    const Built<T> b = build<T>(cfg, f, kind);
    std::cout << "# kind " << kind_name(kind) << ", family " << family_name(b.c.family) << ", "
              << (is_exact_v<T> ? "exact" : "double") << "\n";
    const auto& a = b.A.coeffs.values;
    const std::size_t rows = std::max(a.size(), b.c.values.size());
    std::cout << "n\tc_n\ta_n\ta_n_decimal\n";
    for (std::size_t n = 0; n < rows; ++n) {
      std::cout << n << '\t' << (n < b.c.values.size() ? show(b.c.values[n]) : "") << '\t'
                << (n < a.size() ? show(a[n]) : "") << '\t' << (n < a.size() ? format_number(to_double(a[n])) : "")
                << '\n';
    }
    write_json_file(cfg.json_path, json{{"kind", kind_name(kind)},
                                        {"family", family_name(b.c.family)},
                                        {"order", cfg.order},
                                        {"exact", is_exact_v<T>},
                                        {"c", to_json_values(b.c.values)},
                                        {"a", to_json_values(a)},
                                        {"a_exact", exact_strings(a)}});
    return 0;
  });
}

int cmd_verify(const RunConfig& cfg) {
  const ExpansionKind kind = require_kind(cfg.kind);
  const Expr f = Expr::parse(cfg.f);
  return with_scalar(cfg, [&](auto zero) {
    using T = decltype(zero);
    Built<T> b = build<T>(cfg, f, kind);
    if (cfg.perturb >= 0) {
      if (native_family(kind) != CharFamily::derivative && native_family(kind) != CharFamily::nonlinear) {
        throw usage_error("--perturb is supported for derivative and nonlinear kinds");
      }
      CoeffSeq<T> s = b.A.coeffs;
      if (cfg.perturb >= static_cast<int>(s.values.size())) throw usage_error("--perturb index out of range");
      s.values[cfg.perturb] += T(1) / T(1000);
      b.A = approx_from_coeffs(s, b.c.params.x0);
    }
    CharNumbers<T> c = b.c;
    if (!cfg.family.empty()) {
      const CharFamily fam = parse_family(cfg.family);
      if (fam != b.c.family) c = chars_for<T>(cfg, f, fam);
    }
    const VerifyReport r = verify_matching(b.A, c);
    json j = r;
    j["exact"] = is_exact_v<T>;
    std::cout << j.dump(2) << '\n';
    write_json_file(cfg.json_path, j);
    return r.pass ? 0 : 1;
  });
}

int cmd_figure(const std::string& name, const RunConfig& cfg) {
  const auto& names = figure_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) throw usage_error("unknown figure '" + name + "'");
  std::optional<Grid> g;
  if (!cfg.grid.empty()) g = parse_grid(cfg.grid);
  const FigureData fig = make_figure(name, g);
  if (cfg.csv.empty()) {
    write_csv(std::cout, fig);
  } else {
    std::ofstream os(cfg.csv);
    if (!os) throw usage_error("cannot write " + cfg.csv);
    write_csv(os, fig);
  }
  if (!cfg.svg.empty()) {
    std::ofstream os(cfg.svg);
    if (!os) throw usage_error("cannot write " + cfg.svg);
    write_svg(os, fig);
  }
  return 0;
}

int cmd_compare(const std::vector<RunConfig>& runs) {
  if (runs.size() < 2) throw usage_error("compare needs at least two configurations");
  for (const RunConfig& r : runs) {
    if (r.grid != runs[0].grid) throw usage_error("compare: configurations use different grids");
    if (r.f != runs[0].f) throw usage_error("compare: configurations use different functions");
  }
  if (runs[0].grid.empty()) throw usage_error("compare: --grid is required");
  const Grid g = parse_grid(runs[0].grid);
  const Expr f = Expr::parse(runs[0].f);
  const double h = (g.hi - g.lo) / (g.points - 1);
  json table = json::array();
  std::cout << "kind\torder\tmax_abs\tl2\n";
  for (const RunConfig& r : runs) {
    const ExpansionKind kind = require_kind(r.kind);
    const Approximant<double> A = build<double>(r, f, kind).A;
    double mx = 0.0, ss = 0.0;
    for (int i = 0; i < g.points; ++i) {
      const double x = g.at(i);
      const double e = std::abs(A(x) - f(x));
      mx = std::max(mx, e);
      ss += e * e;
    }
    const double l2 = std::sqrt(ss * h);
    std::cout << kind_name(kind) << '\t' << r.order << '\t' << format_number(mx) << '\t' << format_number(l2) << '\n';
    table.push_back({{"kind", kind_name(kind)}, {"order", r.order}, {"max_abs", mx}, {"l2", l2}});
  }
  write_json_file(runs[0].json_path, table);
  return 0;
}

/// Fills fields from a JSON object, skipping those given on the command line.
void apply_config(RunConfig& cfg, const json& j, const std::function<bool(const std::string&)>& given) {
  auto str = [&](const char* key, std::string& dst) {
    if (!j.contains(key) || given(key)) return;
    const json& v = j.at(key);
    if (v.is_string()) {
      dst = v.get<std::string>();
    } else if (v.is_array()) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
      dst = s;
    } else {
      dst = v.dump();
    }
  };
  str("f", cfg.f);
  str("kind", cfg.kind);
  str("x0", cfg.x0);
  str("w", cfg.w);
  str("alpha", cfg.alpha);
  str("interval", cfg.interval);
  str("grid", cfg.grid);
  str("preset", cfg.preset);
  str("lambda", cfg.lambda);
  str("pade", cfg.pade);
  str("nodes", cfg.nodes);
  str("rho", cfg.rho);
  str("family", cfg.family);
  str("base", cfg.base);
  str("csv", cfg.csv);
  str("svg", cfg.svg);
  str("json", cfg.json_path);
  if (j.contains("order") && !given("order")) cfg.order = j.at("order").get<int>();
  if (j.contains("q") && !given("q")) cfg.q = j.at("q").get<int>();
  if (j.contains("kinds") && !given("kinds")) cfg.kinds = j.at("kinds").get<std::vector<std::string>>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"characteristic-number expansions"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string config_path, figure_name;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--f", cfg.f, "function of x, e.g. \"exp(x)\"");
    sub->add_option("--kind", cfg.kind, "expansion kind");
    sub->add_option("--order", cfg.order, "highest matched index N");
    sub->add_option("--x0", cfg.x0, "expansion point (or Bernoulli anchor)");
    sub->add_option("--w", cfg.w, "exp-weighted w");
    sub->add_option("--q", cfg.q, "exp-weighted q");
    sub->add_option("--alpha", cfg.alpha, "pole of x/(x - alpha)");
    sub->add_option("--interval", cfg.interval, "a,b");
    sub->add_option("--grid", cfg.grid, "lo,hi,points");
    sub->add_option("--preset", cfg.preset, "node system ws-a..ws-f");
    sub->add_option("--lambda", cfg.lambda, "nonlinear map: identity|ln|sqrt|cube");
    sub->add_option("--pade", cfg.pade, "Pade split m,n");
    sub->add_option("--nodes", cfg.nodes, "interpolation nodes x1,x2,...");
    sub->add_option("--rho", cfg.rho, "rho(x) for the rho kind");
    sub->add_option("--base", cfg.base, "base point a for ws-integral");
    sub->add_option("--csv", cfg.csv, "CSV output path");
    sub->add_option("--svg", cfg.svg, "SVG output path");
    sub->add_option("--json", cfg.json_path, "JSON report path");
    sub->add_option("--config", config_path, "JSON config file; flags override it");
    sub->add_flag("--inexact", cfg.inexact, "use double arithmetic even when exact is possible");
  };

  CLI::App* coeffs = app.add_subcommand("coeffs", "print characteristic numbers and coefficients");
  add_common(coeffs);
  CLI::App* verify = app.add_subcommand("verify", "check that the expansion matches its numbers");
  add_common(verify);
  verify->add_option("--family", cfg.family, "measure with this family instead of the native one");
  verify->add_option("--perturb", cfg.perturb, "add 1/1000 to coefficient a_n before verifying");
  CLI::App* figure = app.add_subcommand("figure", "write a figure data set");
  add_common(figure);
  figure->add_option("name", figure_name, "figure name")->required();
  CLI::App* compare = app.add_subcommand("compare", "grid error norms of several kinds");
  add_common(compare);
  compare->add_option("--kinds", cfg.kinds, "comma-separated kinds")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* active = app.get_subcommands().front();
  auto given = [&](const std::string& key) {
    const std::string flag = "--" + std::string(key == "json" ? "json" : key);
    try {
      return active->get_option(flag)->count() > 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };

  try {
    cfg.x0_given = given("x0");
    std::vector<RunConfig> runs;
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw usage_error("cannot read " + config_path);
      json j;
      try {
        j = json::parse(is);
      } catch (const json::parse_error& e) {
        throw usage_error(std::string("bad config: ") + e.what());
      }
      apply_config(cfg, j, given);
      cfg.x0_given = cfg.x0_given || j.contains("x0");
      if (j.contains("runs")) {
        for (const json& r : j.at("runs")) {
          RunConfig rc = cfg;
          apply_config(rc, r, [](const std::string&) { return false; });
          runs.push_back(rc);
        }
      }
    }
    if (active == figure) return cmd_figure(figure_name, cfg);
    if (cfg.f.empty()) throw usage_error("--f is required");
    if (active == compare) {
      if (runs.empty()) {
        for (const std::string& k : cfg.kinds) {
          RunConfig rc = cfg;
          rc.kind = k;
          runs.push_back(rc);
        }
      }
      return cmd_compare(runs);
    }
    if (cfg.kind.empty()) throw usage_error("--kind is required");
    if (active == coeffs) return cmd_coeffs(cfg);
    return cmd_verify(cfg);
  } catch (const family_mismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
