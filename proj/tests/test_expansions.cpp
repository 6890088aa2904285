#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "charmatch/expansions.hpp"

using namespace charmatch;

namespace {

Rational R(long long n, long long d = 1) { return make_rational(n, d); }

CharNumbers<Rational> chars(const std::string& f, int N) {
  return CharNumbers<Rational>::derivative(Expr::parse(f), Rational(0), N);
}

std::vector<Rational> Rs(std::initializer_list<long long> v) {
  std::vector<Rational> out;
  for (long long x : v) out.push_back(R(x));
  return out;
}

// Taylor coefficients of f(h(y)) at 0.
std::vector<Rational> composed_series(const std::string& f, const std::string& h, int N) {
  return Expr::parse(f).substitute(Expr::parse(h)).jet(Rational(0), N).coeffs();
}

const std::vector<std::string>& suite() {
  static const std::vector<std::string> f{"exp(x)",      "sin(x)", "cos(x)",   "atan(x)",  "ln(x^2+1)",
                                          "sqrt(4-x^2)", "j0(x)",  "1/(1+x)", "tan(x)",   "exp(x)*sin(2*x)"};
  return f;
}

const std::vector<ExpansionKind>& derivative_kinds() {
  static const std::vector<ExpansionKind> k{
      ExpansionKind::taylor,         ExpansionKind::nsbf,          ExpansionKind::pade,
      ExpansionKind::pow_sine,       ExpansionKind::exp_weighted,  ExpansionKind::log_powers,
      ExpansionKind::rational_x_over_x1, ExpansionKind::stirling1_g, ExpansionKind::lambert_w_g,
      ExpansionKind::dirichlet_G,    ExpansionKind::dirichlet_rat1, ExpansionKind::dirichlet_rat2,
      ExpansionKind::dex};
  return k;
}

template <class T>
KindParams<T> params() {
  KindParams<T> p;
  p.w = T(-1) / T(2);
  p.q = 2;
  return p;
}

VerifyReport round_trip(ExpansionKind k, const std::string& f, int N) {
  const auto c = CharNumbers<Rational>::derivative(Expr::parse(f), Rational(0), N);
  return verify_matching(build_derivative_expansion(k, c, params<Rational>()), c);
}

}  // namespace

// ---------------------------------------------------------------- round trip

TEST(RoundTrip, EveryDerivativeKindExact) {
  for (int N : {4, 8, 11}) {
    for (const std::string& f : suite()) {
      for (ExpansionKind k : derivative_kinds()) {
        const VerifyReport r = round_trip(k, f, N);
        EXPECT_TRUE(r.pass) << kind_name(k) << " " << f << " N=" << N;
        EXPECT_EQ(r.max_residual, 0.0) << kind_name(k) << " " << f << " N=" << N;
      }
    }
  }
}

TEST(RoundTrip, EveryDerivativeKindDouble) {
  // Jets of the composed forms cancel terms of size ~ n! max|a_k|, so an
  // absolute floor tied to the data scale replaces the 1e-12 default. Past
  // N = 8 the exact path above is the meaningful check.
  for (int N : {4, 8}) {
    for (const std::string& f : suite()) {
      const auto c = CharNumbers<double>::derivative(Expr::parse(f), 0.0, N);
      VerifyOptions opt;
      for (double v : c.values) opt.floor = std::max(opt.floor, 1e-9 * std::abs(v));
      for (ExpansionKind k : derivative_kinds()) {
        const VerifyReport r = verify_matching(build_derivative_expansion(k, c, params<double>()), c, opt);
        EXPECT_TRUE(r.pass) << kind_name(k) << " " << f << " N=" << N << " max " << r.max_residual;
      }
    }
  }
}

TEST(RoundTrip, NonlinearMaps) {
  for (int N : {4, 8, 11}) {
    for (const std::string& f : {"exp(x)", "cos(x)", "1/(1+x)", "sqrt(4-x^2)", "j0(x)", "2+sin(x)"}) {
      for (NonlinearMap m : {NonlinearMap::identity, NonlinearMap::ln, NonlinearMap::sqrt, NonlinearMap::cube}) {
        const auto c = CharNumbers<double>::nonlinear(Expr::parse(f), m, 0.0, N);
        const VerifyReport r = verify_matching(nonlinear_approx(c), c);
        EXPECT_TRUE(r.pass) << map_name(m) << " " << f << " N=" << N << " max " << r.max_residual;
      }
    }
  }
}

// ---------------------------------------------------------------- Taylor, NsBf

TEST(Taylor, Examples) {
  EXPECT_EQ(taylor_coeffs(chars("exp(x)", 3)).values, Rs({1, 1, 1, 1}));
  EXPECT_EQ(taylor_coeffs(chars("sin(x)", 3)).values, Rs({0, 1, 0, -1}));
  EXPECT_EQ(taylor_coeffs(chars("1-x^2", 2)).values, Rs({1, 0, -2}));
}

TEST(Nsbf, SineCoefficients) {
  const auto c = chars("sin(x)", 5);
  EXPECT_EQ(nsbf_coeffs(c).values, Rs({0, 2, 0, -2, 0, 2}));
  EXPECT_EQ(nsbf_coeffs(c, true).values, Rs({0, 2, 0, -2, 0, 2}));
}

TEST(Nsbf, CosineEvenOrderBound) {
  const auto c = chars("cos(x)", 2);
  const auto strict = nsbf_coeffs(c, true);
  const auto inclusive = nsbf_coeffs(c);
  EXPECT_EQ(strict.values, Rs({1, 0, -4}));
  EXPECT_EQ(inclusive.values, Rs({1, 0, -2}));
  // Only the bound that keeps the c_0 term reproduces the derivatives.
  EXPECT_FALSE(verify_matching(nsbf_approx(strict, Rational(0)), c).pass);
  EXPECT_TRUE(verify_matching(nsbf_approx(inclusive, Rational(0)), c).pass);
}

TEST(Nsbf, ZeroInZeroOut) {
  CharNumbers<Rational> c = CharNumbers<Rational>::from_values(std::vector<Rational>(7, R(0)), CharFamily::derivative);
  for (const Rational& a : nsbf_coeffs(c).values) EXPECT_EQ(a, 0);
}

TEST(Nsbf, CosineMatchesJacobiAnger) {
  // cos x = J_0 - 2 J_2 + 2 J_4 - ...
  EXPECT_EQ(nsbf_coeffs(chars("cos(x)", 6)).values, Rs({1, 0, -2, 0, 2, 0, -2}));
}

// ---------------------------------------------------------------- Pade

TEST(Pade, ExpOneOne) {
  const auto s = pade_solve(chars("exp(x)", 2), 1, 1);
  EXPECT_EQ(s.values, (std::vector<Rational>{R(1), R(1, 2), R(-1, 2)}));
  EXPECT_DOUBLE_EQ(pade_approx(s, Rational(0))(0.5), (1 + 0.25) / (1 - 0.25));
}

TEST(Pade, ZeroDenominatorDegreeIsTaylor) {
  const auto c = chars("atan(x)+cos(x)", 5);
  const auto s = pade_solve(c, 5, 0);
  for (int k = 0; k <= 5; ++k) EXPECT_EQ(s.values[k], c.values[k] / factorial<Rational>(k));
}

TEST(Pade, ReconstructsReciprocal) {
  const auto c1 = chars("1/(1+x)", 1);
  const auto A = pade_approx(pade_solve(c1, 0, 1), Rational(0));
  const auto c8 = chars("1/(1+x)", 8);
  const VerifyReport r = verify_matching(A, c8);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.max_residual, 0.0);
}

TEST(Pade, DegenerateBlock) {
  try {
    pade_solve(chars("sin(x)", 1), 0, 1);
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate Pad"), std::string::npos);
  }
  EXPECT_THROW(pade_solve(chars("exp(x)", 2), 2, 1), std::invalid_argument);
}

TEST(Pade, ConsistentSingularBlockReducesToLowerOrder) {
  // 1/(1+x) is its own [0/1] approximant; the [2/2] system is rank one.
  const auto c = chars("1/(1+x)", 4);
  const auto s = pade_solve(c, 2, 2);
  EXPECT_EQ(verify_matching(pade_approx(s, Rational(0)), chars("1/(1+x)", 9)).max_residual, 0.0);
}

TEST(Pade, DefaultSplitSkipsDegenerateBlocks) {
  // [6/5] of an odd function collapses to [5/4] and cannot match order 11.
  const auto c = chars("sin(x)", 11);
  EXPECT_THROW(pade_solve(c, 6, 5), std::domain_error);
  const auto A = build_derivative_expansion(ExpansionKind::pade, c);
  EXPECT_EQ(A.coeffs.params.pade_m + A.coeffs.params.pade_n, 11);
  EXPECT_EQ(verify_matching(A, c).max_residual, 0.0);
  KindParams<Rational> p;
  p.pade_m = 6;
  p.pade_n = 5;
  EXPECT_THROW(build_derivative_expansion(ExpansionKind::pade, c, p), std::domain_error);
}

// ---------------------------------------------------------------- powers of sines

TEST(PowSine, Examples) {
  EXPECT_EQ(pow_sine_coeffs(chars("sin(x)", 1)).values[1], 2);
  EXPECT_EQ(pow_sine_coeffs(chars("cos(x)", 2)).values[2], -2);
  const auto z = CharNumbers<Rational>::from_values(std::vector<Rational>(5, R(0)), CharFamily::derivative);
  for (const Rational& a : pow_sine_coeffs(z).values) EXPECT_EQ(a, 0);
}

TEST(PowSine, ClosedFormIdentities) {
  // with s = sin(t/2): cos t = 1 - 2 s^2, sin t = 2 s (1 - s^2)^(1/2),
  // t^2 = 4 asin(s)^2 = sum_k 2^(2k+1) s^(2k) / (k^2 C(2k,k))
  const int N = 12;
  const auto cs = pow_sine_coeffs(chars("cos(x)", N)).values;
  const auto sn = pow_sine_coeffs(chars("sin(x)", N)).values;
  const auto sq = pow_sine_coeffs(chars("x^2", N)).values;
  for (int n = 0; n <= N; ++n) {
    EXPECT_EQ(cs[n], n == 0 ? R(1) : n == 2 ? R(-2) : R(0)) << n;
    const Rational sin_want = n % 2 ? 2 * binomial_general(R(1, 2), (n - 1) / 2) * ((n - 1) / 2 % 2 ? -1 : 1) : R(0);
    EXPECT_EQ(sn[n], sin_want) << n;
    const int k = n / 2;
    const Rational sq_want = n % 2 || n == 0 ? R(0) : gpow(R(2), 2 * k + 1) / (R(k * k) * binomial<Rational>(2 * k, k));
    EXPECT_EQ(sq[n], sq_want) << n;
  }
}

// ---------------------------------------------------------------- exp-weighted

TEST(ExpWeighted, ZeroWeightIsTaylor) {
  const auto c = chars("atan(x)+exp(x)", 8);
  for (int q : {1, 2, 3}) {
    const auto a = exp_weighted_coeffs(c, Rational(0), q).values;
    for (int n = 0; n <= 8; ++n) EXPECT_EQ(a[n], c.values[n] / factorial<Rational>(n));
  }
}

TEST(ExpWeighted, SecondCoefficientForQ2) {
  const auto c = chars("exp(x)+sin(x)+cos(3*x)", 4);
  const Rational w = R(3, 5);
  EXPECT_EQ(exp_weighted_coeffs(c, w, 2).values[2], -w * c.values[0] + c.values[2] / 2);
}

TEST(ExpWeighted, ExpWithMatchingWeight) {
  const auto a = exp_weighted_coeffs(chars("exp(x)", 7), Rational(1), 1).values;
  EXPECT_EQ(a[0], 1);
  for (int n = 1; n <= 7; ++n) EXPECT_EQ(a[n], 0);
}

TEST(ExpWeighted, MatchesSeriesOfWeightedFunction) {
  // a_n = [t^n] f(t) exp(-w t^q)
  const int N = 10;
  for (const std::string f : {"exp(x)", "sin(x)", "1/(1+x)"}) {
    for (auto [w, q] : std::vector<std::pair<Rational, int>>{{R(-1, 2), 2}, {R(1), 1}, {R(2), 3}}) {
      const Jet<Rational> t = Jet<Rational>::variable(Rational(0), N);
      const Jet<Rational> weight = exp(pow(t, q) * (-w));
      const auto want = (Expr::parse(f).jet(Rational(0), N) * weight).coeffs();
      EXPECT_EQ(exp_weighted_coeffs(chars(f, N), w, q).values, want) << f << " q=" << q;
    }
  }
}

TEST(DMatrix, InverseIsExact) {
  const int N = 30;
  for (auto [w, q] : std::vector<std::pair<Rational, int>>{{R(-1, 2), 2}, {R(1), 1}, {R(2), 3}}) {
    const DMatrix<Rational> d = dmatrix_build(w, q, N);
    for (int i = 0; i <= N; ++i) {
      EXPECT_EQ(d.D.at(i, i), factorial<Rational>(i));
      for (int j = 0; j <= i; ++j) {
        Rational s(0);
        for (int k = j; k <= i; ++k) s += d.D.at(i, k) * d.Dinv.at(k, j);
        ASSERT_EQ(s, i == j ? R(1) : R(0)) << "q=" << q << " (" << i << "," << j << ")";
        if ((i - j) % q != 0) EXPECT_EQ(d.D.at(i, j), 0);
      }
    }
  }
}

TEST(DMatrix, ZeroWeightIsDiagonal) {
  const DMatrix<Rational> d = dmatrix_build(Rational(0), 1, 8);
  for (int i = 0; i <= 8; ++i) {
    for (int j = 0; j <= i; ++j) {
      EXPECT_EQ(d.D.at(i, j), i == j ? factorial<Rational>(i) : R(0));
      EXPECT_EQ(d.Dinv.at(i, j), i == j ? R(1) / factorial<Rational>(i) : R(0));
    }
  }
}

TEST(DMatrix, RejectsNonPositiveQ) { EXPECT_THROW(dmatrix_build(Rational(1), 0, 4), std::invalid_argument); }

TEST(DMatrix, DerivativesFromCoefficients) {
  // D maps coefficients of exp(w t^q) sum a_n t^n to derivatives at 0.
  const Rational w = R(-1, 3);
  const int q = 2, N = 9;
  std::vector<Rational> a{R(1), R(-2), R(1, 2), R(0), R(5), R(1, 7), R(-1), R(2), R(0), R(3)};
  const Jet<Rational> t = Jet<Rational>::variable(Rational(0), N);
  const Jet<Rational> g = exp(pow(t, q) * w) * Jet<Rational>(Rational(0), a);
  EXPECT_EQ(dmatrix_build(w, q, N).D.multiply(a), g.derivatives());
}

// ---------------------------------------------------------------- powers of g

TEST(PowersOfG, LogPowersOfExpAreBellNumbers) {
  // Bell numbers from the Bell triangle
  const int N = 10;
  std::vector<long long> bell{1};
  std::vector<long long> row{1};
  for (int n = 1; n <= N; ++n) {
    std::vector<long long> next{row.back()};
    for (long long v : row) next.push_back(next.back() + v);
    bell.push_back(next.front());
    row = next;
  }
  const auto a = powers_of_g_coeffs(chars("exp(x)", N), GVariant::log_powers).values;
  EXPECT_EQ(a[2], 1);
  EXPECT_EQ(a[3], R(5, 6));
  for (int n = 0; n <= N; ++n) EXPECT_EQ(a[n], R(bell[n]) / factorial<Rational>(n)) << n;
}

TEST(PowersOfG, Stirling1OfExpIsAllOnes) {
  for (const Rational& a : powers_of_g_coeffs(chars("exp(x)", 12), GVariant::stirling1_g).values) EXPECT_EQ(a, 1);
}

TEST(PowersOfG, CoefficientsAreSeriesOfInverseSubstitution) {
  // sum a_n g(t)^n = f(t) means a_n = [y^n] f(g^{-1}(y))
  const int N = 9;
  const std::vector<std::pair<GVariant, std::string>> inv{{GVariant::log_powers, "exp(x)-1"},
                                                          {GVariant::stirling1_g, "-ln(1-x)"},
                                                          {GVariant::lambert_w_g, "x*exp(x)"}};
  for (const std::string f : {"exp(x)", "sin(x)", "1/(1+x)", "atan(x)"}) {
    for (const auto& [v, h] : inv) {
      EXPECT_EQ(powers_of_g_coeffs(chars(f, N), v).values, composed_series(f, h, N)) << f << " " << h;
    }
    EXPECT_EQ(rational_x1_coeffs(chars(f, N)).values, composed_series(f, "x/(1-x)", N)) << f;
  }
}

TEST(PowersOfG, ZeroInZeroOut) {
  const auto z = CharNumbers<Rational>::from_values(std::vector<Rational>(6, R(0)), CharFamily::derivative);
  for (GVariant v : {GVariant::log_powers, GVariant::stirling1_g, GVariant::lambert_w_g}) {
    for (const Rational& a : powers_of_g_coeffs(z, v).values) EXPECT_EQ(a, 0);
  }
}

TEST(PowersOfG, LambertDomain) {
  const auto A = build_derivative_expansion(ExpansionKind::lambert_w_g, chars("exp(x)", 6));
  EXPECT_NO_THROW(A(-0.36));
  EXPECT_THROW(A(-0.4), std::domain_error);
}

TEST(NewPade, Examples) {
  const auto a = rational_x1_coeffs(chars("exp(x)", 4)).values;
  EXPECT_EQ(a[1], 1);
  EXPECT_EQ(a[2], R(3, 2));
  // x^2 coefficient of a_0 + a_1 y + a_2 y^2, y = x/(x+1)
  const auto A = powers_of_g_approx(rational_x1_coeffs(chars("exp(x)", 2)), Rational(0));
  EXPECT_EQ(A.jet(Rational(0), 2)[2], R(1, 2));

  auto c = CharNumbers<Rational>::from_values({R(7), R(0), R(0), R(0)}, CharFamily::derivative);
  EXPECT_EQ(rational_x1_coeffs(c).values, Rs({7, 0, 0, 0}));
}

TEST(NewPade, ShiftedPole) {
  const auto A = powers_of_g_approx(rational_x1_coeffs(chars("exp(x)", 5), Rational(2)), Rational(0));
  EXPECT_THROW(A(2.0), std::domain_error);
  EXPECT_GT(std::abs(A(2.0 - 1e-6)), 1e6);
  EXPECT_NO_THROW(A(-1.0));
  const auto c = chars("exp(x)", 5);
  EXPECT_TRUE(verify_matching(A, c).pass);
  EXPECT_THROW(rational_x1_coeffs(c, Rational(0)), std::domain_error);
}

TEST(NewPade, AgreesWithPadeOnReciprocal) {
  const auto c1 = chars("1/(1+x)", 1);
  const auto c8 = chars("1/(1+x)", 8);
  const auto np = powers_of_g_approx(rational_x1_coeffs(c1), Rational(0));
  const auto pd = pade_approx(pade_solve(c1, 0, 1), Rational(0));
  EXPECT_EQ(verify_matching(np, c8).max_residual, 0.0);
  EXPECT_EQ(verify_matching(pd, c8).max_residual, 0.0);
  EXPECT_DOUBLE_EQ(np(3.0), 0.25);
}

// ---------------------------------------------------------------- Dirichlet

TEST(Dirichlet, IdentityFunction) {
  const int N = 20;
  auto c = CharNumbers<Rational>::from_values(std::vector<Rational>(N + 1, R(0)), CharFamily::derivative);
  c.values[1] = 1;
  const auto g = dirichlet_expansion_coeffs(c, DirichletVariant::G).values;
  const auto r1 = dirichlet_expansion_coeffs(c, DirichletVariant::rat1).values;
  for (int n = 1; n <= N; ++n) {
    EXPECT_EQ(g[n], 1) << n;
    EXPECT_EQ(r1[n], moebius(n)) << n;
  }
}

TEST(Dirichlet, DivisorSumOracle) {
  const int N = 24;
  const auto c = chars("exp(x)*cos(x)", N);
  std::vector<Rational> f(N + 1);
  for (int n = 0; n <= N; ++n) f[n] = c.values[n] / factorial<Rational>(n);
  const auto g = dirichlet_expansion_coeffs(c, DirichletVariant::G).values;
  const auto r1 = dirichlet_expansion_coeffs(c, DirichletVariant::rat1).values;
  const auto r2 = dirichlet_expansion_coeffs(c, DirichletVariant::rat2).values;
  Rational sum_r1(0);
  for (int n = 1; n <= N; ++n) {
    Rational sg(0), s1(0), s2(0);
    for (int k = 1; k <= n; ++k) {
      if (n % k) continue;
      sg += f[n / k];
      s1 += f[n / k] * moebius(k);
      s2 += f[n / k] * nu(k);
    }
    EXPECT_EQ(g[n], sg);
    EXPECT_EQ(r1[n], s1);
    EXPECT_EQ(r2[n], s2);
    sum_r1 += s1;
  }
  EXPECT_EQ(g[0], c.values[0]);
  EXPECT_EQ(r2[0], c.values[0]);
  EXPECT_EQ(r1[0], c.values[0] - sum_r1);
}

TEST(Dirichlet, ZeroFunction) {
  auto c = CharNumbers<Rational>::from_values({R(5), R(0), R(0), R(0), R(0)}, CharFamily::derivative);
  for (DirichletVariant v : {DirichletVariant::G, DirichletVariant::rat1, DirichletVariant::rat2}) {
    const auto a = dirichlet_expansion_coeffs(c, v).values;
    EXPECT_EQ(a, Rs({5, 0, 0, 0, 0}));
  }
}

TEST(Dirichlet, Domains) {
  const auto c = chars("exp(x)", 6);
  const auto r1 = build_derivative_expansion(ExpansionKind::dirichlet_rat1, c);
  const auto r2 = build_derivative_expansion(ExpansionKind::dirichlet_rat2, c);
  const auto g = build_derivative_expansion(ExpansionKind::dirichlet_G, c);
  EXPECT_THROW(r1(1.0), std::domain_error);
  EXPECT_THROW(r1(-1.0), std::domain_error);
  EXPECT_TRUE(std::isfinite(r2(1.0)));
  EXPECT_TRUE(std::isfinite(r2(-1.0)));
  EXPECT_THROW(g(1.0), std::domain_error);
  EXPECT_TRUE(std::isfinite(g(0.5)));
}

TEST(MoebiusG, Evaluation) {
  EXPECT_EQ(moebius_G_eval(0.0, 10).value, 0.0);
  const auto a = moebius_G_eval(0.5, 40), b = moebius_G_eval(0.5, 80);
  EXPECT_NEAR(a.value, b.value, 1e-10);
  EXPECT_LE(std::abs(a.value - b.value), a.tail_bound);
  EXPECT_DOUBLE_EQ(a.tail_bound, std::pow(0.5, 41) / 0.5);
  EXPECT_THROW(moebius_G_eval(1.0, 5), std::domain_error);
  EXPECT_THROW(moebius_G(-1.2), std::domain_error);
}

TEST(MoebiusG, EvenPart) {
  for (double x : {0.1, 0.4, 0.75}) {
    double even = 0.0;
    for (int n = 2; n <= 400; n += 2) even += moebius(n) * std::pow(x, n);
    EXPECT_NEAR(moebius_G(x) + moebius_G(-x), 2 * even, 1e-13);
  }
}

TEST(Dirichlet, SieveTableRecollection) {
  // sum_k a_k g(x^k), with g = sum_m g_m x^m, recollected by powers of x
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> d(-5, 5);
  const int N = 64;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Rational> a(N + 1, R(0)), g(N + 1, R(0));
    for (int n = 1; n <= N; ++n) {
      a[n] = d(rng);
      g[n] = R(d(rng), 1 + trial);
    }
    std::vector<Rational> collected(N + 1, R(0));
    for (int k = 1; k <= N; ++k) {
      for (int m = 1; k * m <= N; ++m) collected[k * m] += a[k] * g[m];
    }
    EXPECT_EQ(dirichlet_convolve(a, g, N), collected);
  }
}

// ---------------------------------------------------------------- dex

TEST(Dex, HyperbolicAndExponential) {
  for (int i = 0; i <= 100; ++i) {
    const double x = -5 + 0.1 * i;
    EXPECT_NEAR(dex_eval(2, 0, x), std::cosh(x), 1e-12 * std::cosh(x));
    EXPECT_NEAR(dex_eval(2, 1, x), std::sinh(x), 1e-12 * std::cosh(x));
    EXPECT_NEAR(dex_eval(1, 0, x), std::exp(x), 1e-12 * std::exp(x));
  }
  // dex_[4,0] = (cosh + cos)/2
  EXPECT_NEAR(dex_eval(4, 0, 1.7), 0.5 * (std::cosh(1.7) + std::cos(1.7)), 1e-14);
}

TEST(Dex, DerivativeRing) {
  const int order = 12;
  for (double x0 : {0.0, 0.7, -1.3}) {
    const Jet<double> v = Jet<double>::variable(x0, order + 1);
    const auto d0 = dex(3, 0, v).derivatives();
    const auto d2 = dex(3, 2, v).derivatives();
    for (int k = 0; k <= order; ++k) EXPECT_NEAR(d0[k + 1], d2[k], 1e-12 * std::max(1.0, std::abs(d2[k])));
  }
}

TEST(Dex, ApproximantIsCyclic) {
  const int N = 5;
  const auto c = chars("exp(x)*sin(x)", N - 1);
  const auto A = dex_approx(c);
  const auto d = A.jet(Rational(0), 2 * N - 1).derivatives();
  for (int k = 0; k < 2 * N; ++k) EXPECT_EQ(d[k], c.values[k % N]) << k;
}

TEST(Dex, IndexOutOfRing) {
  EXPECT_THROW(dex_eval(3, 3, 0.5), std::domain_error);
  EXPECT_THROW(dex_eval(3, -1, 0.5), std::domain_error);
  EXPECT_THROW(dex(2, 2, Jet<double>::variable(0.0, 2)), std::domain_error);
}

TEST(PrimeIndicator, CountsDivisors) {
  const int pmax = 30;
  const auto P = prime_indicator_P(pmax);
  EXPECT_EQ(P[7], 1);
  EXPECT_EQ(P[6], 3);
  EXPECT_EQ(P[2], 1);
  for (int p = 2; p <= pmax; ++p) {
    int divisors = 0;
    for (int i = 2; i <= p; ++i) divisors += p % i == 0;
    EXPECT_EQ(P[p], divisors) << p;
  }
  EXPECT_THROW(prime_indicator_P(1), std::domain_error);
}

// ---------------------------------------------------------------- nonlinear

TEST(Nonlinear, LogOfExpIsExact) {
  const auto c = CharNumbers<Rational>::nonlinear(Expr::parse("exp(x)"), NonlinearMap::ln, Rational(0), 7);
  for (int n = 0; n <= 7; ++n) EXPECT_EQ(c.values[n], n == 1 ? R(1) : R(0));
  const auto A = nonlinear_approx(c);
  for (double x : {-2.0, 0.3, 4.0}) EXPECT_DOUBLE_EQ(A(x), std::exp(x));
  EXPECT_EQ(verify_matching(A, c).max_residual, 0.0);
}

TEST(Nonlinear, IdentityIsTaylor) {
  const auto c = CharNumbers<Rational>::nonlinear(Expr::parse("atan(x)"), NonlinearMap::identity, Rational(0), 9);
  const auto A = nonlinear_approx(c);
  const auto T = taylor_approx(taylor_coeffs(chars("atan(x)", 9)), Rational(0));
  for (double x : {-0.8, 0.1, 0.6}) EXPECT_NEAR(A(x), T(x), 1e-15);
}

TEST(Nonlinear, HandSetCoefficientsGiveInverseMap) {
  const std::vector<double> a{0.0, 1.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(nonlinear_from_coeffs(a, NonlinearMap::ln, 0.0)(1.5), std::exp(1.5));
  EXPECT_DOUBLE_EQ(nonlinear_from_coeffs(a, NonlinearMap::sqrt, 0.0)(1.5), 2.25);
  EXPECT_DOUBLE_EQ(nonlinear_from_coeffs(a, NonlinearMap::cube, 0.0)(8.0), 2.0);
}

TEST(Nonlinear, OutsideInverseDomain) {
  EXPECT_TRUE(std::isnan(nonlinear_from_coeffs(std::vector<double>{-1.0}, NonlinearMap::sqrt, 0.0)(0.0)));
  EXPECT_THROW(nonlinear_from_coeffs(std::vector<Rational>{R(0), R(1)}, NonlinearMap::cube, Rational(0)).jet(Rational(0), 2),
               evaluation_error);
  EXPECT_THROW(nonlinear_approx(chars("exp(x)", 3)), family_mismatch);
}
