#include <gtest/gtest.h>

#include <random>

#include "charmatch/expansions.hpp"

using namespace charmatch;

namespace {

Rational R(long long n, long long d = 1) { return make_rational(n, d); }

CharNumbers<Rational> exact_chars(const std::string& f, int N) {
  return CharNumbers<Rational>::derivative(Expr::parse(f), Rational(0), N);
}

// Kinds whose coefficients are a triangular function of c (derivative family).
const std::vector<ExpansionKind>& triangular_derivative_kinds() {
  static const std::vector<ExpansionKind> k{
      ExpansionKind::taylor,       ExpansionKind::nsbf,          ExpansionKind::pow_sine,
      ExpansionKind::exp_weighted, ExpansionKind::log_powers,    ExpansionKind::rational_x_over_x1,
      ExpansionKind::stirling1_g,  ExpansionKind::lambert_w_g,   ExpansionKind::dirichlet_G,
      ExpansionKind::dirichlet_rat1, ExpansionKind::dirichlet_rat2, ExpansionKind::dex};
  return k;
}

KindParams<Rational> sample_params() {
  KindParams<Rational> p;
  p.w = R(-1, 2);
  p.q = 2;
  return p;
}

}  // namespace

TEST(TriForwardSolve, IdentityReturnsInput) {
  TriMatrix<Rational> T(3);
  for (int i = 0; i <= 3; ++i) T.at(i, i) = 1;
  const std::vector<Rational> c{R(3), R(-1, 2), R(7), R(0)};
  EXPECT_EQ(tri_forward_solve(T, c), c);
}

TEST(TriForwardSolve, AllOnesLowerTriangle) {
  TriMatrix<Rational> T(2);
  for (int n = 0; n <= 2; ++n)
    for (int m = 0; m <= n; ++m) T.at(n, m) = 1;
  EXPECT_EQ(tri_forward_solve(T, {R(1), R(2), R(4)}), (std::vector<Rational>{R(1), R(1), R(2)}));
}

TEST(TriForwardSolve, ZeroDiagonalIsDependent) {
  TriMatrix<Rational> T(2);
  T.at(0, 0) = 1;
  T.at(2, 2) = 1;
  T.at(1, 0) = 5;
  try {
    tri_forward_solve(T, {R(1), R(1), R(1)});
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("dependent triangular system"), std::string::npos);
  }
}

TEST(TriForwardSolve, RandomExactRoundTrip) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  for (int N : {1, 5, 17, 50}) {
    TriMatrix<Rational> T(N);
    std::vector<Rational> c(N + 1);
    for (int n = 0; n <= N; ++n) {
      for (int m = 0; m <= n; ++m) T.at(n, m) = R(num(rng), den(rng));
      if (T.at(n, n) == 0) T.at(n, n) = R(1, den(rng));
      c[n] = R(num(rng), den(rng));
    }
    EXPECT_EQ(T.multiply(tri_forward_solve(T, c)), c) << N;
  }
}

TEST(TriForwardSolve, FloatResidualSmall) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  const int N = 30;
  TriMatrix<double> T(N);
  std::vector<double> c(N + 1);
  for (int n = 0; n <= N; ++n) {
    for (int m = 0; m < n; ++m) T.at(n, m) = u(rng) / (n + 1);
    T.at(n, n) = 1.0 + std::abs(u(rng));
    c[n] = u(rng);
  }
  const auto back = T.multiply(tri_forward_solve(T, c));
  for (int n = 0; n <= N; ++n) EXPECT_NEAR(back[n], c[n], 1e-12);
}

TEST(VerifyMatching, TaylorOfExpIsExact) {
  const auto c = exact_chars("exp(x)", 6);
  const VerifyReport r = verify_matching(build_derivative_expansion(ExpansionKind::taylor, c), c);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.max_residual, 0.0);
  EXPECT_EQ(r.residuals.size(), 7u);
}

TEST(VerifyMatching, NewPadeOfExpFloat) {
  const auto c = CharNumbers<double>::derivative(Expr::parse("exp(x)"), 0.0, 4);
  const VerifyReport r = verify_matching(build_derivative_expansion(ExpansionKind::rational_x_over_x1, c), c);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_residual, 1e-10);
}

TEST(VerifyMatching, FamilyMismatchThrows) {
  const auto c = exact_chars("exp(x)", 4);
  const auto A = build_derivative_expansion(ExpansionKind::taylor, c);
  auto m = CharNumbers<Rational>::from_values(c.values, CharFamily::moment);
  EXPECT_THROW(verify_matching(A, m), family_mismatch);
}

TEST(VerifyMatching, DetectsWrongCoefficient) {
  const auto c = exact_chars("sin(x)", 5);
  CoeffSeq<Rational> a = taylor_coeffs(c);
  a.values[3] += R(1, 1000);
  const VerifyReport r = verify_matching(taylor_approx(a, Rational(0)), c);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.residuals[3], 1.0 / 1000);
  EXPECT_EQ(r.residuals[2], 0.0);
}

TEST(VerifyMatching, ReportJson) {
  const auto c = exact_chars("exp(x)", 2);
  const nlohmann::json j = verify_matching(build_derivative_expansion(ExpansionKind::taylor, c), c);
  EXPECT_EQ(j.at("kind"), "taylor");
  EXPECT_EQ(j.at("order"), 2);
  EXPECT_EQ(j.at("residuals").size(), 3u);
  EXPECT_EQ(j.at("max_residual"), 0.0);
  EXPECT_EQ(j.at("pass"), true);
}

TEST(DeltaCheck, TaylorBasisIsDelta) {
  const int N = 7;
  std::vector<Approximant<Rational>> basis;
  for (int m = 0; m <= N; ++m) {
    basis.push_back(Approximant<Rational>::from_polynomial(
        Polynomial<Rational>::monomial(m, Rational(1) / factorial<Rational>(m))));
  }
  EXPECT_TRUE(is_identity(delta_check(basis, CharFamily::derivative, FamilyParams<Rational>{})));
}

TEST(DeltaCheck, LegendreUnderMomentsIsTriangular) {
  const int N = 8;
  std::vector<Approximant<Rational>> basis;
  for (int m = 0; m <= N; ++m) basis.push_back(Approximant<Rational>::from_polynomial(legendre_coeffs(m)));
  const auto M = delta_check(basis, CharFamily::moment, FamilyParams<Rational>{});
  EXPECT_TRUE(is_lower_triangular(M));
  EXPECT_FALSE(is_identity(M));
  // int_{-1}^{1} x^n P_n = 2^(n+1) (n!)^2 / (2n+1)!
  for (int n = 0; n <= N; ++n) {
    EXPECT_EQ(M[n][n], gpow(R(2), n + 1) * factorial<Rational>(n) * factorial<Rational>(n) / factorial<Rational>(2 * n + 1));
  }
}

TEST(DeltaCheck, BernoulliUnderEndpointDifferencesIsDelta) {
  const int N = 8;
  std::vector<Approximant<Rational>> basis;
  for (int m = 0; m <= N; ++m) {
    basis.push_back(Approximant<Rational>::from_polynomial(bernoulli_poly(m) * (Rational(1) / factorial<Rational>(m))));
  }
  FamilyParams<Rational> p;
  p.a = 0;
  p.b = 1;
  EXPECT_TRUE(is_identity(delta_check(basis, CharFamily::endpoint_difference, p)));
}

TEST(DeltaCheck, MonomialsUnderMomentsAreNotTriangular) {
  std::vector<Approximant<Rational>> basis;
  for (int m = 0; m <= 3; ++m) basis.push_back(Approximant<Rational>::from_polynomial(Polynomial<Rational>::monomial(m)));
  EXPECT_FALSE(is_lower_triangular(delta_check(basis, CharFamily::moment, FamilyParams<Rational>{})));
}

TEST(Persistence, TriangularKindsKeepLeadingCoefficients) {
  for (const std::string f : {"exp(x)", "sin(x)", "atan(x)", "ln(x^2+1)"}) {
    const int N = 8;
    const auto cN = exact_chars(f, N), cN1 = exact_chars(f, N + 1);
    for (ExpansionKind k : triangular_derivative_kinds()) {
      ASSERT_TRUE(is_triangular(k));
      const auto a = build_derivative_expansion(k, cN, sample_params()).coeffs.values;
      const auto b = build_derivative_expansion(k, cN1, sample_params()).coeffs.values;
      ASSERT_EQ(a.size() + 1, b.size());
      // rat1's constant b0 is re-derived from the truncated sum at each order.
      const std::size_t start = k == ExpansionKind::dirichlet_rat1 ? 1 : 0;
      for (std::size_t n = start; n < a.size(); ++n) EXPECT_EQ(a[n], b[n]) << kind_name(k) << " " << f << " n=" << n;
    }
  }
}

TEST(Persistence, Rat1ConstantDependsOnOrder) {
  const auto a = build_derivative_expansion(ExpansionKind::dirichlet_rat1, exact_chars("exp(x)", 4)).coeffs.values;
  const auto b = build_derivative_expansion(ExpansionKind::dirichlet_rat1, exact_chars("exp(x)", 5)).coeffs.values;
  EXPECT_NE(a[0], b[0]);
}

TEST(Persistence, PadeIsNotPersistent) {
  EXPECT_FALSE(is_triangular(ExpansionKind::pade));
  // Flat layout [p_0..p_m, q_1..q_n]: the sequence at N = 2 is not a prefix of the one at N = 4.
  const auto p11 = pade_solve(exact_chars("exp(x)", 2), 1, 1).values;
  const auto p22 = pade_solve(exact_chars("exp(x)", 4), 2, 2).values;
  ASSERT_EQ(p11, (std::vector<Rational>{R(1), R(1, 2), R(-1, 2)}));
  ASSERT_EQ(p22, (std::vector<Rational>{R(1), R(1, 2), R(1, 12), R(-1, 2), R(1, 12)}));
  EXPECT_NE(p11, std::vector<Rational>(p22.begin(), p22.begin() + 3));
}

TEST(DeltaKinds, CoefficientDependsOnlyOnOwnNumber) {
  const int N = 7;
  const auto base = exact_chars("atan(x)+exp(x)", N);
  for (ExpansionKind k : {ExpansionKind::taylor, ExpansionKind::dex}) {
    ASSERT_TRUE(is_delta(k));
    const auto a = build_derivative_expansion(k, base).coeffs.values;
    for (int m = 0; m <= N; ++m) {
      auto c = base;
      c.values[m] += R(3, 7);
      const auto b = build_derivative_expansion(k, c).coeffs.values;
      for (int n = 0; n <= N; ++n) {
        if (n != m) EXPECT_EQ(a[n], b[n]) << kind_name(k);
      }
      EXPECT_NE(a[m], b[m]);
    }
  }
  auto nl = CharNumbers<Rational>::nonlinear(Expr::parse("exp(x)"), NonlinearMap::ln, Rational(0), N);
  const auto a = nonlinear_approx(nl).coeffs.values;
  nl.values[2] += 1;
  const auto b = nonlinear_approx(nl).coeffs.values;
  for (int n = 0; n <= N; ++n) EXPECT_EQ(a[n] == b[n], n != 2);
}

TEST(DeltaKinds, NonDeltaKindsMixNumbers) {
  EXPECT_FALSE(is_delta(ExpansionKind::nsbf));
  const auto base = exact_chars("exp(x)", 4);
  auto c = base;
  c.values[0] += 1;
  EXPECT_NE(nsbf_coeffs(base).values[2], nsbf_coeffs(c).values[2]);
}

TEST(KindNames, ParseRoundTrip) {
  for (const KindInfo& info : kind_table()) {
    const auto k = parse_kind(info.name);
    ASSERT_TRUE(k.has_value()) << info.name;
    EXPECT_EQ(*k, info.kind);
  }
  EXPECT_EQ(parse_kind("Rational_X_Over_X1"), ExpansionKind::rational_x_over_x1);
  EXPECT_FALSE(parse_kind("bogus").has_value());
}
