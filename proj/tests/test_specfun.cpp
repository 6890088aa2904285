#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "charmatch/specfun.hpp"

using namespace charmatch;

namespace {

Rational R(long long n, long long d = 1) { return make_rational(n, d); }

// S(n,k) = k S(n-1,k) + S(n-1,k-1)
Rational stirling2_recurrence(unsigned n, unsigned k) {
  std::vector<std::vector<Rational>> s(n + 1, std::vector<Rational>(n + 1, Rational(0)));
  s[0][0] = 1;
  for (unsigned i = 1; i <= n; ++i) {
    for (unsigned j = 1; j <= i; ++j) s[i][j] = Rational(j) * s[i - 1][j] + s[i - 1][j - 1];
  }
  return s[n][k];
}

int moebius_brute(int n) {
  // sum_{d | n} mu(d) = [n = 1], solved forward.
  static std::vector<int> mu{0, 1};
  while (static_cast<int>(mu.size()) <= n) {
    const int m = static_cast<int>(mu.size());
    int s = 0;
    for (int d = 1; d < m; ++d) {
      if (m % d == 0) s += mu[d];
    }
    mu.push_back(-s);
  }
  return mu[n];
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(lo) < 0) == (f(mid) < 0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Binomial, GeneralExamples) {
  EXPECT_EQ(binomial_general(R(5), 2), R(10));
  EXPECT_EQ(binomial_general(R(1, 2), 2), R(-1, 8));
  EXPECT_EQ(binomial_general(R(3), 5), R(0));
  EXPECT_DOUBLE_EQ(binomial_general(0.5, 2), -0.125);
}

TEST(Stirling2, Examples) {
  EXPECT_EQ(stirling2(0, 0), R(1));
  EXPECT_EQ(stirling2(3, 2), stirling2_recurrence(3, 2));
  EXPECT_EQ(stirling2(3, 2), R(3));
  EXPECT_EQ(stirling2(4, 4), R(1));
  EXPECT_THROW(stirling2(2, 3), std::domain_error);
}

TEST(Stirling2, MatchesRecurrence) {
  for (unsigned n = 0; n <= 15; ++n) {
    for (unsigned k = 0; k <= n; ++k) EXPECT_EQ(stirling2(n, k), stirling2_recurrence(n, k)) << n << "," << k;
  }
}

TEST(Stirling2, FallingFactorialRowIdentity) {
  for (unsigned n = 0; n <= 12; ++n) {
    for (long long x = 0; x <= static_cast<long long>(n); ++x) {
      Rational s = 0;
      for (unsigned k = 0; k <= n; ++k) {
        Rational ff = 1;
        for (unsigned i = 0; i < k; ++i) ff *= Rational(x - static_cast<long long>(i));
        s += stirling2(n, k) * ff;
      }
      EXPECT_EQ(s, gpow(Rational(x), n));
    }
  }
}

TEST(Stirling1, Examples) {
  EXPECT_EQ(stirling1_unsigned(3, 1), R(2));
  for (unsigned n = 0; n <= 20; ++n) EXPECT_EQ(stirling1_unsigned(n, n), R(1));
  Rational row = 0;
  for (unsigned k = 0; k <= 4; ++k) row += stirling1_unsigned(4, k);
  EXPECT_EQ(row, R(24));
  EXPECT_THROW(stirling1_unsigned(2, 3), std::domain_error);
}

TEST(Stirling1, RisingFactorialCoefficients) {
  // x (x+1) ... (x+n-1) = sum_k c(n,k) x^k
  for (unsigned n = 0; n <= 10; ++n) {
    Polynomial<Rational> p({Rational(1)});
    for (unsigned i = 0; i < n; ++i) p = p * Polynomial<Rational>({Rational(i), Rational(1)});
    for (unsigned k = 0; k <= n; ++k) EXPECT_EQ(stirling1_unsigned(n, k), p.coeff(k));
  }
}

TEST(CentralFactorial, Examples) {
  EXPECT_EQ(central_factorial_abs(2, 2), R(1));
  EXPECT_EQ(central_factorial_abs(3, 1), R(1, 4));
  EXPECT_EQ(central_factorial_abs(3, 2), R(0));
}

TEST(CentralFactorial, ProductIdentityAtRandomRationals) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-50, 50), den(1, 9);
  for (unsigned n = 1; n <= 12; ++n) {
    const Polynomial<Rational> row = central_factorial_row(n);
    for (int trial = 0; trial < 20; ++trial) {
      const Rational x(num(rng), den(rng));
      Rational prod = x;
      for (unsigned j = 1; j + 1 <= n; ++j) prod *= x + Rational(n, 2) - Rational(j);
      EXPECT_EQ(row.evaluate(x), prod);
    }
  }
}

TEST(Bernoulli, Polynomials) {
  EXPECT_EQ(bernoulli_poly(0).coeffs(), (std::vector<Rational>{R(1)}));
  EXPECT_EQ(bernoulli_poly(1).coeffs(), (std::vector<Rational>{R(-1, 2), R(1)}));
  EXPECT_EQ(bernoulli_poly(2).coeffs(), (std::vector<Rational>{R(1, 6), R(-1), R(1)}));
  // B_n(x+1) - B_n(x) = n x^(n-1)
  for (unsigned n = 1; n <= 12; ++n) {
    const Polynomial<Rational> B = bernoulli_poly(n);
    const Polynomial<Rational> diff = B.compose_affine(Rational(1), Rational(1)) - B;
    EXPECT_EQ(diff, Polynomial<Rational>::monomial(n - 1) * Rational(n));
  }
}

TEST(Legendre, Coefficients) {
  EXPECT_EQ(legendre_coeffs(0).coeffs(), (std::vector<Rational>{R(1)}));
  EXPECT_EQ(legendre_coeffs(2).coeffs(), (std::vector<Rational>{R(-1, 2), R(0), R(3, 2)}));
  EXPECT_EQ(legendre_coeffs(1, true).coeffs(), (std::vector<Rational>{R(-1), R(2)}));
}

TEST(Legendre, MatchesBonnetRecurrence) {
  Polynomial<Rational> p0({R(1)}), p1({R(0), R(1)});
  for (unsigned n = 2; n <= 14; ++n) {
    const Polynomial<Rational> p2 =
        (p1 * Polynomial<Rational>({R(0), R(2 * n - 1)}) - p0 * Rational(n - 1)) * Rational(R(1) / Rational(n));
    EXPECT_EQ(legendre_coeffs(n), p2) << n;
    p0 = p1;
    p1 = p2;
  }
}

TEST(Legendre, ShiftedIsAffineImage) {
  for (unsigned n = 0; n <= 12; ++n) {
    EXPECT_EQ(legendre_coeffs(n, true), legendre_coeffs(n).compose_affine(R(2), R(-1))) << n;
  }
}

TEST(Legendre, TriangularAgainstMonomials) {
  for (unsigned m = 1; m <= 10; ++m) {
    for (unsigned n = 0; n < m; ++n) {
      EXPECT_EQ((legendre_coeffs(m) * Polynomial<Rational>::monomial(n)).integrate(R(-1), R(1)), R(0));
    }
  }
}

TEST(Moebius, Values) {
  EXPECT_EQ(moebius(1), 1);
  EXPECT_EQ(moebius(4), 0);
  EXPECT_EQ(moebius(6), 1);
  EXPECT_THROW(moebius(0), std::domain_error);
  for (int n = 1; n <= 300; ++n) EXPECT_EQ(moebius(n), moebius_brute(n)) << n;
}

TEST(Nu, Values) {
  EXPECT_EQ(nu(1), 1);
  EXPECT_EQ(nu(5), -1);
  EXPECT_EQ(nu(9), 0);
}

TEST(Dirichlet, ConvolutionIdentities) {
  const std::size_t N = 100;
  std::vector<long long> delta(N + 1, 0), ones(N + 1, 1), mu(N + 1, 0), s(N + 1, 0), v(N + 1, 0);
  delta[1] = 1;
  ones[0] = 0;
  for (std::size_t n = 1; n <= N; ++n) {
    mu[n] = moebius(n);
    s[n] = n % 4 == 1 ? 1 : n % 4 == 3 ? -1 : 0;
    v[n] = nu(n);
  }
  EXPECT_EQ(dirichlet_convolve(delta, delta, N), delta);
  EXPECT_EQ(dirichlet_convolve(ones, mu, N), delta);
  EXPECT_EQ(dirichlet_convolve(s, v, N), delta);
  EXPECT_EQ(dirichlet_inverse(ones, N), mu);
  EXPECT_EQ(dirichlet_inverse(delta, N), delta);
  EXPECT_EQ(dirichlet_inverse(s, N), v);
}

TEST(Dirichlet, InverseRoundTripRandom) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(-5, 5);
  const std::size_t N = 200;
  std::vector<Rational> delta(N + 1, Rational(0));
  delta[1] = 1;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> u(N + 1, Rational(0));
    for (std::size_t n = 1; n <= N; ++n) u[n] = d(rng);
    if (u[1] == 0) u[1] = 3;
    EXPECT_EQ(dirichlet_convolve(u, dirichlet_inverse(u, N), N), delta);
  }
}

TEST(Dirichlet, InverseNeedsNonzeroFirst) {
  std::vector<Rational> u{Rational(0), Rational(0), Rational(1)};
  EXPECT_THROW(dirichlet_inverse(u, 2), std::domain_error);
}

TEST(Bessel, Values) {
  EXPECT_EQ(bessel_j(0, 0.0), 1.0);
  EXPECT_EQ(bessel_j(1, 0.0), 0.0);
  const double root = bisect([](double x) { return bessel_j(0, x); }, 2.0, 3.0);
  EXPECT_NEAR(root, 2.4048255576957728, 1e-10);
  EXPECT_NEAR(bessel_j(0, 2.4048255576957728), 0.0, 1e-10);
}

TEST(Bessel, GeneratingIdentity) {
  for (double x = -10.0; x <= 10.0; x += 0.37) {
    double s = bessel_j(0, x);
    for (unsigned k = 1; k <= 40; ++k) s += 2.0 * bessel_j(2 * k, x);
    EXPECT_NEAR(s, 1.0, 1e-9) << x;
  }
}

TEST(Bessel, RecurrenceConsistency) {
  // J_{n-1} + J_{n+1} = (2n/x) J_n, a check independent of the series itself
  for (double x : {0.5, 3.0, 9.5, 17.0, 29.0}) {
    for (unsigned n = 1; n <= 39; ++n) {
      const double lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
      EXPECT_NEAR(lhs, 2.0 * n / x * bessel_j(n, x), 1e-12) << n << " " << x;
    }
  }
}

TEST(LambertW, Values) {
  EXPECT_EQ(lambert_w0(0.0), 0.0);
  EXPECT_NEAR(lambert_w0(std::exp(1.0)), 1.0, 1e-14);
  const double w2 = bisect([](double w) { return w * std::exp(w) - 2.0; }, 0.0, 2.0);
  EXPECT_NEAR(lambert_w0(2.0), w2, 1e-13);
  EXPECT_THROW(lambert_w0(-0.5), std::domain_error);
}

TEST(LambertW, ResidualOnLogGrid) {
  const double lo = -std::exp(-1.0) + 1e-6;
  for (int i = 0; i <= 400; ++i) {
    // log-spaced offsets from the branch point up to 10
    const double t = std::pow(10.0, -6.0 + 7.1 * i / 400.0);
    const double x = std::min(lo - 1e-6 + t, 10.0);
    if (x < lo) continue;
    const double w = lambert_w0(x);
    EXPECT_LE(std::abs(w * std::exp(w) - x), 1e-12) << x;
  }
}

TEST(SeqTable, AbsentOutsideRange) {
  SeqTable s2(SeqKind::stirling2, 6);
  EXPECT_EQ(s2.at(4, 2), std::optional<Rational>(R(7)));
  EXPECT_FALSE(s2.at(2, 4).has_value());
  EXPECT_FALSE(s2.at(7, 1).has_value());
  EXPECT_FALSE(s2.at(3).has_value());
  SeqTable mu(SeqKind::moebius, 10);
  EXPECT_EQ(mu.at(6), std::optional<Rational>(R(1)));
  EXPECT_FALSE(mu.at(0).has_value());
  SeqTable cf(SeqKind::central_factorial_abs, 5);
  EXPECT_EQ(cf.at(3, 1), std::optional<Rational>(R(1, 4)));
  EXPECT_FALSE(cf.at(0, 0).has_value());
  SeqTable lahs(SeqKind::lah, 5);
  EXPECT_EQ(lahs.at(3, 2), std::optional<Rational>(R(6)));
  SeqTable idem(SeqKind::bell_arg_special, 5);
  EXPECT_EQ(idem.at(3, 1), std::optional<Rational>(R(3)));
}
