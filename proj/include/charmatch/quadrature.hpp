#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace charmatch {

/// Composite Gauss-Legendre rule: `points` nodes on each of `panels`
/// equal subintervals.
class Quadrature {
 public:
  struct Result {
    double value;
    double error_estimate;
  };

  explicit Quadrature(int points = 32, int panels = 8) : points_(points), panels_(panels) {
    if (points < 1 || panels < 1) throw std::invalid_argument("quadrature needs points >= 1 and panels >= 1");
    compute_rule();
  }

  int points() const { return points_; }
  int panels() const { return panels_; }
  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& weights() const { return w_; }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    return integrate_panels(f, a, b, panels_);
  }

  /// Value with panel count as configured; the estimate compares against
  /// twice as many panels.
  template <class F>
  Result integrate_with_estimate(F&& f, double a, double b) const {
    const double coarse = integrate_panels(f, a, b, panels_);
    const double fine = integrate_panels(f, a, b, 2 * panels_);
    return {fine, std::abs(fine - coarse)};
  }

 private:
  template <class F>
  double integrate_panels(F& f, double a, double b, int panels) const {
    if (a == b) return 0.0;
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * h;
      const double mid = lo + 0.5 * h, half = 0.5 * h;
      double s = 0.0;
      for (std::size_t i = 0; i < x_.size(); ++i) s += w_[i] * f(mid + half * x_[i]);
      total += s * half;
    }
    return total;
  }

  void compute_rule() {
    const int n = points_;
    x_.assign(n, 0.0);
    w_.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x_[i] = -z;
      x_[n - 1 - i] = z;
      w_[i] = w_[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }

  int points_;
  int panels_;
  std::vector<double> x_, w_;
};

}  // namespace charmatch
