#pragma once
// Fixed Gauss-Legendre rule on [0, 1] for the radial (Poincare-lemma)
// homotopy integrals.  Nodes and weights are generated once by Newton
// iteration on the Legendre polynomial; 32 points is far past what the
// analytic integrands in the catalog need.

#include <cmath>
#include <vector>

namespace saslift {

struct QuadratureRule {
  std::vector<double> node;    // in [0, 1]
  std::vector<double> weight;  // sums to 1
};

inline QuadratureRule gauss_legendre_unit(int n) {
  QuadratureRule q;
  q.node.resize(n);
  q.weight.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess for the i-th root of P_n on [-1, 1].
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    q.node[n - 1 - i] = 0.5 * (x + 1.0);
    q.weight[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

inline const QuadratureRule& radial_quadrature() {
  static const QuadratureRule q = gauss_legendre_unit(32);
  return q;
}

}  // namespace saslift
