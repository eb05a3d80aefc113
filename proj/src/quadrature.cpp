#include "quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stns {

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_01: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Roots of P_n on [-1,1] by Newton iteration on the three-term recurrence,
  // then mapped to [0,1]. Symmetric pairs share one solve.
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[k] = 0.5 * (1.0 - x);  // x descending in k -> node ascending
    nodes[n - 1 - k] = 0.5 * (1.0 + x);
    weights[k] = 0.5 * w;
    weights[n - 1 - k] = 0.5 * w;
  }
}

QuadratureRule make_triangle_rule(int q) {
  std::vector<double> gx, gw;
  gauss_legendre_01(q, gx, gw);

  QuadratureRule rule;
  rule.points.reserve(static_cast<std::size_t>(q) * q);
  rule.weights.reserve(static_cast<std::size_t>(q) * q);
  // Duffy map of the unit square: x = xi*(1-eta), y = eta, Jacobian (1-eta).
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      const double x = gx[a] * (1.0 - gx[b]);
      const double y = gx[b];
      rule.points.push_back({1.0 - x - y, x, y});
      rule.weights.push_back(gw[a] * gw[b] * (1.0 - gx[b]));
    }
  }
  return rule;
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = make_triangle_rule(5);
  return rule;
}

}  // namespace stns
