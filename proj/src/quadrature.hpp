#pragma once

#include <array>
#include <vector>

namespace stns {

/// Quadrature rule on the reference triangle with vertices (0,0), (1,0),
/// (0,1). Points are barycentric, weights carry the reference measure 1/2.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Collapsed tensor Gauss-Legendre rule with q points per direction, exact
/// for all bivariate polynomials of total degree <= 2q - 2. Nodes and weights
/// are computed at machine precision, no tabulated constants.
QuadratureRule make_triangle_rule(int q);

/// Default assembly rule, exact to total degree 8 (q = 5). The worst
/// polynomial assembly integrand has degree 5; the margin keeps consistency
/// error from analytic forcing below the linear-solver tolerance.
const QuadratureRule& default_rule();

/// Gauss-Legendre nodes/weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace stns
