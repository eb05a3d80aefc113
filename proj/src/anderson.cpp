#include "anderson.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace stns {

LeastSquaresResult constrained_least_squares(const Eigen::SparseMatrix<double>& gram,
                                             const Eigen::VectorXd& w0,
                                             std::span<const Eigen::VectorXd> history) {
  LeastSquaresResult out;
  out.alpha.assign(history.size(), 0.0);
  out.combined = w0;

  const Eigen::VectorXd gw0 = gram * w0;
  const double w0_sq = w0.dot(gw0);
  out.w0_norm = w0_sq > 0.0 ? std::sqrt(w0_sq) : 0.0;
  if (out.w0_norm == 0.0) {
    out.converged = true;
    out.theta = 1.0;
    return out;
  }
  if (history.empty()) return out;

  const int m = static_cast<int>(history.size());
  std::vector<Eigen::VectorXd> diff(m), gdiff(m);
  std::vector<int> active;
  for (int j = 0; j < m; ++j) {
    diff[j] = history[j] - w0;
    gdiff[j] = gram * diff[j];
    const double dn_sq = diff[j].dot(gdiff[j]);
    if (dn_sq > 0.0 && std::sqrt(dn_sq) >= 1e-13 * out.w0_norm) active.push_back(j);
  }

  Eigen::VectorXd alpha_active;
  while (!active.empty()) {
    const int na = static_cast<int>(active.size());
    Eigen::MatrixXd normal(na, na);
    Eigen::VectorXd rhs(na);
    for (int r = 0; r < na; ++r) {
      rhs[r] = -diff[active[r]].dot(gw0);
      for (int c = 0; c <= r; ++c) {
        const double v = diff[active[r]].dot(gdiff[active[c]]);
        normal(r, c) = v;
        normal(c, r) = v;
      }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    if (lmin <= 0.0 || lmax / lmin > 1e12) {
      active.pop_back();  // drop the oldest retained column
      continue;
    }
    alpha_active = eig.eigenvectors() *
                   (eig.eigenvectors().transpose() * rhs).cwiseQuotient(eig.eigenvalues());
    break;
  }
  if (active.empty()) {
    out.theta = 1.0;
    return out;
  }

  Eigen::VectorXd combined = w0;
  for (int r = 0; r < static_cast<int>(active.size()); ++r)
    combined += alpha_active[r] * diff[active[r]];
  const double comb_sq = combined.dot(gram * combined);
  const double theta = comb_sq > 0.0 ? std::sqrt(comb_sq) / out.w0_norm : 0.0;
  if (theta > 1.0) {
    // alpha = 0 is feasible with objective ||w0||_G, so a larger value can
    // only be rounding; fall back to the identity.
    out.theta = 1.0;
    return out;
  }
  for (int r = 0; r < static_cast<int>(active.size()); ++r)
    out.alpha[active[r]] = alpha_active[r];
  out.combined = std::move(combined);
  out.theta = theta;
  return out;
}

}  // namespace stns
