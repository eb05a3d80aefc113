#include "saddle.hpp"

#include <cmath>

namespace stns {

SaddleSolver::SaddleSolver(const TaylorHoodSpace& space, const SparseOperator& coupling,
                           int pinned_pressure_dof)
    : space_(space), coupling_(coupling), pinned_(pinned_pressure_dof) {
  n_interior_ = static_cast<int>(space.interior.size());
  n_pressure_ = space.pressure_count - 1;
  pressure_to_reduced_.assign(space.pressure_count, -1);
  int next = 0;
  for (int q = 0; q < space.pressure_count; ++q)
    if (q != pinned_) pressure_to_reduced_[q] = n_interior_ + next++;
}

SparseOperator SaddleSolver::build_reduced(const SparseOperator& momentum) const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(momentum.nonZeros() + 2 * coupling_.nonZeros());

  for (int col = 0; col < momentum.outerSize(); ++col) {
    const int jc = space_.full_to_interior[col];
    if (jc < 0) continue;
    for (SparseOperator::InnerIterator it(momentum, col); it; ++it) {
      const int ir = space_.full_to_interior[static_cast<int>(it.row())];
      if (ir >= 0) triplets.emplace_back(ir, jc, it.value());
    }
  }
  // coupling is pressure x velocity; emit B in the continuity rows and B^T in
  // the momentum columns.
  for (int col = 0; col < coupling_.outerSize(); ++col) {
    const int ju = space_.full_to_interior[col];
    if (ju < 0) continue;
    for (SparseOperator::InnerIterator it(coupling_, col); it; ++it) {
      const int rp = pressure_to_reduced_[static_cast<int>(it.row())];
      if (rp < 0) continue;
      triplets.emplace_back(rp, ju, it.value());
      triplets.emplace_back(ju, rp, it.value());
    }
  }

  const int n = n_interior_ + n_pressure_;
  SparseOperator reduced(n, n);
  reduced.setFromTriplets(triplets.begin(), triplets.end());
  reduced.makeCompressed();
  return reduced;
}

Eigen::VectorXd SaddleSolver::build_rhs(const SparseOperator& momentum,
                                        const Eigen::VectorXd& momentum_rhs) const {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_interior_ + n_pressure_);
  for (int i = 0; i < n_interior_; ++i) rhs[i] = momentum_rhs[space_.interior[i]];

  // Lifting: move the action of the full operators on the boundary values to
  // the right-hand side.
  for (int col = 0; col < momentum.outerSize(); ++col) {
    if (!space_.dirichlet_mask[col]) continue;
    const double g = space_.dirichlet_value[col];
    if (g == 0.0) continue;
    for (SparseOperator::InnerIterator it(momentum, col); it; ++it) {
      const int ir = space_.full_to_interior[static_cast<int>(it.row())];
      if (ir >= 0) rhs[ir] -= it.value() * g;
    }
  }
  for (int col = 0; col < coupling_.outerSize(); ++col) {
    if (!space_.dirichlet_mask[col]) continue;
    const double g = space_.dirichlet_value[col];
    if (g == 0.0) continue;
    for (SparseOperator::InnerIterator it(coupling_, col); it; ++it) {
      const int rp = pressure_to_reduced_[static_cast<int>(it.row())];
      if (rp >= 0) rhs[rp] -= it.value() * g;
    }
  }
  return rhs;
}

SaddleSolution SaddleSolver::solve(const SparseOperator& momentum,
                                   const Eigen::VectorXd& momentum_rhs) {
  const SparseOperator reduced = build_reduced(momentum);
  const Eigen::VectorXd rhs = build_rhs(momentum, momentum_rhs);

  if (!analyzed_) {
    lu_.analyzePattern(reduced);
    analyzed_ = true;
  }
  lu_.factorize(reduced);
  if (lu_.info() != Eigen::Success) throw LinearSolveError("saddle factorization failed");

  Eigen::VectorXd x = lu_.solve(rhs);
  const double rhs_norm = rhs.norm();
  double residual = (reduced * x - rhs).norm() / (rhs_norm + 1e-300);
  for (int pass = 0; pass < 3 && residual > kResidualTol; ++pass) {
    const Eigen::VectorXd correction = lu_.solve(rhs - reduced * x);
    x += correction;
    residual = (reduced * x - rhs).norm() / (rhs_norm + 1e-300);
  }
  if (!x.allFinite()) throw LinearSolveError("saddle solve produced non-finite values");
  if (residual > kResidualTol) throw LinearSolveError("saddle solve residual above 1e-11");

  SaddleSolution sol;
  sol.linear_residual = residual;
  sol.velocity = Eigen::VectorXd::Zero(space_.velocity_count);
  for (int i = 0; i < n_interior_; ++i) sol.velocity[space_.interior[i]] = x[i];
  apply_dirichlet(space_, sol.velocity);

  sol.pressure = Eigen::VectorXd::Zero(space_.pressure_count);
  for (int q = 0; q < space_.pressure_count; ++q)
    if (q != pinned_) sol.pressure[q] = x[pressure_to_reduced_[q]];
  // Exact zero mean: the pressure nullspace is the constants, and the lumped
  // P1 mass integrates P1 functions exactly.
  const double mean = sol.pressure.dot(space_.pressure_lumped_mass);
  sol.pressure.array() -= mean;  // domain area is 1
  return sol;
}

}  // namespace stns
