#pragma once

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <stdexcept>

#include "assembly.hpp"

namespace stns {

/// Thrown when the saddle-point factorization fails or the algebraic residual
/// contract cannot be met; the nonlinear drivers report it as divergence.
struct LinearSolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SaddleSolution {
  Eigen::VectorXd velocity;  // full velocity dof vector, Dirichlet values applied
  Eigen::VectorXd pressure;  // zero-mean pressure
  double linear_residual;    // relative algebraic residual of the reduced system
};

/// Direct sparse solver for one linearized momentum/continuity system
///
///   [ A   B^T ] [u]   [f]
///   [ B   0   ] [p] = [0]
///
/// with Dirichlet velocity dofs eliminated symmetrically (right-hand-side
/// lifting) and one pressure dof pinned to zero; the returned pressure is
/// shifted to exact zero mean. The coupling block and the reduced sparsity
/// pattern are fixed at construction, so repeated solves reuse the symbolic
/// factorization.
class SaddleSolver {
 public:
  SaddleSolver(const TaylorHoodSpace& space, const SparseOperator& coupling,
               int pinned_pressure_dof = 0);

  /// momentum: full-space velocity operator (viscous + convection);
  /// momentum_rhs: full-space right-hand side (load plus any linearization
  /// terms). Throws LinearSolveError on failure.
  SaddleSolution solve(const SparseOperator& momentum, const Eigen::VectorXd& momentum_rhs);

  static constexpr double kResidualTol = 1e-11;

 private:
  const TaylorHoodSpace& space_;
  const SparseOperator& coupling_;
  int pinned_;
  int n_interior_;
  int n_pressure_;  // retained pressure unknowns (pressure_count - 1)
  std::vector<int> pressure_to_reduced_;
  Eigen::SparseLU<SparseOperator> lu_;
  bool analyzed_ = false;

  SparseOperator build_reduced(const SparseOperator& momentum) const;
  Eigen::VectorXd build_rhs(const SparseOperator& momentum,
                            const Eigen::VectorXd& momentum_rhs) const;
};

}  // namespace stns
