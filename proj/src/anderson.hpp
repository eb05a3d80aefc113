#pragma once

#include <Eigen/SparseCore>
#include <span>
#include <vector>

namespace stns {

/// Outcome of the windowed constrained least-squares problem
///   min over alpha of || (1 - sum alpha_j) w0 + sum alpha_j w_j ||_G.
struct LeastSquaresResult {
  std::vector<double> alpha;    // one per history entry; 0 where filtered
  Eigen::VectorXd combined;     // minimizing combination w^alpha
  double theta = 1.0;           // ||w^alpha||_G / ||w0||_G
  double w0_norm = 0.0;         // ||w0||_G
  bool converged = false;       // ||w0||_G == 0: caller should stop
};

/// history[0] is the most recent past residual. Solved through the
/// difference parametrization d_j = w_j - w0 and the normal equations
/// (D^T G D) alpha = -D^T G w0. Columns with ||d_j||_G < 1e-13 ||w0||_G are
/// dropped, then the oldest columns are dropped one at a time while the
/// normal-matrix condition estimate exceeds 1e12. Guarantees
/// theta <= 1 + 1e-12 (alpha = 0 is always feasible).
LeastSquaresResult constrained_least_squares(const Eigen::SparseMatrix<double>& gram,
                                             const Eigen::VectorXd& w0,
                                             std::span<const Eigen::VectorXd> history);

}  // namespace stns
