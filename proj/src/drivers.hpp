#pragma once

#include <deque>
#include <span>
#include <vector>

#include "anderson.hpp"
#include "assembly.hpp"
#include "saddle.hpp"

namespace stns {

enum class Method { Picard, Newton, PicardNewton, AAPicardNewton, PRTXVariant };
enum class StopResidual { TildeMinusHat, TildeMinusU };

/// Status values double as CLI exit codes.
enum class SolveStatus : int { Converged = 0, MaxIterations = 2, Blowup = 3, LinearSolveFailed = 4 };

struct SolverConfig {
  Method method = Method::AAPicardNewton;
  int depth = 1;          // Anderson window m >= 0; m = 0 is Picard-Newton
  double relaxation = 1.0;  // beta in (0, 1]
  double tolerance = 1e-10;
  int max_iterations = 100;
  StopResidual stop_residual = StopResidual::TildeMinusHat;
  double blowup_threshold = 1e3;
  bool drop_all_history = false;  // test hook: forces an empty Anderson window
};

/// Everything the nonlinear drivers need, assembled once per problem.
struct DiscreteProblem {
  Mesh mesh;
  TaylorHoodSpace space;
  double nu = 1.0;
  SparseOperator viscous;   // nu-scaled stiffness
  SparseOperator gram;      // H1-seminorm Gram operator
  SparseOperator coupling;  // pressure-velocity block B
  Eigen::VectorXd load;
  Eigen::VectorXd initial_velocity;
};

struct IterationRecord {
  int k = 0;                 // 1-based outer iteration
  double res_tilde_hat = 0;  // ||grad(u_tilde_{k+1} - u_hat_k)||, the theorem residual
  double res_tilde_u = 0;    // ||grad(u_tilde_{k+1} - u_k)||, the Anderson denominator
  double theta = 1.0;
  std::vector<double> alpha;
  double sum_abs_alpha = 0;
  double beta = 1.0;
  double t_picard = 0, t_anderson = 0, t_newton = 0;
  double t_picard2 = 0;  // second Picard solve of the four-step variant
  double lin_res_picard = 0, lin_res_newton = 0;
  double picard_h1 = 0;         // ||grad u_tilde_{k+1}||
  double mix_identity_gap = 0;  // distance between the two algebraic forms of u_hat
  bool window_nonempty = false;
};

struct SolveResult {
  SolveStatus status = SolveStatus::MaxIterations;
  int iterations = 0;
  Field velocity{SpaceTag::Velocity, {}};
  Field pressure{SpaceTag::Pressure, {}};
  std::vector<IterationRecord> trace;
  double final_residual = 0;

  double median_theta() const;  // over iterations with a nonempty window; 1 if none
};

struct StepResult {
  Eigen::VectorXd velocity;
  Eigen::VectorXd pressure;
  double lin_residual = 0;
};

/// One Picard solve: advect by u_k, solve for (u_tilde, p_tilde).
StepResult picard_step(const DiscreteProblem& prob, SaddleSolver& solver,
                       const Eigen::VectorXd& u_k);

/// One Newton solve linearized at u_hat.
StepResult newton_step(const DiscreteProblem& prob, SaddleSolver& solver,
                       const Eigen::VectorXd& u_hat);

struct MixOutcome {
  Eigen::VectorXd u_hat;
  std::vector<double> alpha;
  double theta = 1.0;
  double identity_gap = 0;
  bool window_nonempty = false;
};

/// Anderson mixing step: combines the current Picard output with up to m past
/// (u_tilde_j, u_{j-1}) pairs, newest first. beta = 1 keeps only the Picard
/// combination.
MixOutcome anderson_mix(const SparseOperator& gram,
                        std::span<const std::pair<Eigen::VectorXd, Eigen::VectorXd>> history,
                        const Eigen::VectorXd& u_tilde, const Eigen::VectorXd& u_prev, int m,
                        double beta);

/// Outer nonlinear loop with full per-iteration instrumentation. Dispatches
/// all five methods; PRTXVariant fixes m = 1, beta = 1.
SolveResult solve(const SolverConfig& config, const DiscreteProblem& prob);

/// Four-step variant: two Picard solves per iteration, mixing within the
/// current iteration only.
SolveResult prtx_variant_solve(const SolverConfig& config, const DiscreteProblem& prob);

struct OrderEstimate {
  bool estimable = false;
  std::vector<double> orders;  // log-ratio orders on the usable window
  double estimate = 0;         // median of orders
};

/// Per-step convergence orders order_k = log(r_{k+1}/r_k) / log(r_k/r_{k-1})
/// over the residual window [1e-9, 1e-2].
OrderEstimate estimate_convergence_order(std::span<const double> residuals);

}  // namespace stns
