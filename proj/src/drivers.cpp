#include "drivers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace stns {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> values) {
  if (values.empty()) return 1.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void validate(const SolverConfig& cfg) {
  if (!(cfg.relaxation > 0.0 && cfg.relaxation <= 1.0))
    throw std::invalid_argument("solver config: relaxation must lie in (0, 1]");
  if (cfg.depth < 0) throw std::invalid_argument("solver config: depth must be >= 0");
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("solver config: tolerance must be > 0");
  if (cfg.max_iterations < 1)
    throw std::invalid_argument("solver config: max_iterations must be >= 1");
}

}  // namespace

double SolveResult::median_theta() const {
  std::vector<double> thetas;
  for (const IterationRecord& rec : trace)
    if (rec.window_nonempty) thetas.push_back(rec.theta);
  return median(std::move(thetas));
}

StepResult picard_step(const DiscreteProblem& prob, SaddleSolver& solver,
                       const Eigen::VectorXd& u_k) {
  const SparseOperator momentum =
      prob.viscous + assemble_convection_picard(prob.mesh, prob.space, u_k);
  SaddleSolution sol = solver.solve(momentum, prob.load);
  return {std::move(sol.velocity), std::move(sol.pressure), sol.linear_residual};
}

StepResult newton_step(const DiscreteProblem& prob, SaddleSolver& solver,
                       const Eigen::VectorXd& u_hat) {
  auto [convection, rhs] = assemble_convection_newton(prob.mesh, prob.space, u_hat);
  const SparseOperator momentum = prob.viscous + convection;
  SaddleSolution sol = solver.solve(momentum, prob.load + rhs);
  return {std::move(sol.velocity), std::move(sol.pressure), sol.linear_residual};
}

MixOutcome anderson_mix(const SparseOperator& gram,
                        std::span<const std::pair<Eigen::VectorXd, Eigen::VectorXd>> history,
                        const Eigen::VectorXd& u_tilde, const Eigen::VectorXd& u_prev, int m,
                        double beta) {
  MixOutcome out;
  const int window = std::min<int>(static_cast<int>(history.size()), m);
  if (window == 0) {
    out.u_hat = u_tilde;
    return out;
  }
  out.window_nonempty = true;

  const Eigen::VectorXd w0 = u_tilde - u_prev;
  std::vector<Eigen::VectorXd> residuals(window);
  for (int j = 0; j < window; ++j) residuals[j] = history[j].first - history[j].second;

  LeastSquaresResult ls = constrained_least_squares(gram, w0, residuals);
  out.alpha = ls.alpha;
  out.theta = ls.theta;
  if (ls.converged) {
    out.u_hat = u_tilde;
    return out;
  }

  double alpha_sum = 0;
  for (double a : ls.alpha) alpha_sum += a;
  Eigen::VectorXd tilde_mix = (1.0 - alpha_sum) * u_tilde;
  Eigen::VectorXd prev_mix = (1.0 - alpha_sum) * u_prev;
  for (int j = 0; j < window; ++j) {
    tilde_mix += ls.alpha[j] * history[j].first;
    prev_mix += ls.alpha[j] * history[j].second;
  }
  out.u_hat = beta * tilde_mix + (1.0 - beta) * prev_mix;

  // Same point written through the optimized residual instead; the two forms
  // are algebraically identical.
  const Eigen::VectorXd via_residual = tilde_mix - (1.0 - beta) * ls.combined;
  const Eigen::VectorXd gap = out.u_hat - via_residual;
  out.identity_gap = std::sqrt(std::max(0.0, gap.dot(gram * gap)));
  return out;
}

namespace {

struct LoopState {
  Eigen::VectorXd u;      // current outer iterate u_k
  Eigen::VectorXd p;      // its pressure
  Eigen::VectorXd u_hat;  // mixed iterate u_hat_k from the previous Step 2
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> history;  // newest first
};

SolveResult run_loop(const SolverConfig& cfg, const DiscreteProblem& prob) {
  validate(cfg);
  const bool is_prtx = cfg.method == Method::PRTXVariant;
  const int depth = is_prtx ? 1 : (cfg.method == Method::AAPicardNewton ? cfg.depth : 0);
  const double beta = is_prtx ? 1.0 : cfg.relaxation;

  SolveResult result;
  SaddleSolver solver(prob.space, prob.coupling);

  LoopState st;
  st.u = prob.initial_velocity;
  st.p = Eigen::VectorXd::Zero(prob.space.pressure_count);
  st.u_hat = st.u;

  auto grad_norm = [&prob](const Eigen::VectorXd& v) { return h1_seminorm(prob.gram, v); };

  for (int k = 1; k <= cfg.max_iterations; ++k) {
    IterationRecord rec;
    rec.k = k;
    rec.beta = beta;
    result.iterations = k;

    try {
      Eigen::VectorXd u_tilde, p_tilde;
      if (cfg.method == Method::Newton) {
        const auto t0 = Clock::now();
        StepResult step = newton_step(prob, solver, st.u);
        rec.t_newton = seconds_since(t0);
        rec.lin_res_newton = step.lin_residual;
        u_tilde = std::move(step.velocity);
        p_tilde = std::move(step.pressure);
      } else {
        const auto t0 = Clock::now();
        StepResult step = picard_step(prob, solver, st.u);
        rec.t_picard = seconds_since(t0);
        rec.lin_res_picard = step.lin_residual;
        u_tilde = std::move(step.velocity);
        p_tilde = std::move(step.pressure);
      }

      rec.res_tilde_u = grad_norm(u_tilde - st.u);
      rec.res_tilde_hat = grad_norm(u_tilde - st.u_hat);
      rec.picard_h1 = grad_norm(u_tilde);
      const double stop_res =
          cfg.stop_residual == StopResidual::TildeMinusHat ? rec.res_tilde_hat : rec.res_tilde_u;
      result.final_residual = stop_res;

      if (!std::isfinite(stop_res) || stop_res > cfg.blowup_threshold) {
        result.trace.push_back(std::move(rec));
        result.status = SolveStatus::Blowup;
        result.velocity.coeffs = std::move(u_tilde);
        result.pressure.coeffs = std::move(p_tilde);
        return result;
      }
      if (stop_res <= cfg.tolerance) {
        result.trace.push_back(std::move(rec));
        result.status = SolveStatus::Converged;
        result.velocity.coeffs = std::move(u_tilde);
        result.pressure.coeffs = std::move(p_tilde);
        return result;
      }
      if (cfg.method == Method::Newton) {
        st.u_hat = u_tilde;
        st.u = std::move(u_tilde);
        st.p = std::move(p_tilde);
        result.trace.push_back(std::move(rec));
        continue;
      }

      // Step 2: Anderson mixing (or the in-iteration variant).
      Eigen::VectorXd u_hat_next;
      if (is_prtx) {
        const auto t0 = Clock::now();
        StepResult second = picard_step(prob, solver, u_tilde);
        rec.t_picard2 = seconds_since(t0);
        const auto t1 = Clock::now();
        const std::pair<Eigen::VectorXd, Eigen::VectorXd> pair{u_tilde, st.u};
        MixOutcome mix = anderson_mix(prob.gram,
                                      std::span(&pair, cfg.drop_all_history ? 0u : 1u),
                                      second.velocity, u_tilde, 1, 1.0);
        rec.t_anderson = seconds_since(t1);
        rec.theta = mix.theta;
        rec.alpha = std::move(mix.alpha);
        rec.window_nonempty = mix.window_nonempty;
        rec.mix_identity_gap = mix.identity_gap;
        u_hat_next = std::move(mix.u_hat);
      } else if (depth > 0 && !cfg.drop_all_history) {
        const auto t0 = Clock::now();
        std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> window(st.history.begin(),
                                                                        st.history.end());
        MixOutcome mix = anderson_mix(prob.gram, window, u_tilde, st.u, depth, beta);
        rec.t_anderson = seconds_since(t0);
        rec.theta = mix.theta;
        rec.alpha = std::move(mix.alpha);
        rec.window_nonempty = mix.window_nonempty;
        rec.mix_identity_gap = mix.identity_gap;
        u_hat_next = std::move(mix.u_hat);
      } else {
        u_hat_next = u_tilde;
      }
      for (double a : rec.alpha) rec.sum_abs_alpha += std::abs(a);

      // Step 3: Newton solve, except for the pure Picard iteration.
      Eigen::VectorXd u_next, p_next;
      if (cfg.method == Method::Picard) {
        u_next = u_tilde;
        p_next = p_tilde;
      } else {
        const auto t0 = Clock::now();
        StepResult step = newton_step(prob, solver, u_hat_next);
        rec.t_newton = seconds_since(t0);
        rec.lin_res_newton = step.lin_residual;
        u_next = std::move(step.velocity);
        p_next = std::move(step.pressure);
      }

      if (!is_prtx && depth > 0) {
        st.history.emplace_front(std::move(u_tilde), st.u);
        while (static_cast<int>(st.history.size()) > depth) st.history.pop_back();
      }
      st.u_hat = cfg.method == Method::Picard ? u_next : std::move(u_hat_next);
      st.u = std::move(u_next);
      st.p = std::move(p_next);
      result.trace.push_back(std::move(rec));

      if (!st.u.allFinite()) {
        result.status = SolveStatus::Blowup;
        result.velocity.coeffs = st.u;
        result.pressure.coeffs = st.p;
        return result;
      }
    } catch (const LinearSolveError&) {
      result.trace.push_back(std::move(rec));
      result.status = SolveStatus::LinearSolveFailed;
      result.velocity.coeffs = st.u;
      result.pressure.coeffs = st.p;
      return result;
    }
  }

  result.status = SolveStatus::MaxIterations;
  result.iterations = cfg.max_iterations;
  result.velocity.coeffs = std::move(st.u);
  result.pressure.coeffs = std::move(st.p);
  return result;
}

}  // namespace

SolveResult solve(const SolverConfig& config, const DiscreteProblem& prob) {
  return run_loop(config, prob);
}

SolveResult prtx_variant_solve(const SolverConfig& config, const DiscreteProblem& prob) {
  SolverConfig cfg = config;
  cfg.method = Method::PRTXVariant;
  cfg.depth = 1;
  cfg.relaxation = 1.0;
  return run_loop(cfg, prob);
}

OrderEstimate estimate_convergence_order(std::span<const double> residuals) {
  OrderEstimate out;
  std::vector<double> r;
  for (double v : residuals) r.push_back(v);
  int positive = 0;
  for (double v : r)
    if (v > 0.0 && std::isfinite(v)) ++positive;
  if (positive < 4) return out;

  for (std::size_t k = 1; k + 1 < r.size(); ++k) {
    if (!(r[k] >= 1e-9 && r[k] <= 1e-2)) continue;
    // The forward residual must also sit above the floor where linear-solver
    // noise would pollute the ratio.
    if (!(r[k + 1] >= 1e-9)) continue;
    if (!(r[k - 1] > r[k] && r[k] > r[k + 1])) continue;
    out.orders.push_back(std::log(r[k + 1] / r[k]) / std::log(r[k] / r[k - 1]));
  }
  if (out.orders.empty()) return out;
  out.estimable = true;
  std::vector<double> sorted = out.orders;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  out.estimate = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return out;
}

}  // namespace stns
