#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "anderson.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "problems.hpp"
#include "saddle.hpp"

using namespace stns;

namespace {

Eigen::SparseMatrix<double> random_spd(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = dist(rng);
  const Eigen::MatrixXd spd =
      r.transpose() * r + 0.5 * Eigen::MatrixXd::Identity(n, n);
  return spd.sparseView();
}

Eigen::VectorXd random_vector(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

// Stokes part of the manufactured forcing: full forcing minus u . grad u.
std::array<double, 2> stokes_forcing(const ManufacturedSolution& exact, double x, double y) {
  const auto f = exact.forcing(x, y);
  const auto u = exact.velocity(x, y);
  const auto g = exact.velocity_gradient(x, y);
  return {f[0] - (u[0] * g[0] + u[1] * g[1]), f[1] - (u[0] * g[2] + u[1] * g[3])};
}

double stokes_manufactured_h1_error(int n, double nu) {
  ProblemSpec spec{ProblemKind::Manufactured, n, nu};
  DiscreteProblem prob = build_problem(spec);
  const ManufacturedSolution exact{nu};
  const Eigen::VectorXd load = assemble_load(
      prob.mesh, prob.space, [&](double x, double y) { return stokes_forcing(exact, x, y); });
  SaddleSolver solver(prob.space, prob.coupling);
  const SaddleSolution sol = solver.solve(prob.viscous, load);
  CHECK(sol.linear_residual <= SaddleSolver::kResidualTol);
  return manufactured_velocity_h1_error(prob, sol.velocity);
}

}  // namespace

TEST_CASE("saddle solve: zero data gives the zero solution") {
  ProblemSpec spec{ProblemKind::Manufactured, 4, 1.0};  // homogeneous BCs
  DiscreteProblem prob = build_problem(spec);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(prob.space.velocity_count);
  SaddleSolver solver(prob.space, prob.coupling);
  const SparseOperator momentum =
      prob.viscous + assemble_convection_picard(prob.mesh, prob.space, zero);
  const SaddleSolution sol = solver.solve(momentum, zero);
  CHECK(sol.velocity.lpNorm<Eigen::Infinity>() <= 1e-13);
  CHECK(sol.pressure.lpNorm<Eigen::Infinity>() <= 1e-13);
}

TEST_CASE("saddle solve: viscosity scaling of the Stokes operator") {
  ProblemSpec spec{ProblemKind::Manufactured, 6, 1.0};
  DiscreteProblem prob = build_problem(spec);
  const double nu = 0.2;
  const SparseOperator visc_nu = assemble_viscous(prob.mesh, prob.space, nu);
  const Eigen::VectorXd f = prob.load;

  SaddleSolver a(prob.space, prob.coupling);
  SaddleSolver b(prob.space, prob.coupling);
  const SaddleSolution scaled = a.solve(visc_nu, f);
  const SaddleSolution unit = b.solve(prob.viscous, Eigen::VectorXd(f / nu));
  CHECK((scaled.velocity - unit.velocity).lpNorm<Eigen::Infinity>() <=
        1e-10 * (1.0 + unit.velocity.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("saddle solve: manufactured Stokes convergence under refinement") {
  const double err4 = stokes_manufactured_h1_error(4, 1.0);
  const double err8 = stokes_manufactured_h1_error(8, 1.0);
  CHECK(err4 / err8 >= 3.5);
}

TEST_CASE("saddle solve: pressure has exact zero mean") {
  ProblemSpec spec{ProblemKind::Cavity, 8, 1e-2};
  DiscreteProblem prob = build_problem(spec);
  SaddleSolver solver(prob.space, prob.coupling);
  const SparseOperator momentum =
      prob.viscous + assemble_convection_picard(prob.mesh, prob.space, prob.initial_velocity);
  const SaddleSolution sol = solver.solve(momentum, prob.load);
  CHECK(sol.linear_residual <= SaddleSolver::kResidualTol);
  CHECK(std::abs(sol.pressure.dot(prob.space.pressure_lumped_mass)) <=
        1e-13 * sol.pressure.lpNorm<Eigen::Infinity>());
  // Dirichlet rows come back with the boundary data.
  for (int i = 0; i < prob.space.velocity_count; ++i)
    if (prob.space.dirichlet_mask[i]) CHECK(sol.velocity[i] == prob.space.dirichlet_value[i]);
}

TEST_CASE("constrained least squares: analytic cases") {
  std::mt19937 rng(41);
  const int dim = 7;
  const Eigen::SparseMatrix<double> gram = random_spd(dim, rng);
  const Eigen::VectorXd w0 = random_vector(dim, rng);

  SUBCASE("empty history is the identity") {
    const LeastSquaresResult r = constrained_least_squares(gram, w0, {});
    CHECK(r.theta == 1.0);
    CHECK(r.alpha.empty());
    CHECK((r.combined - w0).norm() == 0.0);
  }
  SUBCASE("mirror residual: alpha = 1/2, theta = 0") {
    const std::vector<Eigen::VectorXd> hist{-w0};
    const LeastSquaresResult r = constrained_least_squares(gram, w0, hist);
    CHECK(r.alpha[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.theta <= 1e-12);
  }
  SUBCASE("orthogonal equal-norm history: alpha = 1/2, theta = sqrt(2)/2") {
    // Build w1 G-orthogonal to w0 with the same G-norm.
    Eigen::VectorXd w1 = random_vector(dim, rng);
    const double proj = w1.dot(gram * w0) / w0.dot(gram * w0);
    w1 -= proj * w0;
    w1 *= std::sqrt(w0.dot(gram * w0) / w1.dot(gram * w1));
    const std::vector<Eigen::VectorXd> hist{w1};
    const LeastSquaresResult r = constrained_least_squares(gram, w0, hist);
    CHECK(r.alpha[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.theta == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  }
  SUBCASE("duplicate residual is filtered out") {
    const std::vector<Eigen::VectorXd> hist{w0};
    const LeastSquaresResult r = constrained_least_squares(gram, w0, hist);
    CHECK(r.theta == 1.0);
    CHECK(r.alpha[0] == 0.0);
    CHECK((r.combined - w0).norm() == 0.0);
  }
  SUBCASE("zero current residual signals convergence") {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(dim);
    const std::vector<Eigen::VectorXd> hist{w0};
    const LeastSquaresResult r = constrained_least_squares(gram, zero, hist);
    CHECK(r.converged);
    CHECK(r.theta == 1.0);
  }
}

TEST_CASE("constrained least squares: oracle agreement and properties") {
  std::mt19937 rng(43);
  const int dim = 5;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::SparseMatrix<double> gram = random_spd(dim, rng);
    const Eigen::MatrixXd dense_gram = Eigen::MatrixXd(gram);
    const Eigen::VectorXd w0 = random_vector(dim, rng);
    const int m = trial % 2 ? 1 : 2;
    std::vector<Eigen::VectorXd> hist;
    for (int j = 0; j < m; ++j) hist.push_back(random_vector(dim, rng));

    const LeastSquaresResult r = constrained_least_squares(gram, w0, hist);
    CHECK(r.theta >= 0.0);
    CHECK(r.theta <= 1.0 + 1e-12);

    const auto grid = oracle::grid_minimize(dense_gram, w0, hist);
    CHECK(r.theta == doctest::Approx(grid.theta).epsilon(1e-6));

    // First-order optimality: the combination is G-orthogonal to every
    // retained difference column.
    const Eigen::VectorXd gw = gram * r.combined;
    double scale = 0.0;
    for (int j = 0; j < m; ++j) {
      const Eigen::VectorXd d = hist[j] - w0;
      scale = std::max(scale, (dense_gram * d).norm());
    }
    for (int j = 0; j < m; ++j) {
      if (r.alpha[j] == 0.0) continue;
      const Eigen::VectorXd d = hist[j] - w0;
      CHECK(std::abs(d.dot(gw)) <= 1e-10 * scale * w0.norm() + 1e-12);
    }
  }
}
