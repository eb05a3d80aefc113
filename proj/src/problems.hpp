#pragma once

#include <string>

#include "drivers.hpp"

namespace stns {

enum class ProblemKind { Cavity, Manufactured };

struct ProblemSpec {
  ProblemKind kind = ProblemKind::Cavity;
  int n = 32;       // subdivisions per side
  double nu = 1.0;  // kinematic viscosity; Re = 1/nu
};

/// Divergence-free reference solution u = curl(psi) with
/// psi = x^2 (1-x)^2 y^2 (1-y)^2 and pressure p = cos(pi x) cos(pi y)
/// (zero mean). The forcing -nu lap(u) + u.grad(u) + grad(p) is evaluated in
/// closed form so it stays independent of the discretization.
struct ManufacturedSolution {
  double nu = 1.0;

  std::array<double, 2> velocity(double x, double y) const;
  std::array<double, 4> velocity_gradient(double x, double y) const;  // [2*c+d] = d u_c / d x_d
  double pressure(double x, double y) const;
  std::array<double, 2> forcing(double x, double y) const;
};

/// Builds the mesh, the Taylor-Hood pair, the problem-independent operators,
/// the load vector and the initial guess (zero interior, boundary values
/// applied). Cavity: f = 0, lid velocity (1,0), walls no-slip. Manufactured:
/// homogeneous Dirichlet, analytic forcing.
DiscreteProblem build_problem(const ProblemSpec& spec);

/// H1-seminorm velocity error against the manufactured solution, integrated
/// with a quadrature rule well above the assembly degree.
double manufactured_velocity_h1_error(const DiscreteProblem& prob, const Eigen::VectorXd& u);

/// L2 pressure error against the manufactured solution.
double manufactured_pressure_l2_error(const DiscreteProblem& prob, const Eigen::VectorXd& p);

std::string to_string(ProblemKind kind);

}  // namespace stns
