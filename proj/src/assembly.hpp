#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <utility>

#include "mesh.hpp"
#include "spaces.hpp"

namespace stns {

using SparseOperator = Eigen::SparseMatrix<double>;

/// nu * (grad u, grad v) over the full velocity dof set. Symmetric positive
/// semidefinite; positive definite after Dirichlet elimination.
SparseOperator assemble_viscous(const Mesh& mesh, const TaylorHoodSpace& space, double nu);

/// Pressure-velocity coupling B with B(q, u) = -(q, div u); dimensions
/// pressure_count x velocity_count. The momentum block of the saddle system
/// carries B^T (that is, -(p, div v)), the continuity block carries B.
SparseOperator assemble_pressure_coupling(const Mesh& mesh, const TaylorHoodSpace& space);

/// Skew-symmetrized convection linearized at the advecting field a:
/// entry (i,j) = b*(a, phi_j, phi_i) with
/// b*(v,w,z) = (v . grad w, z) + 1/2 ((div v) w, z).
SparseOperator assemble_convection_picard(const Mesh& mesh, const TaylorHoodSpace& space,
                                          const Eigen::VectorXd& a);

/// Full linearization at a: operator entry (i,j) = b*(a, phi_j, phi_i)
/// + b*(phi_j, a, phi_i), plus the right-hand-side vector b*(a, a, phi_i).
std::pair<SparseOperator, Eigen::VectorXd> assemble_convection_newton(const Mesh& mesh,
                                                                      const TaylorHoodSpace& space,
                                                                      const Eigen::VectorXd& a);

/// Load vector (f, phi_i) by quadrature; the rule may be overridden for
/// higher-accuracy reference values. Throws std::domain_error on non-finite f.
Eigen::VectorXd assemble_load(const Mesh& mesh, const TaylorHoodSpace& space,
                              const std::function<std::array<double, 2>(double, double)>& f,
                              const QuadratureRule* rule = nullptr);

/// Gram operator of the H1 seminorm: v^T G w = (grad v, grad w). Identical to
/// assemble_viscous with nu = 1.
SparseOperator assemble_h1_gram(const Mesh& mesh, const TaylorHoodSpace& space);

/// sqrt(v^T G v); tiny negative rounding (> -1e-14) clamps to zero, anything
/// below that throws (broken Gram operator).
double h1_seminorm(const SparseOperator& gram, const Eigen::VectorXd& v);

/// Discrete dual norm of a load vector: solve G r = load on the interior
/// velocity dofs with homogeneous constraints and return ||grad r||.
double discrete_dual_norm(const TaylorHoodSpace& space, const SparseOperator& gram,
                          const Eigen::VectorXd& load);

}  // namespace stns
