#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>

#include "mesh.hpp"
#include "quadrature.hpp"

namespace stns {

enum class SpaceTag { Velocity, Pressure };

/// Coefficient vector over one of the two discrete spaces.
struct Field {
  SpaceTag tag;
  Eigen::VectorXd coeffs;
};

/// P1 Lagrange basis at a barycentric point.
std::array<double, 3> p1_values(const std::array<double, 3>& bary);
/// P1 gradients on the reference triangle (0,0)-(1,0)-(0,1), constant.
std::array<std::array<double, 2>, 3> p1_ref_gradients();

/// P2 Lagrange basis at a barycentric point. Local nodes 0..2 are the
/// triangle vertices, node 3+i is the midpoint of the edge opposite vertex i.
std::array<double, 6> p2_values(const std::array<double, 3>& bary);
std::array<std::array<double, 2>, 6> p2_ref_gradients(const std::array<double, 3>& bary);

/// Taylor-Hood pair on a triangulation: continuous P2 vector velocity and
/// continuous P1 pressure. Scalar velocity dofs are numbered vertices first,
/// then edge midpoints; velocity dof = 2*scalar + component. Immutable after
/// construction.
struct TaylorHoodSpace {
  int scalar_count = 0;    // V + E
  int velocity_count = 0;  // 2 * (V + E)
  int pressure_count = 0;  // V

  // Per-triangle scalar dof indices in P2 local node order.
  std::vector<std::array<int, 6>> cell_scalar_dofs;
  // Support node of each scalar dof (vertex or edge midpoint).
  std::vector<std::array<double, 2>> scalar_nodes;

  // Dirichlet data over velocity dofs. Every boundary scalar node constrains
  // both components; pressure dofs are never constrained.
  std::vector<char> dirichlet_mask;     // size velocity_count
  std::vector<double> dirichlet_value;  // size velocity_count, 0 where free
  std::vector<int> interior;            // ascending free velocity dofs
  std::vector<int> full_to_interior;    // -1 where constrained

  // Lumped P1 mass (integral of each pressure basis function); used for the
  // exact zero-mean pressure shift.
  Eigen::VectorXd pressure_lumped_mass;

  QuadratureRule quad;  // default assembly rule

  int dirichlet_count() const { return velocity_count - static_cast<int>(interior.size()); }
};

/// Builds the Taylor-Hood pair with cavity boundary values taken from the
/// mesh tags: Lid scalar nodes carry velocity (1,0), Wall nodes (0,0).
TaylorHoodSpace build_taylor_hood(const Mesh& mesh);

/// Replaces all Dirichlet values by zero (homogeneous boundary conditions).
void set_homogeneous_dirichlet(TaylorHoodSpace& space);

/// Overwrites constrained entries of a velocity coefficient vector with the
/// stored boundary values. Idempotent.
void apply_dirichlet(const TaylorHoodSpace& space, Eigen::VectorXd& velocity);

/// Zero interior coefficients with boundary values applied.
Eigen::VectorXd initial_velocity_guess(const TaylorHoodSpace& space);

/// Nodal interpolant of an analytic function. Throws std::domain_error on a
/// non-finite value at a dof node.
Field interpolate_velocity(const TaylorHoodSpace& space,
                           const std::function<std::array<double, 2>(double, double)>& f);
Field interpolate_pressure(const Mesh& mesh, const TaylorHoodSpace& space,
                           const std::function<double(double, double)>& f);

}  // namespace stns
