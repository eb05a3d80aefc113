#include "spaces.hpp"

#include <cmath>
#include <stdexcept>

namespace stns {

std::array<double, 3> p1_values(const std::array<double, 3>& bary) { return bary; }

std::array<std::array<double, 2>, 3> p1_ref_gradients() {
  return {{{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}}};
}

std::array<double, 6> p2_values(const std::array<double, 3>& bary) {
  const auto& [l0, l1, l2] = bary;
  return {l0 * (2.0 * l0 - 1.0), l1 * (2.0 * l1 - 1.0), l2 * (2.0 * l2 - 1.0),
          4.0 * l1 * l2,         4.0 * l2 * l0,         4.0 * l0 * l1};
}

std::array<std::array<double, 2>, 6> p2_ref_gradients(const std::array<double, 3>& bary) {
  const auto& [l0, l1, l2] = bary;
  const auto dl = p1_ref_gradients();
  std::array<std::array<double, 2>, 6> g{};
  for (int i = 0; i < 3; ++i)
    for (int d = 0; d < 2; ++d) g[i][d] = (4.0 * bary[i] - 1.0) * dl[i][d];
  const double l[3] = {l0, l1, l2};
  for (int i = 0; i < 3; ++i) {
    const int a = (i + 1) % 3, b = (i + 2) % 3;
    for (int d = 0; d < 2; ++d) g[3 + i][d] = 4.0 * (l[a] * dl[b][d] + l[b] * dl[a][d]);
  }
  return g;
}

TaylorHoodSpace build_taylor_hood(const Mesh& mesh) {
  TaylorHoodSpace space;
  const int nv = mesh.vertex_count();
  const int ne = mesh.edge_count();
  space.scalar_count = nv + ne;
  space.velocity_count = 2 * space.scalar_count;
  space.pressure_count = nv;

  space.cell_scalar_dofs.resize(mesh.triangles.size());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      space.cell_scalar_dofs[t][i] = tri[i];
      space.cell_scalar_dofs[t][3 + i] = nv + mesh.triangle_edges[t][i];
    }
  }

  space.scalar_nodes.resize(space.scalar_count);
  for (int v = 0; v < nv; ++v) space.scalar_nodes[v] = {mesh.vertices[v].x, mesh.vertices[v].y};
  for (int e = 0; e < ne; ++e) space.scalar_nodes[nv + e] = mesh.edge_midpoint(e);

  space.dirichlet_mask.assign(space.velocity_count, 0);
  space.dirichlet_value.assign(space.velocity_count, 0.0);
  auto constrain = [&space](int scalar_dof, Boundary tag) {
    const double ux = tag == Boundary::Lid ? 1.0 : 0.0;
    space.dirichlet_mask[2 * scalar_dof] = 1;
    space.dirichlet_mask[2 * scalar_dof + 1] = 1;
    space.dirichlet_value[2 * scalar_dof] = ux;
    space.dirichlet_value[2 * scalar_dof + 1] = 0.0;
  };
  for (int v = 0; v < nv; ++v)
    if (mesh.vertex_boundary[v] != Boundary::Interior) constrain(v, mesh.vertex_boundary[v]);
  for (int e = 0; e < ne; ++e)
    if (mesh.edge_boundary[e] != Boundary::Interior) constrain(nv + e, mesh.edge_boundary[e]);

  space.full_to_interior.assign(space.velocity_count, -1);
  for (int i = 0; i < space.velocity_count; ++i) {
    if (!space.dirichlet_mask[i]) {
      space.full_to_interior[i] = static_cast<int>(space.interior.size());
      space.interior.push_back(i);
    }
  }

  space.pressure_lumped_mass = Eigen::VectorXd::Zero(nv);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const double third_area = mesh.signed_area(t) / 3.0;
    for (int v : mesh.triangles[t]) space.pressure_lumped_mass[v] += third_area;
  }

  space.quad = default_rule();
  return space;
}

void set_homogeneous_dirichlet(TaylorHoodSpace& space) {
  for (int i = 0; i < space.velocity_count; ++i)
    if (space.dirichlet_mask[i]) space.dirichlet_value[i] = 0.0;
}

void apply_dirichlet(const TaylorHoodSpace& space, Eigen::VectorXd& velocity) {
  for (int i = 0; i < space.velocity_count; ++i)
    if (space.dirichlet_mask[i]) velocity[i] = space.dirichlet_value[i];
}

Eigen::VectorXd initial_velocity_guess(const TaylorHoodSpace& space) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(space.velocity_count);
  apply_dirichlet(space, u);
  return u;
}

Field interpolate_velocity(const TaylorHoodSpace& space,
                           const std::function<std::array<double, 2>(double, double)>& f) {
  Eigen::VectorXd coeffs(space.velocity_count);
  for (int s = 0; s < space.scalar_count; ++s) {
    const auto [x, y] = space.scalar_nodes[s];
    const auto [ux, uy] = f(x, y);
    if (!std::isfinite(ux) || !std::isfinite(uy))
      throw std::domain_error("interpolate_velocity: non-finite value at a dof node");
    coeffs[2 * s] = ux;
    coeffs[2 * s + 1] = uy;
  }
  return {SpaceTag::Velocity, std::move(coeffs)};
}

Field interpolate_pressure(const Mesh& mesh, const TaylorHoodSpace& space,
                           const std::function<double(double, double)>& f) {
  Eigen::VectorXd coeffs(space.pressure_count);
  for (int v = 0; v < space.pressure_count; ++v) {
    const double value = f(mesh.vertices[v].x, mesh.vertices[v].y);
    if (!std::isfinite(value))
      throw std::domain_error("interpolate_pressure: non-finite value at a dof node");
    coeffs[v] = value;
  }
  return {SpaceTag::Pressure, std::move(coeffs)};
}

}  // namespace stns
