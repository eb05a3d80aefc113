#include "assembly.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace stns {

namespace {

struct CellGeometry {
  double area;
  // Physical gradients of the P2 basis at one quadrature point are
  // J^{-T} * reference gradient.
  double jinv_t[2][2];
  double x0, y0, dx1, dy1, dx2, dy2;  // affine map x = x0 + J * xi

  void map_point(const std::array<double, 3>& bary, double& x, double& y) const {
    x = x0 + dx1 * bary[1] + dx2 * bary[2];
    y = y0 + dy1 * bary[1] + dy2 * bary[2];
  }
};

CellGeometry cell_geometry(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const Vertex& p0 = mesh.vertices[tri[0]];
  const Vertex& p1 = mesh.vertices[tri[1]];
  const Vertex& p2 = mesh.vertices[tri[2]];
  CellGeometry g;
  g.x0 = p0.x;
  g.y0 = p0.y;
  g.dx1 = p1.x - p0.x;
  g.dy1 = p1.y - p0.y;
  g.dx2 = p2.x - p0.x;
  g.dy2 = p2.y - p0.y;
  const double det = g.dx1 * g.dy2 - g.dx2 * g.dy1;
  g.area = 0.5 * det;
  g.jinv_t[0][0] = g.dy2 / det;
  g.jinv_t[0][1] = -g.dy1 / det;
  g.jinv_t[1][0] = -g.dx2 / det;
  g.jinv_t[1][1] = g.dx1 / det;
  return g;
}

// Values and physical gradients of the six P2 basis functions at every
// quadrature point of one cell.
struct P2CellBasis {
  std::vector<std::array<double, 6>> values;                 // [q][i]
  std::vector<std::array<std::array<double, 2>, 6>> grads;   // [q][i][d]

  void compute(const CellGeometry& g, const QuadratureRule& rule) {
    const int nq = rule.size();
    values.resize(nq);
    grads.resize(nq);
    for (int q = 0; q < nq; ++q) {
      values[q] = p2_values(rule.points[q]);
      const auto ref = p2_ref_gradients(rule.points[q]);
      for (int i = 0; i < 6; ++i)
        for (int d = 0; d < 2; ++d)
          grads[q][i][d] = g.jinv_t[d][0] * ref[i][0] + g.jinv_t[d][1] * ref[i][1];
    }
  }
};

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseOperator from_triplets(int rows, int cols, const Triplets& triplets) {
  SparseOperator op(rows, cols);
  op.setFromTriplets(triplets.begin(), triplets.end());
  op.makeCompressed();
  return op;
}

// Advecting velocity and its gradient at the quadrature points of one cell.
struct AdvectingField {
  std::vector<std::array<double, 2>> value;     // [q][c]
  std::vector<std::array<double, 4>> gradient;  // [q][2*c+d] = d a_c / d x_d
  std::vector<double> divergence;               // [q]

  void compute(const P2CellBasis& basis, const std::array<int, 6>& dofs,
               const Eigen::VectorXd& a) {
    const int nq = static_cast<int>(basis.values.size());
    value.assign(nq, {0.0, 0.0});
    gradient.assign(nq, {0.0, 0.0, 0.0, 0.0});
    divergence.assign(nq, 0.0);
    for (int q = 0; q < nq; ++q) {
      for (int i = 0; i < 6; ++i) {
        for (int c = 0; c < 2; ++c) {
          const double coeff = a[2 * dofs[i] + c];
          value[q][c] += coeff * basis.values[q][i];
          for (int d = 0; d < 2; ++d) gradient[q][2 * c + d] += coeff * basis.grads[q][i][d];
        }
      }
      divergence[q] = gradient[q][0] + gradient[q][3];
    }
  }
};

}  // namespace

SparseOperator assemble_viscous(const Mesh& mesh, const TaylorHoodSpace& space, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("assemble_viscous: nu must be positive");
  const QuadratureRule& rule = space.quad;
  Triplets triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.triangle_count()) * 72);
  P2CellBasis basis;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const CellGeometry g = cell_geometry(mesh, t);
    basis.compute(g, rule);
    const auto& dofs = space.cell_scalar_dofs[t];
    double local[6][6] = {};
    for (int q = 0; q < rule.size(); ++q) {
      const double w = 2.0 * g.area * rule.weights[q];
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
          local[i][j] += w * (basis.grads[q][i][0] * basis.grads[q][j][0] +
                              basis.grads[q][i][1] * basis.grads[q][j][1]);
    }
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        for (int c = 0; c < 2; ++c)
          triplets.emplace_back(2 * dofs[i] + c, 2 * dofs[j] + c, nu * local[i][j]);
  }
  return from_triplets(space.velocity_count, space.velocity_count, triplets);
}

SparseOperator assemble_pressure_coupling(const Mesh& mesh, const TaylorHoodSpace& space) {
  const QuadratureRule& rule = space.quad;
  Triplets triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.triangle_count()) * 36);
  P2CellBasis basis;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const CellGeometry g = cell_geometry(mesh, t);
    basis.compute(g, rule);
    const auto& dofs = space.cell_scalar_dofs[t];
    const auto& tri = mesh.triangles[t];
    double local[3][12] = {};  // pressure node x velocity dof (scalar i, comp c)
    for (int q = 0; q < rule.size(); ++q) {
      const double w = 2.0 * g.area * rule.weights[q];
      const auto pvals = p1_values(rule.points[q]);
      for (int p = 0; p < 3; ++p)
        for (int i = 0; i < 6; ++i)
          for (int c = 0; c < 2; ++c)
            local[p][2 * i + c] -= w * pvals[p] * basis.grads[q][i][c];
    }
    for (int p = 0; p < 3; ++p)
      for (int i = 0; i < 6; ++i)
        for (int c = 0; c < 2; ++c)
          triplets.emplace_back(tri[p], 2 * dofs[i] + c, local[p][2 * i + c]);
  }
  return from_triplets(space.pressure_count, space.velocity_count, triplets);
}

SparseOperator assemble_convection_picard(const Mesh& mesh, const TaylorHoodSpace& space,
                                          const Eigen::VectorXd& a) {
  const QuadratureRule& rule = space.quad;
  Triplets triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.triangle_count()) * 144);
  P2CellBasis basis;
  AdvectingField adv;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const CellGeometry g = cell_geometry(mesh, t);
    basis.compute(g, rule);
    const auto& dofs = space.cell_scalar_dofs[t];
    adv.compute(basis, dofs, a);
    double local[6][6] = {};  // component-diagonal scalar block
    for (int q = 0; q < rule.size(); ++q) {
      const double w = 2.0 * g.area * rule.weights[q];
      for (int j = 0; j < 6; ++j) {
        const double convect = adv.value[q][0] * basis.grads[q][j][0] +
                               adv.value[q][1] * basis.grads[q][j][1] +
                               0.5 * adv.divergence[q] * basis.values[q][j];
        for (int i = 0; i < 6; ++i) local[i][j] += w * convect * basis.values[q][i];
      }
    }
    // Emit the full 2x2-component block (zeros off-diagonal) so that every
    // momentum operator shares one sparsity pattern.
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        for (int ci = 0; ci < 2; ++ci)
          for (int cj = 0; cj < 2; ++cj)
            triplets.emplace_back(2 * dofs[i] + ci, 2 * dofs[j] + cj,
                                  ci == cj ? local[i][j] : 0.0);
  }
  return from_triplets(space.velocity_count, space.velocity_count, triplets);
}

std::pair<SparseOperator, Eigen::VectorXd> assemble_convection_newton(
    const Mesh& mesh, const TaylorHoodSpace& space, const Eigen::VectorXd& a) {
  const QuadratureRule& rule = space.quad;
  Triplets triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.triangle_count()) * 144);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.velocity_count);
  P2CellBasis basis;
  AdvectingField adv;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const CellGeometry g = cell_geometry(mesh, t);
    basis.compute(g, rule);
    const auto& dofs = space.cell_scalar_dofs[t];
    adv.compute(basis, dofs, a);
    double local[12][12] = {};
    double local_rhs[12] = {};
    for (int q = 0; q < rule.size(); ++q) {
      const double w = 2.0 * g.area * rule.weights[q];
      // b*(a, a, .) at this point, for the right-hand side
      std::array<double, 2> self{};
      for (int c = 0; c < 2; ++c)
        self[c] = adv.value[q][0] * adv.gradient[q][2 * c + 0] +
                  adv.value[q][1] * adv.gradient[q][2 * c + 1] +
                  0.5 * adv.divergence[q] * adv.value[q][c];
      for (int j = 0; j < 6; ++j) {
        const double convect = adv.value[q][0] * basis.grads[q][j][0] +
                               adv.value[q][1] * basis.grads[q][j][1] +
                               0.5 * adv.divergence[q] * basis.values[q][j];
        for (int cj = 0; cj < 2; ++cj) {
          // b*(phi_j, a, .): trial function advects a
          std::array<double, 2> cross{};
          for (int c = 0; c < 2; ++c)
            cross[c] = basis.values[q][j] * adv.gradient[q][2 * c + cj] +
                       0.5 * basis.grads[q][j][cj] * adv.value[q][c];
          for (int i = 0; i < 6; ++i) {
            const double vi = basis.values[q][i];
            for (int ci = 0; ci < 2; ++ci) {
              double entry = cross[ci] * vi;
              if (ci == cj) entry += convect * vi;
              local[2 * i + ci][2 * j + cj] += w * entry;
            }
          }
        }
      }
      for (int i = 0; i < 6; ++i)
        for (int c = 0; c < 2; ++c) local_rhs[2 * i + c] += w * self[c] * basis.values[q][i];
    }
    for (int i = 0; i < 12; ++i) {
      const int gi = 2 * dofs[i / 2] + i % 2;
      rhs[gi] += local_rhs[i];
      for (int j = 0; j < 12; ++j)
        triplets.emplace_back(gi, 2 * dofs[j / 2] + j % 2, local[i][j]);
    }
  }
  return {from_triplets(space.velocity_count, space.velocity_count, triplets), std::move(rhs)};
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const TaylorHoodSpace& space,
                              const std::function<std::array<double, 2>(double, double)>& f,
                              const QuadratureRule* rule_override) {
  const QuadratureRule& rule = rule_override ? *rule_override : space.quad;
  Eigen::VectorXd load = Eigen::VectorXd::Zero(space.velocity_count);
  P2CellBasis basis;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const CellGeometry g = cell_geometry(mesh, t);
    basis.compute(g, rule);
    const auto& dofs = space.cell_scalar_dofs[t];
    for (int q = 0; q < rule.size(); ++q) {
      double x, y;
      g.map_point(rule.points[q], x, y);
      const auto [fx, fy] = f(x, y);
      if (!std::isfinite(fx) || !std::isfinite(fy))
        throw std::domain_error("assemble_load: non-finite forcing at a quadrature point");
      const double w = 2.0 * g.area * rule.weights[q];
      for (int i = 0; i < 6; ++i) {
        load[2 * dofs[i]] += w * fx * basis.values[q][i];
        load[2 * dofs[i] + 1] += w * fy * basis.values[q][i];
      }
    }
  }
  return load;
}

SparseOperator assemble_h1_gram(const Mesh& mesh, const TaylorHoodSpace& space) {
  return assemble_viscous(mesh, space, 1.0);
}

double h1_seminorm(const SparseOperator& gram, const Eigen::VectorXd& v) {
  if (gram.rows() != v.size()) throw std::invalid_argument("h1_seminorm: dimension mismatch");
  const double sq = v.dot(gram * v);
  if (sq < -1e-14) throw std::runtime_error("h1_seminorm: Gram operator is not positive");
  return sq > 0.0 ? std::sqrt(sq) : 0.0;
}

double discrete_dual_norm(const TaylorHoodSpace& space, const SparseOperator& gram,
                          const Eigen::VectorXd& load) {
  const int ni = static_cast<int>(space.interior.size());
  if (ni == 0) throw std::runtime_error("discrete_dual_norm: no interior velocity dofs");
  std::vector<Eigen::Triplet<double>> triplets;
  for (int col = 0; col < gram.outerSize(); ++col) {
    const int jc = space.full_to_interior[col];
    if (jc < 0) continue;
    for (SparseOperator::InnerIterator it(gram, col); it; ++it) {
      const int ir = space.full_to_interior[static_cast<int>(it.row())];
      if (ir >= 0) triplets.emplace_back(ir, jc, it.value());
    }
  }
  SparseOperator gi(ni, ni);
  gi.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::VectorXd rhs(ni);
  for (int i = 0; i < ni; ++i) rhs[i] = load[space.interior[i]];

  Eigen::SimplicialLDLT<SparseOperator> solver(gi);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("discrete_dual_norm: Gram factorization failed");
  const Eigen::VectorXd riesz = solver.solve(rhs);
  const double sq = riesz.dot(rhs);
  return sq > 0.0 ? std::sqrt(sq) : 0.0;
}

}  // namespace stns
