#include "problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stns {

namespace {

constexpr double kPi = std::numbers::pi;

// x^2 (1-x)^2 and its derivatives.
double blob(double s) { return s * s * (1.0 - s) * (1.0 - s); }
double blob1(double s) { return 2.0 * s - 6.0 * s * s + 4.0 * s * s * s; }
double blob2(double s) { return 2.0 - 12.0 * s + 12.0 * s * s; }
double blob3(double s) { return -12.0 + 24.0 * s; }

}  // namespace

std::array<double, 2> ManufacturedSolution::velocity(double x, double y) const {
  return {blob(x) * blob1(y), -blob1(x) * blob(y)};
}

std::array<double, 4> ManufacturedSolution::velocity_gradient(double x, double y) const {
  // u1 = A B', u2 = -A' B
  return {blob1(x) * blob1(y), blob(x) * blob2(y),    // d u1 / dx, d u1 / dy
          -blob2(x) * blob(y), -blob1(x) * blob1(y)};  // d u2 / dx, d u2 / dy
}

double ManufacturedSolution::pressure(double x, double y) const {
  return std::cos(kPi * x) * std::cos(kPi * y);
}

std::array<double, 2> ManufacturedSolution::forcing(double x, double y) const {
  const double a = blob(x), a1 = blob1(x), a2 = blob2(x), a3 = blob3(x);
  const double b = blob(y), b1 = blob1(y), b2 = blob2(y), b3 = blob3(y);

  const double lap_u1 = a2 * b1 + a * b3;
  const double lap_u2 = -(a3 * b + a1 * b2);
  // u . grad u with u = (a b1, -a1 b)
  const double conv1 = a * a1 * (b1 * b1 - b * b2);
  const double conv2 = b * b1 * (a1 * a1 - a * a2);
  const double px = -kPi * std::sin(kPi * x) * std::cos(kPi * y);
  const double py = -kPi * std::cos(kPi * x) * std::sin(kPi * y);
  return {-nu * lap_u1 + conv1 + px, -nu * lap_u2 + conv2 + py};
}

DiscreteProblem build_problem(const ProblemSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("problem: n must be >= 1");
  if (!(spec.nu > 0.0)) throw std::invalid_argument("problem: nu must be positive");

  DiscreteProblem prob;
  prob.nu = spec.nu;
  prob.mesh = build_unit_square_mesh(spec.n);
  prob.space = build_taylor_hood(prob.mesh);

  if (spec.kind == ProblemKind::Manufactured) {
    set_homogeneous_dirichlet(prob.space);
    const ManufacturedSolution exact{spec.nu};
    prob.load = assemble_load(prob.mesh, prob.space,
                              [&exact](double x, double y) { return exact.forcing(x, y); });
  } else {
    prob.load = Eigen::VectorXd::Zero(prob.space.velocity_count);
  }

  prob.viscous = assemble_viscous(prob.mesh, prob.space, spec.nu);
  prob.gram = assemble_h1_gram(prob.mesh, prob.space);
  prob.coupling = assemble_pressure_coupling(prob.mesh, prob.space);
  prob.initial_velocity = initial_velocity_guess(prob.space);
  return prob;
}

double manufactured_velocity_h1_error(const DiscreteProblem& prob, const Eigen::VectorXd& u) {
  const ManufacturedSolution exact{prob.nu};
  const QuadratureRule rule = make_triangle_rule(8);
  const Mesh& mesh = prob.mesh;
  const TaylorHoodSpace& space = prob.space;
  double err_sq = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vertex& p0 = mesh.vertices[tri[0]];
    const Vertex& p1 = mesh.vertices[tri[1]];
    const Vertex& p2 = mesh.vertices[tri[2]];
    const double dx1 = p1.x - p0.x, dy1 = p1.y - p0.y;
    const double dx2 = p2.x - p0.x, dy2 = p2.y - p0.y;
    const double det = dx1 * dy2 - dx2 * dy1;
    const double jinv_t[2][2] = {{dy2 / det, -dy1 / det}, {-dx2 / det, dx1 / det}};
    const auto& dofs = space.cell_scalar_dofs[t];
    for (int q = 0; q < rule.size(); ++q) {
      const auto& bary = rule.points[q];
      const double x = p0.x + dx1 * bary[1] + dx2 * bary[2];
      const double y = p0.y + dy1 * bary[1] + dy2 * bary[2];
      const auto ref = p2_ref_gradients(bary);
      std::array<double, 4> grad_h{};
      for (int i = 0; i < 6; ++i) {
        double g[2];
        for (int d = 0; d < 2; ++d)
          g[d] = jinv_t[d][0] * ref[i][0] + jinv_t[d][1] * ref[i][1];
        for (int c = 0; c < 2; ++c) {
          const double coeff = u[2 * dofs[i] + c];
          grad_h[2 * c] += coeff * g[0];
          grad_h[2 * c + 1] += coeff * g[1];
        }
      }
      const auto grad_e = exact.velocity_gradient(x, y);
      double diff_sq = 0.0;
      for (int d = 0; d < 4; ++d) diff_sq += (grad_h[d] - grad_e[d]) * (grad_h[d] - grad_e[d]);
      err_sq += det * rule.weights[q] * diff_sq;
    }
  }
  return std::sqrt(err_sq);
}

double manufactured_pressure_l2_error(const DiscreteProblem& prob, const Eigen::VectorXd& p) {
  const ManufacturedSolution exact{prob.nu};
  const QuadratureRule rule = make_triangle_rule(8);
  const Mesh& mesh = prob.mesh;
  double err_sq = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vertex& p0 = mesh.vertices[tri[0]];
    const Vertex& p1 = mesh.vertices[tri[1]];
    const Vertex& p2 = mesh.vertices[tri[2]];
    const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
    for (int q = 0; q < rule.size(); ++q) {
      const auto& bary = rule.points[q];
      const double x = p0.x + (p1.x - p0.x) * bary[1] + (p2.x - p0.x) * bary[2];
      const double y = p0.y + (p1.y - p0.y) * bary[1] + (p2.y - p0.y) * bary[2];
      const double ph = bary[0] * p[tri[0]] + bary[1] * p[tri[1]] + bary[2] * p[tri[2]];
      const double diff = ph - exact.pressure(x, y);
      err_sq += det * rule.weights[q] * diff * diff;
    }
  }
  return std::sqrt(err_sq);
}

std::string to_string(ProblemKind kind) {
  return kind == ProblemKind::Cavity ? "cavity" : "manufactured";
}

}  // namespace stns
