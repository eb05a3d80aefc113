#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "assembly.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "problems.hpp"

using namespace stns;

namespace {

Eigen::VectorXd random_velocity(const TaylorHoodSpace& space, std::mt19937& rng,
                                bool zero_boundary) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(space.velocity_count);
  for (int i = 0; i < space.velocity_count; ++i) v[i] = dist(rng);
  if (zero_boundary)
    for (int i = 0; i < space.velocity_count; ++i)
      if (space.dirichlet_mask[i]) v[i] = 0.0;
  return v;
}

double max_abs(const SparseOperator& op) {
  double m = 0.0;
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseOperator::InnerIterator it(op, k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

}  // namespace

TEST_CASE("viscous operator") {
  const Mesh mesh = build_unit_square_mesh(4);
  const TaylorHoodSpace space = build_taylor_hood(mesh);
  const double nu = 0.37;
  const SparseOperator visc = assemble_viscous(mesh, space, nu);

  const Field ux = interpolate_velocity(space, [](double x, double) {
    return std::array<double, 2>{x, 0.0};
  });
  CHECK(ux.coeffs.dot(visc * ux.coeffs) == doctest::Approx(nu).epsilon(1e-12));

  const Field uyx = interpolate_velocity(space, [](double x, double y) {
    return std::array<double, 2>{y, x};
  });
  CHECK(uyx.coeffs.dot(visc * uyx.coeffs) == doctest::Approx(2.0 * nu).epsilon(1e-12));

  const SparseOperator diff = SparseOperator(visc.transpose()) - visc;
  CHECK(max_abs(diff) <= 1e-14);

  CHECK_THROWS_AS(assemble_viscous(mesh, space, 0.0), std::invalid_argument);
}

TEST_CASE("gram operator equals unit-viscosity stiffness and is PSD") {
  const Mesh mesh = build_unit_square_mesh(3);
  const TaylorHoodSpace space = build_taylor_hood(mesh);
  const SparseOperator gram = assemble_h1_gram(mesh, space);
  const SparseOperator visc = assemble_viscous(mesh, space, 1.0);
  CHECK(max_abs(SparseOperator(gram - visc)) == 0.0);

  // Null space before elimination: one constant per component.
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd constant = Eigen::VectorXd::Zero(space.velocity_count);
    for (int s = 0; s < space.scalar_count; ++s) constant[2 * s + c] = 1.0;
    CHECK((gram * constant).lpNorm<Eigen::Infinity>() <= 1e-12);
  }

  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd v = random_velocity(space, rng, false);
    CHECK(v.dot(gram * v) >= -1e-12);
  }
}

TEST_CASE("pressure coupling") {
  const Mesh mesh = build_unit_square_mesh(4);
  const TaylorHoodSpace space = build_taylor_hood(mesh);
  const SparseOperator coupling = assemble_pressure_coupling(mesh, space);

  SUBCASE("(q, div u) = 2 for u = (x, y), q = 1") {
    const Field u = interpolate_velocity(space, [](double x, double y) {
      return std::array<double, 2>{x, y};
    });
    const Eigen::VectorXd q = Eigen::VectorXd::Ones(space.pressure_count);
    CHECK(-q.dot(coupling * u.coeffs) == doctest::Approx(2.0).epsilon(1e-13));
  }

  SUBCASE("divergence-free field is annihilated") {
    const Field u = interpolate_velocity(space, [](double x, double y) {
      return std::array<double, 2>{y, -x};
    });
    CHECK((coupling * u.coeffs).lpNorm<Eigen::Infinity>() <= 1e-13);
  }

  SUBCASE("(q, div u) = 2/3 for u = (x^2, 0), q = x against quadrature oracle") {
    const Field u = interpolate_velocity(space, [](double x, double) {
      return std::array<double, 2>{x * x, 0.0};
    });
    const Field q = interpolate_pressure(mesh, space, [](double x, double) { return x; });
    // Independent high-degree quadrature of 2 x^2 over the square.
    const QuadratureRule fine = make_triangle_rule(6);
    double reference = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const auto& tri = mesh.triangles[t];
      const auto& p0 = mesh.vertices[tri[0]];
      const auto& p1 = mesh.vertices[tri[1]];
      const auto& p2 = mesh.vertices[tri[2]];
      for (int k = 0; k < fine.size(); ++k) {
        const auto& b = fine.points[k];
        const double x = p0.x * b[0] + p1.x * b[1] + p2.x * b[2];
        reference += 2.0 * mesh.signed_area(t) * fine.weights[k] * 2.0 * x * x;
      }
    }
    CHECK(reference == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(-q.coeffs.dot(coupling * u.coeffs) == doctest::Approx(reference).epsilon(1e-13));
  }
}

TEST_CASE("picard convection operator") {
  const Mesh mesh = build_unit_square_mesh(3);
  const TaylorHoodSpace space = build_taylor_hood(mesh);

  SUBCASE("zero advecting field gives the zero operator") {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(space.velocity_count);
    CHECK(max_abs(assemble_convection_picard(mesh, space, zero)) == 0.0);
  }

  SUBCASE("constant advection closed form") {
    const Field a = interpolate_velocity(space, [](double, double) {
      return std::array<double, 2>{1.0, 0.0};
    });
    const Field w = interpolate_velocity(space, [](double x, double) {
      return std::array<double, 2>{x, 0.0};
    });
    const SparseOperator op = assemble_convection_picard(mesh, space, a.coeffs);
    CHECK(w.coeffs.dot(op * w.coeffs) == doctest::Approx(0.5).epsilon(1e-13));
  }

  SUBCASE("skew symmetry for boundary-zeroed test fields") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::VectorXd a = random_velocity(space, rng, false);
      const Eigen::VectorXd v = random_velocity(space, rng, true);
      const SparseOperator op = assemble_convection_picard(mesh, space, a);
      const double scale = (1.0 + a.lpNorm<Eigen::Infinity>()) *
                           (1.0 + v.lpNorm<Eigen::Infinity>()) *
                           (1.0 + v.lpNorm<Eigen::Infinity>());
      CHECK(std::abs(v.dot(op * v)) <= 1e-12 * scale);
    }
  }

  SUBCASE("trilinearity in the advecting argument") {
    std::mt19937 rng(13);
    const Eigen::VectorXd a = random_velocity(space, rng, false);
    const Eigen::VectorXd b = random_velocity(space, rng, false);
    const double ca = 1.7, cb = -0.4;
    const SparseOperator combined = assemble_convection_picard(mesh, space, ca * a + cb * b);
    const SparseOperator split = SparseOperator(ca * assemble_convection_picard(mesh, space, a)) +
                                 SparseOperator(cb * assemble_convection_picard(mesh, space, b));
    CHECK(max_abs(SparseOperator(combined - split)) <= 1e-13);
  }

  SUBCASE("matches the quadrature oracle on random fields") {
    std::mt19937 rng(17);
    const QuadratureRule fine = make_triangle_rule(6);
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::VectorXd a = random_velocity(space, rng, false);
      const Eigen::VectorXd w = random_velocity(space, rng, false);
      const Eigen::VectorXd z = random_velocity(space, rng, false);
      const SparseOperator op = assemble_convection_picard(mesh, space, a);
      const double reference = oracle::bstar(mesh, space, a, w, z, fine);
      CHECK(z.dot(op * w) == doctest::Approx(reference).epsilon(1e-11));
    }
  }
}

TEST_CASE("newton convection operator and right-hand side") {
  const Mesh mesh = build_unit_square_mesh(1);
  const TaylorHoodSpace space = build_taylor_hood(mesh);

  SUBCASE("zero linearization point") {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(space.velocity_count);
    const auto [op, rhs] = assemble_convection_newton(mesh, space, zero);
    CHECK(max_abs(op) == 0.0);
    CHECK(rhs.lpNorm<Eigen::Infinity>() == 0.0);
  }

  SUBCASE("constant field against the dense quadrature oracle") {
    const Field a = interpolate_velocity(space, [](double, double) {
      return std::array<double, 2>{1.0, 0.0};
    });
    const auto [op, rhs] = assemble_convection_newton(mesh, space, a.coeffs);
    const SparseOperator picard = assemble_convection_picard(mesh, space, a.coeffs);
    const QuadratureRule fine = make_triangle_rule(6);
    const Eigen::MatrixXd dense = Eigen::MatrixXd(op);
    for (int i = 0; i < space.velocity_count; ++i) {
      Eigen::VectorXd ei = Eigen::VectorXd::Unit(space.velocity_count, i);
      for (int j = 0; j < space.velocity_count; ++j) {
        Eigen::VectorXd ej = Eigen::VectorXd::Unit(space.velocity_count, j);
        const double expected = oracle::bstar(mesh, space, a.coeffs, ej, ei, fine) +
                                oracle::bstar(mesh, space, ej, a.coeffs, ei, fine);
        CHECK(dense(i, j) == doctest::Approx(expected).epsilon(1e-12));
        // grad a = 0, so the cross part is the pure divergence term.
        const double cross = dense(i, j) - Eigen::MatrixXd(picard)(i, j);
        const double div_term = oracle::bstar(mesh, space, ej, a.coeffs, ei, fine);
        CHECK(cross == doctest::Approx(div_term).epsilon(1e-12));
      }
    }
  }

  SUBCASE("consistency identity N(a) a - rhs(a) = P(a) a") {
    const Mesh mesh4 = build_unit_square_mesh(4);
    const TaylorHoodSpace space4 = build_taylor_hood(mesh4);
    std::mt19937 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::VectorXd a = random_velocity(space4, rng, false);
      const auto [newton, rhs] = assemble_convection_newton(mesh4, space4, a);
      const SparseOperator picard = assemble_convection_picard(mesh4, space4, a);
      const Eigen::VectorXd gap = newton * a - rhs - picard * a;
      CHECK(gap.lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + a.lpNorm<Eigen::Infinity>()));
    }
  }
}

TEST_CASE("load vector") {
  const Mesh mesh = build_unit_square_mesh(4);
  const TaylorHoodSpace space = build_taylor_hood(mesh);

  SUBCASE("zero forcing") {
    const Eigen::VectorXd load =
        assemble_load(mesh, space, [](double, double) { return std::array<double, 2>{0, 0}; });
    CHECK(load.lpNorm<Eigen::Infinity>() == 0.0);
  }

  SUBCASE("partition of unity: components of f = (1,0) sum to the area") {
    const Eigen::VectorXd load =
        assemble_load(mesh, space, [](double, double) { return std::array<double, 2>{1, 0}; });
    double sum_x = 0.0, sum_y = 0.0;
    for (int s = 0; s < space.scalar_count; ++s) {
      sum_x += load[2 * s];
      sum_y += load[2 * s + 1];
    }
    CHECK(sum_x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(sum_y) <= 1e-15);
  }

  SUBCASE("manufactured forcing matches a degree-10 quadrature within 1e-10") {
    const Mesh mesh8 = build_unit_square_mesh(8);
    const TaylorHoodSpace space8 = build_taylor_hood(mesh8);
    const ManufacturedSolution exact{1.0};
    auto forcing = [&exact](double x, double y) { return exact.forcing(x, y); };
    const Eigen::VectorXd load = assemble_load(mesh8, space8, forcing);
    const QuadratureRule fine = make_triangle_rule(6);
    const Eigen::VectorXd reference = assemble_load(mesh8, space8, forcing, &fine);
    CHECK((load - reference).norm() <= 1e-10 * reference.norm());
  }

  SUBCASE("non-finite forcing raises") {
    CHECK_THROWS_AS(assemble_load(mesh, space,
                                  [](double x, double) {
                                    return std::array<double, 2>{x > 0.1 ? 0.0 : 1.0 / 0.0, 0.0};
                                  }),
                    std::domain_error);
  }
}

TEST_CASE("discrete dual norm") {
  const Mesh mesh = build_unit_square_mesh(8);
  const TaylorHoodSpace space = build_taylor_hood(mesh);
  const SparseOperator gram = assemble_h1_gram(mesh, space);

  SUBCASE("zero load") {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(space.velocity_count);
    CHECK(discrete_dual_norm(space, gram, zero) == 0.0);
  }

  SUBCASE("homogeneity and regression value for f = (1,0)") {
    const Eigen::VectorXd load =
        assemble_load(mesh, space, [](double, double) { return std::array<double, 2>{1, 0}; });
    const double norm1 = discrete_dual_norm(space, gram, load);
    const double norm3 = discrete_dual_norm(space, gram, Eigen::VectorXd(-3.0 * load));
    CHECK(norm3 == doctest::Approx(3.0 * norm1).epsilon(1e-12));
    CHECK(norm1 == doctest::Approx(0.18743254082637598).epsilon(1e-12));
  }
}
