#include <random>

#include <doctest.h>

#include "confsym/errors.hpp"
#include "confsym/geometry.hpp"
#include "confsym/model.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace confsym;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("residuals at the reference initial condition vanish") {
  const SphereConstraint sphere(10);
  const auto ham = fixtures::free_particle(10);
  const auto r = residuals(sphere, ham, default_initial_state(10));
  CHECK(r.primary.size() == 1);
  CHECK(r.primary(0) == 0.0);
  CHECK(r.hidden(0) == 0.0);
}

TEST_CASE("residuals on the circle") {
  const SphereConstraint circle(2);
  const auto ham = fixtures::free_particle(2);
  auto r = residuals(circle, ham, {vec({1, 0}), vec({0, 0})});
  CHECK(r.primary(0) == 0.0);
  CHECK(r.hidden(0) == 0.0);
  r = residuals(circle, ham, {vec({2, 0}), vec({0, 0})});
  CHECK(r.primary(0) == 3.0);
}

TEST_CASE("residuals reject mismatched dimensions") {
  const SphereConstraint sphere(3);
  const auto ham = fixtures::free_particle(3);
  CHECK_THROWS_AS(residuals(sphere, ham, {vec({1, 0}), vec({0, 0})}),
                  InvalidInput);
  const auto ham2 = fixtures::free_particle(2);
  CHECK_THROWS_AS(residuals(sphere, ham2, {vec({1, 0, 0}), vec({0, 0, 0})}),
                  InvalidInput);
}

TEST_CASE("constraint Jacobians match finite differences") {
  std::mt19937_64 rng(11);
  const SphereConstraint sphere(6);
  const auto ellipsoid = fixtures::ellipsoid();
  const auto slice = fixtures::sphere_slice();
  const ConstraintManifold* manifolds[] = {&sphere, &ellipsoid, &slice};
  for (const auto* man : manifolds) {
    for (int trial = 0; trial < 20; ++trial) {
      const Vector q = oracles::gaussian(man->ambient_dim(), rng);
      const Matrix G = man->jacobian(q);
      const Matrix fd = oracles::fd_jacobian(
          [man](const Vector& x) { return man->value(x); }, q, 1e-6);
      CHECK((G - fd).cwiseAbs().maxCoeff() <=
            1e-6 * std::max(1.0, G.cwiseAbs().maxCoeff()));

      const Vector lambda = oracles::gaussian(man->constraint_dim(), rng);
      const Matrix Hc = man->constraint_hessian(q, lambda);
      CHECK((Hc - Hc.transpose()).cwiseAbs().maxCoeff() == 0.0);
      // sum_i lambda_i Hess g_i = d/dq (G(q)^T lambda)
      const Matrix fd_h = oracles::fd_jacobian(
          [man, &lambda](const Vector& x) {
            return Vector(man->jacobian(x).transpose() * lambda);
          },
          q, 1e-6);
      CHECK((Hc - fd_h).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }
}

TEST_CASE("sphere constraint is exact on normalized Gaussians") {
  std::mt19937_64 rng(3);
  const SphereConstraint sphere(10);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    worst = std::max(worst,
                     std::abs(sphere.value(oracles::random_unit(10, rng))(0)));
  }
  CHECK(worst <= 1e-14);
  CHECK(sphere.constraint_hessian(Vector::Zero(10), vec({1.5})) ==
        Matrix(3.0 * Matrix::Identity(10, 10)));
}

TEST_CASE("tangent basis of the circle phase space") {
  const SphereConstraint circle(2);
  const auto ham = fixtures::free_particle(2);
  const PhaseState s{vec({1, 0}), vec({0, 0})};
  const auto basis = tangent_basis(circle, ham, s);
  REQUIRE(basis.size() == 2);
  for (const auto& xi : basis) {
    // xi_q . q = 0 and xi_p . q + p . xi_q = 0
    CHECK(std::abs(xi(0)) <= 1e-15);
    CHECK(std::abs(xi(2)) <= 1e-15);
  }
  CHECK(std::abs(basis[0].dot(basis[1])) <= 1e-15);
}

TEST_CASE("tangent basis at the reference state is an orthonormal null basis") {
  const auto prob = generate_matrix({-1, 1}, 10, 4);
  const auto ham = make_hamiltonian(prob);
  const SphereConstraint sphere(10);
  const PhaseState s = default_initial_state(10);
  const auto basis = tangent_basis(sphere, ham, s);
  REQUIRE(basis.size() == 18);

  Matrix B(20, 18);
  for (int j = 0; j < 18; ++j) B.col(j) = basis[static_cast<size_t>(j)];
  const Matrix gram = B.transpose() * B;
  CHECK((gram - Matrix::Identity(18, 18)).cwiseAbs().maxCoeff() <= 1e-12);

  const Matrix C = tangent_constraint_block(sphere, ham, s);
  CHECK((C * B).cwiseAbs().maxCoeff() <= 1e-10);

  // Independent route: projector onto null(C) from the normal equations must
  // agree with B B^T, and random vectors projected with it lie in span(B).
  const Matrix P = oracles::nullspace_projector(C);
  CHECK((P - B * B.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const Vector w = P * oracles::gaussian(20, rng);
    CHECK((B * (B.transpose() * w) - w).norm() <= 1e-12 * w.norm());
  }
}

TEST_CASE("tangent basis with two constraints") {
  const auto slice = fixtures::sphere_slice();
  const auto ham = fixtures::free_particle(4);
  const PhaseState s = fixtures::sphere_slice_state();
  REQUIRE(is_consistent(slice, ham, s, 1e-14));
  const auto basis = tangent_basis(slice, ham, s);
  CHECK(basis.size() == 4);
  const Matrix C = tangent_constraint_block(slice, ham, s);
  for (const auto& xi : basis) CHECK((C * xi).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("tangent basis errors") {
  const SphereConstraint sphere(3);
  const auto ham = fixtures::free_particle(3);
  CHECK_THROWS_AS(tangent_basis(sphere, ham, {vec({2, 0, 0}), vec({0, 0, 0})}),
                  InvalidInput);

  // Two copies of the same constraint: G has rank 1 < m.
  const FunctionConstraint doubled(
      3, 2,
      [](const Vector& q) {
        Vector g(2);
        g.setConstant(q.squaredNorm() - 1.0);
        return g;
      },
      [](const Vector& q) {
        Matrix G(2, 3);
        G.row(0) = 2.0 * q.transpose();
        G.row(1) = 2.0 * q.transpose();
        return G;
      },
      [](const Vector&, const Vector& l) {
        return Matrix(2.0 * l.sum() * Matrix::Identity(3, 3));
      });
  CHECK_THROWS_AS(tangent_basis(doubled, ham, {vec({1, 0, 0}), vec({0, 1, 0})}),
                  DegenerateConstraint);
}

TEST_CASE("retract: base point, worked example, consistency") {
  const SphereConstraint circle(2);
  const auto ham = fixtures::free_particle(2);
  const PhaseState s{vec({1, 0}), vec({0, 0})};
  const Vector xi = vec({0, 1, 0, 0});

  const PhaseState same = retract(circle, ham, s, xi, 0.0);
  CHECK(same.q == s.q);
  CHECK(same.p == s.p);

  const PhaseState moved = retract(circle, ham, s, xi, 0.1);
  const double r = std::sqrt(1.01);
  CHECK(moved.q(0) == doctest::Approx(1.0 / r).epsilon(1e-15));
  CHECK(moved.q(1) == doctest::Approx(0.1 / r).epsilon(1e-15));
  CHECK(is_consistent(circle, ham, moved, 1e-12));

  CHECK_THROWS_AS(retract(circle, ham, s, vec({1, 0, 0, 0}), 0.1),
                  InvalidInput);
}

TEST_CASE("retract is a first-order curve with velocity xi") {
  const auto prob = generate_matrix({-1, 1}, 10, 2);
  const auto ham = make_hamiltonian(prob);
  const SphereConstraint sphere(10);
  const PhaseState s = default_initial_state(10);
  const auto basis = tangent_basis(sphere, ham, s);
  std::mt19937_64 rng(9);
  Vector xi = Vector::Zero(20);
  for (const auto& b : basis) xi += oracles::gaussian(1, rng)(0) * b;
  xi.normalize();

  auto deviation = [&](double tau) {
    return (concat(retract(sphere, ham, s, xi, tau)) -
            (concat(s) + tau * xi)).norm();
  };
  for (double tau : {1e-2, 1e-3}) {
    const double ratio = deviation(tau) / deviation(tau / 2);
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);
  }
  const double eps = 1e-6;
  const Vector derivative = (concat(retract(sphere, ham, s, xi, eps)) -
                             concat(retract(sphere, ham, s, xi, -eps))) /
                            (2 * eps);
  CHECK((derivative - xi).norm() <= 1e-8);
  CHECK(is_consistent(sphere, ham, retract(sphere, ham, s, xi, 0.3), 1e-12));
}

TEST_CASE("generic projection lands on the constraint set") {
  const auto ellipsoid = fixtures::ellipsoid();
  const Vector q = ellipsoid.project_position(vec({0.7, 0.4, 0.3}));
  CHECK(std::abs(ellipsoid.value(q)(0)) <= 1e-14);

  const auto slice = fixtures::sphere_slice();
  const auto ham = fixtures::free_particle(4);
  const PhaseState s = fixtures::sphere_slice_state();
  const auto basis = tangent_basis(slice, ham, s);
  const PhaseState moved = retract(slice, ham, s, basis[0] + basis[2], 0.05);
  CHECK(is_consistent(slice, ham, moved, 1e-12));
}
