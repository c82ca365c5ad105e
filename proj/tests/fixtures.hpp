#pragma once

#include <cmath>

#include "confsym/geometry.hpp"
#include "confsym/model.hpp"

namespace fixtures {

using confsym::Matrix;
using confsym::Vector;

/// f = 0: geodesic motion.
inline confsym::SeparableHamiltonian free_particle(int n) {
  return confsym::SeparableHamiltonian(
      n, [](const Vector&) { return 0.0; },
      [n](const Vector&) { return Vector(Vector::Zero(n)); },
      [n](const Vector&) { return Matrix(Matrix::Zero(n, n)); });
}

/// Ellipsoid sum_i a_i q_i^2 = 1 in R^3 with a = (1, 2, 3).
inline confsym::FunctionConstraint ellipsoid() {
  const Vector a = Vector::LinSpaced(3, 1.0, 3.0);
  return confsym::FunctionConstraint(
      3, 1,
      [a](const Vector& q) {
        Vector g(1);
        g(0) = q.cwiseProduct(q).dot(a) - 1.0;
        return g;
      },
      [a](const Vector& q) { return Matrix(2.0 * a.cwiseProduct(q).transpose()); },
      [a](const Vector&, const Vector& l) {
        return Matrix(2.0 * l(0) * a.asDiagonal());
      });
}

/// Unit sphere intersected with the plane q_0 + q_1 + q_2 = 0 in R^4 (m = 2).
inline confsym::FunctionConstraint sphere_slice() {
  return confsym::FunctionConstraint(
      4, 2,
      [](const Vector& q) {
        Vector g(2);
        g << q.squaredNorm() - 1.0, q(0) + q(1) + q(2);
        return g;
      },
      [](const Vector& q) {
        Matrix G(2, 4);
        G.row(0) = 2.0 * q.transpose();
        G.row(1) << 1.0, 1.0, 1.0, 0.0;
        return G;
      },
      [](const Vector&, const Vector& l) {
        return Matrix(2.0 * l(0) * Matrix::Identity(4, 4));
      });
}

/// A consistent state on sphere_slice.
inline confsym::PhaseState sphere_slice_state() {
  Vector q(4);
  q << 1.0, -1.0, 0.0, 1.0;
  q.normalize();
  Vector p(4);
  p << 1.0, 1.0, -2.0, 0.5;
  // remove the components along both constraint gradients
  Matrix G(2, 4);
  G.row(0) = 2.0 * q.transpose();
  G.row(1) << 1.0, 1.0, 1.0, 0.0;
  p -= G.transpose() * (G * G.transpose()).ldlt().solve(G * p);
  return {q, p};
}

}  // namespace fixtures
