#pragma once

#include <functional>

#include <Eigen/Dense>

namespace confsym {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point (q, p) of phase space in ambient coordinates.
struct PhaseState {
  Vector q;
  Vector p;
};

/// H(q, p) = f(q) + 1/2 p^T M^{-1} p.
///
/// The potential is supplied as callables so that any smooth objective can be
/// plugged in; the kinetic part is always quadratic with a constant SPD mass
/// matrix, which keeps H_p linear and H_pp = M^{-1} constant.
class SeparableHamiltonian {
 public:
  using ScalarFn = std::function<double(const Vector&)>;
  using VectorFn = std::function<Vector(const Vector&)>;
  using MatrixFn = std::function<Matrix(const Vector&)>;

  /// Identity mass matrix.
  SeparableHamiltonian(int dim, ScalarFn potential, VectorFn gradient,
                       MatrixFn hessian);
  SeparableHamiltonian(ScalarFn potential, VectorFn gradient, MatrixFn hessian,
                       Matrix mass);

  int dim() const { return static_cast<int>(mass_.rows()); }

  double potential(const Vector& q) const { return potential_(q); }
  double kinetic(const Vector& p) const;
  double energy(const PhaseState& s) const {
    return potential(s.q) + kinetic(s.p);
  }

  /// H_q = grad f(q).
  Vector force_gradient(const Vector& q) const { return gradient_(q); }
  Matrix potential_hessian(const Vector& q) const { return hessian_(q); }

  /// H_p = M^{-1} p.
  Vector velocity(const Vector& p) const;

  /// H_pp = M^{-1}.
  const Matrix& inverse_mass() const { return inverse_mass_; }
  const Matrix& mass() const { return mass_; }
  bool unit_mass() const { return unit_mass_; }

 private:
  ScalarFn potential_;
  VectorFn gradient_;
  MatrixFn hessian_;
  Matrix mass_;
  Matrix inverse_mass_;
  bool unit_mass_ = false;
};

}  // namespace confsym
