#include "confsym/hamiltonian.hpp"

#include <utility>

#include "confsym/errors.hpp"

namespace confsym {

SeparableHamiltonian::SeparableHamiltonian(int dim, ScalarFn potential,
                                           VectorFn gradient, MatrixFn hessian)
    : potential_(std::move(potential)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      mass_(Matrix::Identity(dim, dim)),
      inverse_mass_(Matrix::Identity(dim, dim)),
      unit_mass_(true) {
  if (dim <= 0) throw InvalidInput("hamiltonian: dimension must be positive");
}

SeparableHamiltonian::SeparableHamiltonian(ScalarFn potential,
                                           VectorFn gradient, MatrixFn hessian,
                                           Matrix mass)
    : potential_(std::move(potential)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      mass_(std::move(mass)) {
  if (mass_.rows() == 0 || mass_.rows() != mass_.cols()) {
    throw InvalidInput("hamiltonian: mass matrix must be square and non-empty");
  }
  if ((mass_ - mass_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidInput("hamiltonian: mass matrix must be symmetric");
  }
  Eigen::LLT<Matrix> llt(mass_);
  if (llt.info() != Eigen::Success) {
    throw InvalidInput("hamiltonian: mass matrix must be positive definite");
  }
  inverse_mass_ = llt.solve(Matrix::Identity(mass_.rows(), mass_.cols()));
  inverse_mass_ = 0.5 * (inverse_mass_ + inverse_mass_.transpose()).eval();
  unit_mass_ = mass_.isIdentity(0.0);
}

double SeparableHamiltonian::kinetic(const Vector& p) const {
  if (unit_mass_) return 0.5 * p.squaredNorm();
  return 0.5 * p.dot(inverse_mass_ * p);
}

Vector SeparableHamiltonian::velocity(const Vector& p) const {
  if (unit_mass_) return p;
  return inverse_mass_ * p;
}

}  // namespace confsym
