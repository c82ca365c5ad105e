#include "confsym/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "confsym/errors.hpp"

namespace confsym {

SpectrumRange::SpectrumRange(double lmin, double lmax)
    : lambda_min(lmin), lambda_max(lmax) {
  if (!std::isfinite(lmin) || !std::isfinite(lmax) || !(lmin < lmax)) {
    throw InvalidInput("spectrum range: need finite lambda_min < lambda_max");
  }
}

QuadraticProblem::QuadraticProblem(Matrix A) : A_(std::move(A)) {
  if (A_.rows() == 0 || A_.rows() != A_.cols()) {
    throw InvalidInput("quadratic problem: A must be square and non-empty");
  }
  if ((A_ - A_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidInput("quadratic problem: A must be symmetric");
  }
}

QuadraticProblem generate_matrix(const SpectrumRange& range, int dim,
                                 std::uint64_t seed) {
  if (dim < 2) throw InvalidInput("generate_matrix: dim must be at least 2");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(range.lambda_min,
                                                 range.lambda_max);

  Vector eigenvalues(dim);
  eigenvalues(0) = range.lambda_min;
  eigenvalues(dim - 1) = range.lambda_max;
  for (int i = 1; i < dim - 1; ++i) {
    double x = uniform(rng);
    while (x == range.lambda_min) x = uniform(rng);  // open interval
    eigenvalues(i) = x;
  }

  Matrix gaussian(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) gaussian(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(gaussian);
  Matrix Q = qr.householderQ();
  const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  }

  Matrix A = Q * eigenvalues.asDiagonal() * Q.transpose();
  A = 0.5 * (A + A.transpose()).eval();
  return QuadraticProblem(std::move(A));
}

EigenOracle eigen_oracle(const QuadraticProblem& prob) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(prob.matrix());
  if (solver.info() != Eigen::Success) {
    throw InvalidInput("eigen_oracle: eigensolver failed");
  }
  // eigenvalues come sorted ascending
  Vector v = solver.eigenvectors().col(0).normalized();
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0.0) v = -v;
  return {solver.eigenvalues()(0), v};
}

SeparableHamiltonian make_hamiltonian(const QuadraticProblem& prob) {
  return SeparableHamiltonian(
      prob.dim(), [prob](const Vector& q) { return prob.value(q); },
      [prob](const Vector& q) { return prob.gradient(q); },
      [prob](const Vector&) { return prob.hessian(); });
}

SeparableHamiltonian make_hamiltonian(const QuadraticProblem& prob,
                                      const Matrix& mass) {
  return SeparableHamiltonian(
      [prob](const Vector& q) { return prob.value(q); },
      [prob](const Vector& q) { return prob.gradient(q); },
      [prob](const Vector&) { return prob.hessian(); }, mass);
}

PhaseState default_initial_state(int dim) {
  if (dim < 2) throw InvalidInput("initial state: dim must be at least 2");
  const int k = dim == 10 ? 5 : 0;
  PhaseState s{Vector::Zero(dim), Vector::Ones(dim)};
  s.q(k) = 1.0;
  s.p(k) = 0.0;
  return s;
}

}  // namespace confsym
