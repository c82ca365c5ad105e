#pragma once

#include <cstdint>

#include "confsym/hamiltonian.hpp"

namespace confsym {

/// Extreme eigenvalues of a test matrix.
struct SpectrumRange {
  double lambda_min;
  double lambda_max;

  /// Throws InvalidInput unless lambda_min < lambda_max (both finite).
  SpectrumRange(double lmin, double lmax);

  /// I_lambda = lambda_max - lambda_min.
  double width() const { return lambda_max - lambda_min; }
};

/// f(q) = q^T A q with A symmetric.
class QuadraticProblem {
 public:
  explicit QuadraticProblem(Matrix A);

  int dim() const { return static_cast<int>(A_.rows()); }
  const Matrix& matrix() const { return A_; }

  double value(const Vector& q) const { return q.dot(A_ * q); }
  Vector gradient(const Vector& q) const { return 2.0 * (A_ * q); }
  Matrix hessian() const { return 2.0 * A_; }

 private:
  Matrix A_;
};

/// A = Q diag(lambda) Q^T with the extremes fixed to the range, interior
/// eigenvalues uniform in between and Q a seeded Haar-like orthogonal matrix.
/// Deterministic for a fixed seed.
QuadraticProblem generate_matrix(const SpectrumRange& range, int dim,
                                 std::uint64_t seed);

struct EigenOracle {
  double min_value;
  Vector minimizer;
};

/// Exact solution of min_{|q|=1} q^T A q via a dense symmetric eigensolver.
/// The eigenvector sign is fixed so that its largest-magnitude entry is
/// positive.
EigenOracle eigen_oracle(const QuadraticProblem& prob);

/// H = q^T A q + 1/2 p^T M^{-1} p.
SeparableHamiltonian make_hamiltonian(const QuadraticProblem& prob);
SeparableHamiltonian make_hamiltonian(const QuadraticProblem& prob,
                                      const Matrix& mass);

/// The reference initial condition: q0 = e_k and p0 = ones with a zero at k,
/// where k is index 5 (0-based) for d = 10 and index 0 otherwise.
PhaseState default_initial_state(int dim);

}  // namespace confsym
