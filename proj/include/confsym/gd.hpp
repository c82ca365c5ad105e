#pragma once

#include <string>
#include <vector>

#include "confsym/conformal.hpp"
#include "confsym/model.hpp"

namespace confsym {

/// Projected gradient descent on the unit sphere:
///   q+ = (q - h (I - q q^T) grad f(q)) / |q - h (I - q q^T) grad f(q)|
struct GdConfig {
  double h = 0.1;
  double tol = 1e-6;
  long max_iterations = 100000;
  bool record_analysis = false;  // compute rho(DF(q_n)) at every iterate

  void validate() const;
};

struct GdAnalysisRecord {
  long iteration = 0;
  double rho = 0.0;
  double f_value = 0.0;
};

struct GdRunReport : RunReport {
  std::vector<GdAnalysisRecord> analysis;
  double final_rho = 0.0;  // rho(DF(q_N)) at the last iterate, always set
};

/// The GD update F(q) evaluated at any q of the ambient space (no unit-norm
/// check). Throws StepFailure if the unnormalized update vanishes.
Vector gd_update_map(const QuadraticProblem& prob, const Vector& q, double h);

/// gd_update_map restricted to the sphere.
/// Throws InvalidInput if |q| differs from 1 by more than 1e-10, StepFailure
/// if the unnormalized update vanishes.
Vector gd_step(const QuadraticProblem& prob, const Vector& q, double h);

/// Closed-form Jacobian of the GD step map at a unit q. With
/// c = q^T A q, k = 1 + 2hc, v = kq - 2hAq:
///   DF = (kI - 2hA + 4h qq^T A)/|v|
///      - (k^3 qq^T - 2hk^2 Aqq^T - 8ckh^2 qq^T A)/|v|^3
///      - (4kh^2 qq^T A^2 + 16ch^3 Aqq^T A - 8h^3 Aqq^T A^2)/|v|^3
Matrix gd_jacobian(const QuadraticProblem& prob, const Vector& q, double h);

/// max |eigenvalue| from a dense eigensolve.
double spectral_radius(const Matrix& m);

/// h_l = 1 / (lambda_max - lambda_min).
double limiting_stepsize(const SpectrumRange& range);

/// h_l as a decimal string truncated to the given number of significant
/// digits, computed exactly from the decimal values of the range endpoints.
std::string limiting_stepsize_decimal(const SpectrumRange& range,
                                      int significant_digits = 8);

/// The truncation rule for a practical GD stepsize, in exact decimal
/// arithmetic:
///   h_l >= 1: floor(h_l) - 0.1
///   h_l <  1: keep the first nonzero digit and drop the rest; when nothing
///             is dropped (h_l has one significant digit) step one unit down
///             in the next decimal place instead (0.5 -> 0.49).
/// Throws InvalidInput for h_l <= 0 or non-finite input.
double optimal_stepsize(double h_l);
std::string optimal_stepsize_decimal(double h_l);
/// Exact variant working from the range endpoints, immune to the rounding in
/// 1/(lambda_max - lambda_min).
std::string optimal_stepsize_decimal(const SpectrumRange& range);

/// The eleven (lambda_min, lambda_max) pairs printed by the table command,
/// in order.
std::vector<SpectrumRange> reference_spectrum_ranges();

/// Iterates gd_step until |f(q_n) - f_ref| <= tol or max_iterations.
GdRunReport gd_optimize(const QuadraticProblem& prob, const Vector& q0,
                        const GdConfig& cfg, double f_ref);
/// f_ref taken from eigen_oracle.
GdRunReport gd_optimize(const QuadraticProblem& prob, const Vector& q0,
                        const GdConfig& cfg);

}  // namespace confsym
