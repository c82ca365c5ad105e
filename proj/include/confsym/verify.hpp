#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "confsym/conformal.hpp"

namespace confsym {

/// A one-step map on the phase manifold.
using StepMap = std::function<PhaseState(const PhaseState&)>;
/// A one-step method parameterized by its stepsize.
using StepFamily = std::function<PhaseState(const PhaseState&, double)>;

StepMap make_step_map(Method method, const ConstraintManifold& man,
                      const SeparableHamiltonian& ham,
                      const IntegratorConfig& cfg);
StepFamily make_step_family(Method method, const ConstraintManifold& man,
                            const SeparableHamiltonian& ham,
                            const IntegratorConfig& cfg);

/// Central-difference directional derivative of the step map along the
/// retraction curve through s with velocity xi.
Vector step_tangent_map(const StepMap& step, const ConstraintManifold& man,
                        const SeparableHamiltonian& ham, const PhaseState& s,
                        const Vector& xi, double eps);

/// Canonical symplectic form x^T J y with J = [[0, I], [-I, 0]].
double symplectic_form(const Vector& x, const Vector& y);

struct ConformalityOptions {
  int samples = 20;
  double eps = 1e-5;
  std::uint64_t seed = 0;
};

struct ConformalityReport {
  double factor_expected = 1.0;
  double max_residual = 0.0;
  int samples = 0;
  double fd_epsilon = 0.0;
};

/// Max over random tangent pairs of
///   |(Phi' xi1)^T J (Phi' xi2) - factor * xi1^T J xi2|.
ConformalityReport conformality_check(const StepMap& step,
                                      const ConstraintManifold& man,
                                      const SeparableHamiltonian& ham,
                                      const PhaseState& s,
                                      double expected_factor,
                                      const ConformalityOptions& opts = {});
/// Expected factor from conformal_factor(method, cfg).
ConformalityReport conformality_check(Method method,
                                      const ConstraintManifold& man,
                                      const SeparableHamiltonian& ham,
                                      const PhaseState& s,
                                      const IntegratorConfig& cfg,
                                      const ConformalityOptions& opts = {});

struct OrderReport {
  std::vector<double> stepsizes;  // strictly decreasing, surviving runs only
  std::vector<double> errors;
  double slope = 0.0;
  std::vector<std::string> failures;  // one message per failed stepsize
};

/// Global error at time `horizon` against a reference computed with stepsize
/// min(h_list)/64, and the least-squares slope of log(error) vs log(h).
/// Throws InvalidInput when horizon/h is not integral, StepFailure when fewer
/// than three stepsizes survive.
OrderReport measure_order(const StepFamily& step, const PhaseState& s,
                          double horizon, std::vector<double> h_list);

/// |Psi_{-h}(Psi_h(s)) - s| for the given method.
double symmetry_check(Method method, const ConstraintManifold& man,
                      const SeparableHamiltonian& ham, const PhaseState& s,
                      const IntegratorConfig& cfg);

/// Uniform-ish random point of the phase manifold over the sphere: q a
/// normalized Gaussian, p a Gaussian projected onto the hidden constraint and
/// scaled to the given norm.
PhaseState random_sphere_state(int dim, std::uint64_t seed,
                               double momentum_norm = 1.0);

}  // namespace confsym
