#pragma once

#include "confsym/conformal.hpp"

namespace confsym {

/// Proportional stepsize control: h_{n+1} = (r / delta_n)^{theta/2} h_n.
struct AdaptiveConfig {
  double r = 0.06;        // desired distance between first/second order steps
  double theta = 0.001;   // gain, in [0, 2]
  double h0 = 0.1;
  double h_min = 1e-6;
  double h_max = 1.0;
  double growth_cap = 2.0;  // per-step growth bound, also used when delta = 0
  double gamma = 1.0;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  double tol = 1e-6;
  long max_iterations = 100000;

  void validate() const;

  /// Integrator settings at stepsize h.
  IntegratorConfig integrator(double h) const {
    return {h, gamma, newton_tol, newton_max_iter};
  }

  /// 0.1 for spectral widths below 200, 0.09 otherwise.
  static double default_h0(double spectral_width) {
    return spectral_width < 200.0 ? 0.1 : 0.09;
  }
};

/// clamp(h * min((r/delta)^{theta/2}, growth_cap), h_min, h_max). theta = 0
/// leaves h untouched.
double controller_update(double h, double delta, const AdaptiveConfig& cfg);

struct AdaptiveStep {
  PhaseState state;  // the SM1 iterate
  double h_next = 0.0;
  double delta = 0.0;
};

/// Takes an SM1 step, measures its Euclidean distance to the SM2 step from
/// the same state and stepsize, and proposes the next stepsize.
AdaptiveStep adaptive_step(const ConstraintManifold& man,
                           const SeparableHamiltonian& ham,
                           const PhaseState& s, double h,
                           const AdaptiveConfig& cfg);

/// Adaptive loop under the oracle-gap rule with f_ref, tol and
/// max_iterations from the config. The trace records the stepsize used for
/// each iterate.
RunReport adaptive_optimize(const ConstraintManifold& man,
                            const SeparableHamiltonian& ham,
                            const PhaseState& s0, const AdaptiveConfig& cfg,
                            double f_ref);

/// Same loop with an arbitrary stopping rule (tol/max_iterations taken from
/// the rule).
RunReport adaptive_optimize(const ConstraintManifold& man,
                            const SeparableHamiltonian& ham,
                            const PhaseState& s0, const AdaptiveConfig& cfg,
                            const StoppingRule& stop);

}  // namespace confsym
