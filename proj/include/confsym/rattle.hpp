#pragma once

#include "confsym/geometry.hpp"

namespace confsym {

struct RattleStepConfig {
  double h = 0.1;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;

  /// Throws InvalidInput on a non-finite h, non-positive tolerance or
  /// iteration budget.
  void validate() const;
};

struct RattleStepResult {
  PhaseState state;
  Vector lambda;  // position multiplier
  Vector mu;      // momentum projection multiplier
  int newton_iters_position = 0;
  int newton_iters_projection = 0;
};

/// One RATTLE step for a separable Hamiltonian.
///
///   p_half = p - h/2 (H_q(q) + G(q)^T lambda)
///   q1     = q + h H_p(p_half),           g(q1) = 0
///   p1     = p_half - h/2 (H_q(q1) + G(q1)^T mu),  G(q1) H_p(p1) = 0
///
/// The position stage is solved by Newton on the m-vector h*lambda starting
/// from zero; the projection stage is linear and solved through the Schur
/// complement G H_pp G^T. A zero step returns the input unchanged.
///
/// Throws StepFailure when Newton does not reach newton_tol within
/// newton_max_iter iterations, DegenerateConstraint when a Schur complement is
/// singular.
RattleStepResult rattle_step(const ConstraintManifold& man,
                             const SeparableHamiltonian& ham,
                             const PhaseState& s, const RattleStepConfig& cfg);

}  // namespace confsym
