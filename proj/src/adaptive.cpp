#include "confsym/adaptive.hpp"

#include <algorithm>
#include <cmath>

#include "confsym/errors.hpp"

namespace confsym {

void AdaptiveConfig::validate() const {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidInput("adaptive: r must be positive");
  if (!(theta >= 0.0 && theta <= 2.0)) {
    throw InvalidInput("adaptive: theta must lie in [0, 2]");
  }
  if (!(h_min > 0.0) || !(h_min <= h0) || !(h0 <= h_max) ||
      !std::isfinite(h_max)) {
    throw InvalidInput("adaptive: need 0 < h_min <= h0 <= h_max");
  }
  if (!(growth_cap >= 1.0)) {
    throw InvalidInput("adaptive: growth_cap must be at least 1");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw InvalidInput("adaptive: gamma must be non-negative");
  }
  if (!(tol > 0.0)) throw InvalidInput("adaptive: tol must be positive");
  if (max_iterations < 0) {
    throw InvalidInput("adaptive: max_iterations must be non-negative");
  }
  integrator(h0).validate();
}

double controller_update(double h, double delta, const AdaptiveConfig& cfg) {
  if (cfg.theta == 0.0) return h;
  double factor = cfg.growth_cap;
  if (delta > 0.0) {
    factor = std::min(std::pow(cfg.r / delta, 0.5 * cfg.theta), cfg.growth_cap);
  }
  return std::clamp(h * factor, cfg.h_min, cfg.h_max);
}

AdaptiveStep adaptive_step(const ConstraintManifold& man,
                           const SeparableHamiltonian& ham,
                           const PhaseState& s, double h,
                           const AdaptiveConfig& cfg) {
  const IntegratorConfig icfg = cfg.integrator(h);
  RattleStepResult first = sm1_step(man, ham, s, icfg);
  const RattleStepResult second = sm2_step(man, ham, s, icfg);
  AdaptiveStep out;
  out.delta = (concat(first.state) - concat(second.state)).norm();
  out.h_next = controller_update(h, out.delta, cfg);
  out.state = std::move(first.state);
  return out;
}

RunReport adaptive_optimize(const ConstraintManifold& man,
                            const SeparableHamiltonian& ham,
                            const PhaseState& s0, const AdaptiveConfig& cfg,
                            double f_ref) {
  return adaptive_optimize(
      man, ham, s0, cfg,
      StoppingRule::oracle_gap(f_ref, cfg.tol, cfg.max_iterations));
}

RunReport adaptive_optimize(const ConstraintManifold& man,
                            const SeparableHamiltonian& ham,
                            const PhaseState& s0, const AdaptiveConfig& cfg,
                            const StoppingRule& stop) {
  cfg.validate();
  if (stop.max_iterations < 0 || !(stop.tol > 0.0)) {
    throw InvalidInput("adaptive: need tol > 0 and max_iterations >= 0");
  }
  if (!is_consistent(man, ham, s0, kConsistencyTol)) {
    throw InvalidInput("adaptive: initial state is not on the phase manifold");
  }
  double h = cfg.h0;
  return detail::drive(man, ham, s0, stop,
                       [&](const PhaseState& s, double& h_used) {
                         AdaptiveStep step = adaptive_step(man, ham, s, h, cfg);
                         h_used = h;
                         h = step.h_next;
                         return std::move(step.state);
                       });
}

}  // namespace confsym
