#include "confsym/conformal.hpp"

#include <cmath>
#include <limits>

#include "confsym/errors.hpp"

namespace confsym {

void IntegratorConfig::validate() const {
  rattle().validate();
  if (!std::isfinite(gamma)) throw InvalidInput("gamma must be finite");
}

void IntegratorConfig::validate_for_optimization() const {
  validate();
  if (!(h > 0.0)) throw InvalidInput("h must be positive");
  if (gamma < 0.0) throw InvalidInput("gamma must be non-negative");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kRattle: return "rattle";
    case Method::kSm1: return "sm1";
    case Method::kSm2: return "sm2";
  }
  return "unknown";
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kConverged: return "converged";
    case RunStatus::kMaxIterations: return "max-iterations";
    case RunStatus::kStepFailure: return "step-failure";
  }
  return "unknown";
}

PhaseState dissipative_flow(const PhaseState& s, double gamma, double t) {
  return {s.q, std::exp(-gamma * t) * s.p};
}

RattleStepResult sm1_step(const ConstraintManifold& man,
                          const SeparableHamiltonian& ham, const PhaseState& s,
                          const IntegratorConfig& cfg) {
  return rattle_step(man, ham, dissipative_flow(s, cfg.gamma, cfg.h),
                     cfg.rattle());
}

RattleStepResult sm2_step(const ConstraintManifold& man,
                          const SeparableHamiltonian& ham, const PhaseState& s,
                          const IntegratorConfig& cfg) {
  const auto half = cfg.rattle(0.5 * cfg.h);
  const RattleStepResult first = rattle_step(man, ham, s, half);
  RattleStepResult second = rattle_step(
      man, ham, dissipative_flow(first.state, cfg.gamma, cfg.h), half);
  second.lambda = first.lambda;
  second.newton_iters_position += first.newton_iters_position;
  second.newton_iters_projection += first.newton_iters_projection;
  return second;
}

RattleStepResult integrator_step(Method method, const ConstraintManifold& man,
                                 const SeparableHamiltonian& ham,
                                 const PhaseState& s,
                                 const IntegratorConfig& cfg) {
  switch (method) {
    case Method::kRattle: return rattle_step(man, ham, s, cfg.rattle());
    case Method::kSm1: return sm1_step(man, ham, s, cfg);
    case Method::kSm2: return sm2_step(man, ham, s, cfg);
  }
  throw InvalidInput("unknown integrator");
}

double conformal_factor(Method method, const IntegratorConfig& cfg) {
  if (method == Method::kRattle) return 1.0;
  return std::exp(-cfg.gamma * cfg.h);
}

namespace detail {

TraceRecord make_record(const ConstraintManifold& man,
                        const SeparableHamiltonian& ham, const PhaseState& s,
                        long iter, double t, double h) {
  const Residuals r = residuals(man, ham, s);
  TraceRecord rec;
  rec.iter = iter;
  rec.t = t;
  rec.f = ham.potential(s.q);
  rec.H = rec.f + ham.kinetic(s.p);
  rec.g_resid = primary_residual(r);
  rec.tangency_resid = hidden_residual(r);
  rec.h = h;
  return rec;
}

bool should_stop(const StoppingRule& stop, const TraceRecord& current,
                 const TraceRecord* previous, double step_norm) {
  switch (stop.kind) {
    case StoppingRule::Kind::kOracleGap:
      return std::abs(current.f - stop.f_ref) <= stop.tol;
    case StoppingRule::Kind::kStagnation:
      return previous != nullptr &&
             std::abs(current.f - previous->f) <= stop.tol &&
             step_norm <= stop.tol;
  }
  return false;
}

RunReport drive(const ConstraintManifold& man, const SeparableHamiltonian& ham,
                const PhaseState& s0, const StoppingRule& stop,
                const StepFn& step) {
  RunReport report;
  PhaseState s = s0;
  double t = 0.0;
  report.trace.push_back(make_record(man, ham, s, 0, t, 0.0));
  if (should_stop(stop, report.trace.back(), nullptr,
                  std::numeric_limits<double>::infinity())) {
    report.status = RunStatus::kConverged;
    report.final_state = std::move(s);
    return report;
  }

  long n = 0;
  for (;;) {
    if (n >= stop.max_iterations) {
      report.status = RunStatus::kMaxIterations;
      break;
    }
    double h_used = 0.0;
    PhaseState next;
    try {
      next = step(s, h_used);
    } catch (const Error& e) {
      report.status = RunStatus::kStepFailure;
      report.failure = e.what();
      break;
    }
    ++n;
    t += h_used;
    const double step_norm = (concat(next) - concat(s)).norm();
    s = std::move(next);
    report.trace.push_back(make_record(man, ham, s, n, t, h_used));
    const auto& cur = report.trace.back();
    if (!std::isfinite(cur.f) || !std::isfinite(cur.H)) {
      report.status = RunStatus::kStepFailure;
      report.failure = "non-finite iterate";
      break;
    }
    if (should_stop(stop, cur, &report.trace[report.trace.size() - 2],
                    step_norm)) {
      report.status = RunStatus::kConverged;
      break;
    }
  }
  report.iterations = n;
  report.final_state = std::move(s);
  return report;
}

}  // namespace detail

RunReport optimize(const ConstraintManifold& man,
                   const SeparableHamiltonian& ham, const PhaseState& s0,
                   const IntegratorConfig& cfg, Method method,
                   const StoppingRule& stop) {
  cfg.validate_for_optimization();
  if (method == Method::kRattle) {
    throw InvalidInput("optimize: method must be sm1 or sm2");
  }
  if (stop.max_iterations < 0 || !(stop.tol > 0.0)) {
    throw InvalidInput("optimize: need tol > 0 and max_iterations >= 0");
  }
  if (!is_consistent(man, ham, s0, kConsistencyTol)) {
    throw InvalidInput("optimize: initial state is not on the phase manifold");
  }
  return detail::drive(man, ham, s0, stop,
                       [&](const PhaseState& s, double& h_used) {
                         h_used = cfg.h;
                         return integrator_step(method, man, ham, s, cfg).state;
                       });
}

}  // namespace confsym
