#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "confsym/rattle.hpp"

namespace confsym {

struct IntegratorConfig {
  double h = 0.1;
  double gamma = 1.0;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;

  /// Newton settings with the given stepsize.
  RattleStepConfig rattle(double step) const {
    return {step, newton_tol, newton_max_iter};
  }
  RattleStepConfig rattle() const { return rattle(h); }

  /// Optimization runs require gamma >= 0; see validate_for_optimization.
  void validate() const;
  void validate_for_optimization() const;
};

enum class Method { kRattle, kSm1, kSm2 };

std::string_view to_string(Method m);

/// Exact flow of q' = 0, p' = -gamma p: (q, e^{-gamma t} p).
PhaseState dissipative_flow(const PhaseState& s, double gamma, double t);

/// Lie-Trotter splitting: RATTLE applied to (q, e^{-gamma h} p).
RattleStepResult sm1_step(const ConstraintManifold& man,
                          const SeparableHamiltonian& ham, const PhaseState& s,
                          const IntegratorConfig& cfg);

/// Strang splitting: RATTLE(h/2), then exact dissipation over h, then
/// RATTLE(h/2). For gamma = 0 this is two RATTLE half-steps. The reported
/// lambda comes from the first half-step, mu from the second; Newton counts
/// are summed.
RattleStepResult sm2_step(const ConstraintManifold& man,
                          const SeparableHamiltonian& ham, const PhaseState& s,
                          const IntegratorConfig& cfg);

/// Dispatches on the method; kRattle ignores gamma.
RattleStepResult integrator_step(Method method, const ConstraintManifold& man,
                                 const SeparableHamiltonian& ham,
                                 const PhaseState& s,
                                 const IntegratorConfig& cfg);

/// The conformal factor e^{-gamma h} a method contracts the symplectic form
/// by (1 for RATTLE).
double conformal_factor(Method method, const IntegratorConfig& cfg);

struct StoppingRule {
  enum class Kind {
    /// |f(q_n) - f_ref| <= tol, with f_ref the known minimum.
    kOracleGap,
    /// |f(q_n) - f(q_{n-1})| <= tol and |x_n - x_{n-1}| <= tol. Does not need
    /// the minimum; the CLI uses kOracleGap.
    kStagnation,
  };

  Kind kind = Kind::kOracleGap;
  double f_ref = 0.0;
  double tol = 1e-6;
  long max_iterations = 100000;

  static StoppingRule oracle_gap(double f_ref, double tol = 1e-6,
                                 long max_iterations = 100000) {
    return {Kind::kOracleGap, f_ref, tol, max_iterations};
  }
  static StoppingRule stagnation(double tol = 1e-6,
                                 long max_iterations = 100000) {
    return {Kind::kStagnation, 0.0, tol, max_iterations};
  }
};

struct TraceRecord {
  long iter = 0;
  double t = 0.0;
  double f = 0.0;
  double H = 0.0;
  double g_resid = 0.0;
  double tangency_resid = 0.0;
  double h = 0.0;  // stepsize that produced this iterate; 0 for the start
};

enum class RunStatus { kConverged, kMaxIterations, kStepFailure };

std::string_view to_string(RunStatus s);

struct RunReport {
  std::vector<TraceRecord> trace;  // iterations + 1 records
  PhaseState final_state;
  long iterations = 0;
  RunStatus status = RunStatus::kMaxIterations;
  std::string failure;  // message of the step failure, if any
};

/// Iterates sm1 or sm2 from s0 until the stopping rule fires. Step failures
/// end the run with status kStepFailure instead of throwing.
///
/// Throws InvalidInput when s0 is not consistent within kConsistencyTol or
/// the method is kRattle (no dissipation).
RunReport optimize(const ConstraintManifold& man,
                   const SeparableHamiltonian& ham, const PhaseState& s0,
                   const IntegratorConfig& cfg, Method method,
                   const StoppingRule& stop);

namespace detail {

TraceRecord make_record(const ConstraintManifold& man,
                        const SeparableHamiltonian& ham, const PhaseState& s,
                        long iter, double t, double h);

/// True when the rule is satisfied at the current record.
bool should_stop(const StoppingRule& stop, const TraceRecord& current,
                 const TraceRecord* previous, double step_norm);

/// Advances a state and reports the stepsize it used.
using StepFn = std::function<PhaseState(const PhaseState&, double& h_used)>;

/// Shared optimization loop: records the trace, applies the stopping rule
/// and turns library errors into kStepFailure.
RunReport drive(const ConstraintManifold& man, const SeparableHamiltonian& ham,
                const PhaseState& s0, const StoppingRule& stop,
                const StepFn& step);

}  // namespace detail

}  // namespace confsym
