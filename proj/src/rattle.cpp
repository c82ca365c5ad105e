#include "confsym/rattle.hpp"

#include <cmath>
#include <string>

#include "confsym/errors.hpp"

namespace confsym {

void RattleStepConfig::validate() const {
  if (!std::isfinite(h)) throw InvalidInput("rattle: h must be finite");
  if (!(newton_tol > 0.0)) {
    throw InvalidInput("rattle: newton_tol must be positive");
  }
  if (newton_max_iter <= 0) {
    throw InvalidInput("rattle: newton_max_iter must be positive");
  }
}

RattleStepResult rattle_step(const ConstraintManifold& man,
                             const SeparableHamiltonian& ham,
                             const PhaseState& s, const RattleStepConfig& cfg) {
  cfg.validate();
  static_cast<void>(residuals(man, ham, s));  // dimension check
  const int m = man.constraint_dim();
  const double h = cfg.h;

  RattleStepResult out;
  out.lambda = Vector::Zero(m);
  out.mu = Vector::Zero(m);
  if (h == 0.0) {
    out.state = s;
    return out;
  }

  const Matrix G0t = man.jacobian(s.q).transpose();
  const Vector kicked = s.p - 0.5 * h * ham.force_gradient(s.q);

  // Position stage: Newton on x = h*lambda for g(q1(x)) = 0.
  Vector x = Vector::Zero(m);
  Vector p_half = kicked;
  Vector q1 = s.q + h * ham.velocity(p_half);
  int iters = 0;
  for (;; ++iters) {
    const Vector res = man.value(q1);
    const double res_norm = res.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(res_norm)) {
      throw StepFailure("rattle: non-finite constraint residual", res_norm);
    }
    if (res_norm <= cfg.newton_tol) break;
    if (iters >= cfg.newton_max_iter) {
      throw StepFailure("rattle: position stage did not converge in " +
                            std::to_string(cfg.newton_max_iter) +
                            " Newton iterations",
                        res_norm);
    }
    // dg(q1)/dx = -(h/2) G(q1) M^{-1} G(q0)^T
    Eigen::FullPivLU<Matrix> lu(man.jacobian(q1) * ham.inverse_mass() * G0t);
    if (!lu.isInvertible()) {
      throw DegenerateConstraint(
          "rattle: singular Newton matrix G(q1) H_pp G(q0)^T");
    }
    x += (2.0 / h) * lu.solve(res);
    p_half = kicked - 0.5 * (G0t * x);
    q1 = s.q + h * ham.velocity(p_half);
  }
  out.newton_iters_position = iters;
  out.lambda = x / h;

  // Projection stage, linear in (p1, nu) with nu = h/2 mu.
  const Matrix G1 = man.jacobian(q1);
  const Matrix G1Minv = G1 * ham.inverse_mass();
  const Vector base = p_half - 0.5 * h * ham.force_gradient(q1);
  Eigen::FullPivLU<Matrix> schur(G1Minv * G1.transpose());
  if (!schur.isInvertible()) {
    throw DegenerateConstraint("rattle: singular Schur complement G H_pp G^T");
  }
  const Vector nu = schur.solve(G1Minv * base);
  out.state.q = std::move(q1);
  out.state.p = base - G1.transpose() * nu;
  out.mu = (2.0 / h) * nu;
  out.newton_iters_projection = 1;
  return out;
}

}  // namespace confsym
