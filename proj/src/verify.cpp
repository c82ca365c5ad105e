#include "confsym/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "confsym/errors.hpp"

namespace confsym {

StepMap make_step_map(Method method, const ConstraintManifold& man,
                      const SeparableHamiltonian& ham,
                      const IntegratorConfig& cfg) {
  return [method, &man, &ham, cfg](const PhaseState& s) {
    return integrator_step(method, man, ham, s, cfg).state;
  };
}

StepFamily make_step_family(Method method, const ConstraintManifold& man,
                            const SeparableHamiltonian& ham,
                            const IntegratorConfig& cfg) {
  return [method, &man, &ham, cfg](const PhaseState& s, double h) {
    IntegratorConfig c = cfg;
    c.h = h;
    return integrator_step(method, man, ham, s, c).state;
  };
}

Vector step_tangent_map(const StepMap& step, const ConstraintManifold& man,
                        const SeparableHamiltonian& ham, const PhaseState& s,
                        const Vector& xi, double eps) {
  if (!(eps > 0.0)) throw InvalidInput("step_tangent_map: eps must be positive");
  const Vector plus = concat(step(retract(man, ham, s, xi, eps)));
  const Vector minus = concat(step(retract(man, ham, s, xi, -eps)));
  return (plus - minus) / (2.0 * eps);
}

double symplectic_form(const Vector& x, const Vector& y) {
  const auto n = x.size() / 2;
  // x^T J y = x_q . y_p - x_p . y_q
  return x.head(n).dot(y.tail(n)) - x.tail(n).dot(y.head(n));
}

ConformalityReport conformality_check(const StepMap& step,
                                      const ConstraintManifold& man,
                                      const SeparableHamiltonian& ham,
                                      const PhaseState& s,
                                      double expected_factor,
                                      const ConformalityOptions& opts) {
  if (opts.samples <= 0) {
    throw InvalidInput("conformality_check: samples must be positive");
  }
  const std::vector<Vector> basis = tangent_basis(man, ham, s);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  auto random_tangent = [&] {
    Vector xi = Vector::Zero(basis.front().size());
    for (const auto& b : basis) xi += normal(rng) * b;
    return Vector(xi.normalized());
  };

  ConformalityReport report;
  report.factor_expected = expected_factor;
  report.samples = opts.samples;
  report.fd_epsilon = opts.eps;
  for (int k = 0; k < opts.samples; ++k) {
    const Vector xi1 = random_tangent();
    const Vector xi2 = random_tangent();
    const Vector d1 = step_tangent_map(step, man, ham, s, xi1, opts.eps);
    const Vector d2 = step_tangent_map(step, man, ham, s, xi2, opts.eps);
    const double residual = std::abs(symplectic_form(d1, d2) -
                                     expected_factor * symplectic_form(xi1, xi2));
    report.max_residual = std::max(report.max_residual, residual);
  }
  return report;
}

ConformalityReport conformality_check(Method method,
                                      const ConstraintManifold& man,
                                      const SeparableHamiltonian& ham,
                                      const PhaseState& s,
                                      const IntegratorConfig& cfg,
                                      const ConformalityOptions& opts) {
  return conformality_check(make_step_map(method, man, ham, cfg), man, ham, s,
                            conformal_factor(method, cfg), opts);
}

namespace {

long step_count(double horizon, double h) {
  const double n = horizon / h;
  const double rounded = std::round(n);
  if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) {
    throw InvalidInput("measure_order: horizon/h must be a positive integer");
  }
  return static_cast<long>(rounded);
}

PhaseState integrate(const StepFamily& step, PhaseState s, double h, long n) {
  for (long i = 0; i < n; ++i) s = step(s, h);
  return s;
}

}  // namespace

OrderReport measure_order(const StepFamily& step, const PhaseState& s,
                          double horizon, std::vector<double> h_list) {
  if (h_list.size() < 3) {
    throw InvalidInput("measure_order: need at least three stepsizes");
  }
  std::sort(h_list.begin(), h_list.end(), std::greater<>());
  if (std::adjacent_find(h_list.begin(), h_list.end()) != h_list.end() ||
      !(h_list.back() > 0.0)) {
    throw InvalidInput("measure_order: stepsizes must be distinct and positive");
  }
  for (double h : h_list) step_count(horizon, h);

  const double h_ref = h_list.back() / 64.0;
  const Vector reference =
      concat(integrate(step, s, h_ref, step_count(horizon, h_ref)));

  OrderReport report;
  for (double h : h_list) {
    try {
      const Vector x = concat(integrate(step, s, h, step_count(horizon, h)));
      const double err = (x - reference).norm();
      if (!(err > 0.0) || !std::isfinite(err)) {
        report.failures.push_back("h=" + std::to_string(h) +
                                  ": error not positive and finite");
        continue;
      }
      report.stepsizes.push_back(h);
      report.errors.push_back(err);
    } catch (const Error& e) {
      report.failures.push_back("h=" + std::to_string(h) + ": " + e.what());
    }
  }
  const auto n = report.stepsizes.size();
  if (n < 3) {
    throw StepFailure("measure_order: fewer than three stepsizes survived",
                      static_cast<double>(n));
  }
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += std::log(report.stepsizes[i]);
    my += std::log(report.errors[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = std::log(report.stepsizes[i]) - mx;
    sxy += dx * (std::log(report.errors[i]) - my);
    sxx += dx * dx;
  }
  report.slope = sxy / sxx;
  return report;
}

double symmetry_check(Method method, const ConstraintManifold& man,
                      const SeparableHamiltonian& ham, const PhaseState& s,
                      const IntegratorConfig& cfg) {
  IntegratorConfig back = cfg;
  back.h = -cfg.h;
  const PhaseState forward = integrator_step(method, man, ham, s, cfg).state;
  const PhaseState returned =
      integrator_step(method, man, ham, forward, back).state;
  return (concat(returned) - concat(s)).norm();
}

PhaseState random_sphere_state(int dim, std::uint64_t seed,
                               double momentum_norm) {
  if (dim < 2) throw InvalidInput("random_sphere_state: dim must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  PhaseState s{Vector(dim), Vector(dim)};
  for (int i = 0; i < dim; ++i) s.q(i) = normal(rng);
  for (int i = 0; i < dim; ++i) s.p(i) = normal(rng);
  s.q.normalize();
  s.p -= s.q * s.q.dot(s.p);
  s.p *= momentum_norm / s.p.norm();
  return s;
}

}  // namespace confsym
