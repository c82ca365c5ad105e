#include <cmath>

#include <doctest.h>

#include "confsym/adaptive.hpp"
#include "confsym/errors.hpp"
#include "confsym/model.hpp"
#include "confsym/verify.hpp"

using namespace confsym;

namespace {

struct Setup {
  QuadraticProblem prob = generate_matrix({-1, 1}, 10, 0);
  SeparableHamiltonian ham = make_hamiltonian(prob);
  SphereConstraint sphere{10};
  PhaseState s0 = default_initial_state(10);
  double f_min = eigen_oracle(prob).min_value;
};

}  // namespace

TEST_CASE("controller examples") {
  AdaptiveConfig cfg;
  CHECK(controller_update(0.1, cfg.r, cfg) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(controller_update(0.1, 0.6, cfg) ==
        doctest::Approx(0.1 * std::pow(0.1, 0.0005)).epsilon(1e-14));
  CHECK(controller_update(0.1, 0.6, cfg) == doctest::Approx(0.0998849).epsilon(1e-6));
  CHECK(controller_update(0.1, 0.006, cfg) > 0.1);

  AdaptiveConfig frozen;
  frozen.theta = 0.0;
  CHECK(controller_update(0.1, 123.0, frozen) == 0.1);
  CHECK(controller_update(0.1, 0.0, frozen) == 0.1);
}

TEST_CASE("controller is monotone in delta and bounded") {
  AdaptiveConfig cfg;
  cfg.theta = 1.5;
  double prev = controller_update(0.1, 1e-12, cfg);
  for (double d = 1e-10; d < 10.0; d *= 3.0) {
    const double h = controller_update(0.1, d, cfg);
    CHECK(h <= prev);
    prev = h;
  }
  CHECK(controller_update(0.1, 0.0, cfg) == doctest::Approx(0.2));
  CHECK(controller_update(0.9, 1e-9, cfg) == cfg.h_max);
  CHECK(controller_update(2e-6, 1e6, cfg) == cfg.h_min);
}

TEST_CASE("adaptive config validation") {
  AdaptiveConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  AdaptiveConfig bad = cfg;
  bad.r = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = cfg;
  bad.theta = 2.5;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = cfg;
  bad.h0 = 2.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = cfg;
  bad.h_min = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  CHECK(AdaptiveConfig::default_h0(2.0) == 0.1);
  CHECK(AdaptiveConfig::default_h0(200.0) == 0.09);
}

TEST_CASE("adaptive step advances with the first-order iterate") {
  const Setup st;
  AdaptiveConfig cfg;
  const auto step = adaptive_step(st.sphere, st.ham, st.s0, 0.1, cfg);
  const auto one = sm1_step(st.sphere, st.ham, st.s0, cfg.integrator(0.1));
  const auto two = sm2_step(st.sphere, st.ham, st.s0, cfg.integrator(0.1));
  CHECK(concat(step.state) == concat(one.state));
  CHECK(step.delta == doctest::Approx((concat(one.state) - concat(two.state)).norm()));
  CHECK(step.h_next == controller_update(0.1, step.delta, cfg));
}

TEST_CASE("delta is second order in h") {
  const Setup st;
  AdaptiveConfig cfg;
  for (int i = 0; i < 5; ++i) {
    const PhaseState s = random_sphere_state(10, 60 + i, 1.0);
    const double d1 = adaptive_step(st.sphere, st.ham, s, 0.02, cfg).delta;
    const double d2 = adaptive_step(st.sphere, st.ham, s, 0.01, cfg).delta;
    CHECK(d1 / d2 >= 3.0);
    CHECK(d1 / d2 <= 5.0);
  }
}

TEST_CASE("theta = 0 reproduces fixed-step SM1") {
  const Setup st;
  AdaptiveConfig cfg;
  cfg.theta = 0.0;
  const auto ad = adaptive_optimize(st.sphere, st.ham, st.s0, cfg, st.f_min);
  const auto fx = optimize(st.sphere, st.ham, st.s0, cfg.integrator(0.1),
                           Method::kSm1, StoppingRule::oracle_gap(st.f_min));
  REQUIRE(ad.trace.size() == fx.trace.size());
  CHECK(concat(ad.final_state) == concat(fx.final_state));
  for (size_t i = 0; i < ad.trace.size(); ++i) {
    CHECK(ad.trace[i].f == fx.trace[i].f);
  }
}

TEST_CASE("adaptive runs terminate") {
  const Setup st;
  for (double theta : {0.001, 0.01, 0.1, 0.5, 1.0, 2.0}) {
    AdaptiveConfig cfg;
    cfg.theta = theta;
    cfg.max_iterations = 5000;
    const auto rep = adaptive_optimize(st.sphere, st.ham, st.s0, cfg, st.f_min);
    CHECK(rep.status != RunStatus::kStepFailure);
    if (theta <= 0.01) CHECK(rep.status == RunStatus::kConverged);
    for (size_t i = 1; i < rep.trace.size(); ++i) {
      CHECK(rep.trace[i].h >= cfg.h_min);
      CHECK(rep.trace[i].h <= cfg.h_max);
    }
  }
}

TEST_CASE("adaptive input checks") {
  const Setup st;
  AdaptiveConfig cfg;
  PhaseState off = st.s0;
  off.p(0) += 1.0;
  off.p(5) = 1.0;
  CHECK_THROWS_AS(adaptive_optimize(st.sphere, st.ham, off, cfg, st.f_min),
                  InvalidInput);
  cfg.max_iterations = -1;
  CHECK_THROWS_AS(adaptive_optimize(st.sphere, st.ham, st.s0, cfg, st.f_min),
                  InvalidInput);
}
