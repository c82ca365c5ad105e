#include <cmath>
#include <random>

#include <doctest.h>

#include "confsym/errors.hpp"
#include "confsym/gd.hpp"
#include "oracles.hpp"

using namespace confsym;

namespace {

QuadraticProblem diag2(double a, double b) {
  Matrix A = Matrix::Zero(2, 2);
  A(0, 0) = a;
  A(1, 1) = b;
  return QuadraticProblem(A);
}

}  // namespace

TEST_CASE("gd step examples") {
  const auto prob = diag2(1, -1);
  Vector q(2);
  q << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const Vector out = gd_step(prob, q, 0.25);
  CHECK(out(0) == doctest::Approx(1 / std::sqrt(10.0)).epsilon(1e-14));
  CHECK(out(1) == doctest::Approx(3 / std::sqrt(10.0)).epsilon(1e-14));
  CHECK((gd_step(prob, q, 0.0) - q).norm() <= 1e-15);

  const auto big = generate_matrix({-1, 1}, 10, 4);
  const auto oracle = eigen_oracle(big);
  CHECK((gd_step(big, oracle.minimizer, 0.3) - oracle.minimizer).norm() <= 1e-14);
}

TEST_CASE("gd steps stay on the sphere") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const QuadraticProblem prob(oracles::random_symmetric(8, rng, 3.0));
    const Vector q = oracles::random_unit(8, rng);
    CHECK(std::abs(gd_step(prob, q, 0.05).norm() - 1.0) <= 1e-14);
  }
}

TEST_CASE("gd step input checks") {
  const auto prob = diag2(1, -1);
  Vector q(2);
  q << 1.0, 1e-4;
  CHECK_THROWS_AS(gd_step(prob, q, 0.1), InvalidInput);
}

TEST_CASE("analytic Jacobian matches finite differences") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int d = 2 + static_cast<int>(rng() % 9);
    const QuadraticProblem prob(oracles::random_symmetric(d, rng, 5.0));
    const auto ev = Eigen::SelfAdjointEigenSolver<Matrix>(prob.matrix()).eigenvalues();
    const double width = ev.maxCoeff() - ev.minCoeff();
    std::uniform_real_distribution<double> frac(0.01, 0.49);
    const double h = frac(rng) / width;
    const Vector q = oracles::random_unit(d, rng);
    const Matrix analytic = gd_jacobian(prob, q, h);
    const Matrix fd = oracles::fd_jacobian4(
        [&](const Vector& x) { return gd_update_map(prob, x, h); }, q, 1e-4);
    const double rel = (analytic - fd).cwiseAbs().maxCoeff() /
                       std::max(1.0, fd.cwiseAbs().maxCoeff());
    worst = std::max(worst, rel);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("Jacobian special cases") {
  std::mt19937_64 rng(5);
  const QuadraticProblem zero(Matrix::Zero(4, 4));
  const Vector q = oracles::random_unit(4, rng);
  const Matrix expected = Matrix::Identity(4, 4) - q * q.transpose();
  CHECK((gd_jacobian(zero, q, 0.3) - expected).cwiseAbs().maxCoeff() <= 1e-14);

  const auto iso = diag2(0.7, 0.7);
  Vector u(2);
  u << 0.6, 0.8;
  CHECK((gd_step(iso, u, 0.2) - u).norm() <= 1e-15);
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Matrix>(gd_jacobian(iso, u, 0.2)).eigenvalues();
  CHECK(std::min(std::abs(ev(0)), std::abs(ev(1))) <= 1e-14);
}

TEST_CASE("spectral radius") {
  CHECK(spectral_radius(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  Matrix D = Matrix::Zero(2, 2);
  D(0, 0) = 0.5;
  D(1, 1) = -0.9;
  CHECK(spectral_radius(D) == doctest::Approx(0.9));
  Matrix R(2, 2);
  R << std::cos(0.3), -std::sin(0.3), std::sin(0.3), std::cos(0.3);
  CHECK(spectral_radius(R) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(spectral_radius(Matrix::Zero(2, 3)), InvalidInput);
}

TEST_CASE("limiting stepsize") {
  CHECK(limiting_stepsize({-1, 1}) == 0.5);
  CHECK(limiting_stepsize({-100, -10}) == doctest::Approx(1.0 / 90));
  CHECK(limiting_stepsize({-10.1, -9.9}) == doctest::Approx(5.0).epsilon(1e-12));
  for (const auto& r : reference_spectrum_ranges()) {
    CHECK(limiting_stepsize(r) * r.width() == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(limiting_stepsize_decimal({-1, 1}) == "0.5");
  CHECK(limiting_stepsize_decimal({-10.1, -9.9}) == "5");
  CHECK(limiting_stepsize_decimal({-100, -10}, 4) == "0.01111");
}

TEST_CASE("practical stepsize rule") {
  CHECK(optimal_stepsize_decimal(0.5) == "0.49");
  CHECK(optimal_stepsize_decimal(3.4) == "2.9");
  CHECK(optimal_stepsize_decimal(0.090909) == "0.09");
  CHECK(optimal_stepsize_decimal(1.0 / 90) == "0.01");
  CHECK(optimal_stepsize_decimal(5.0) == "4.9");
  CHECK(optimal_stepsize_decimal(0.01176) == "0.01");
  CHECK(optimal_stepsize_decimal(1.0) == "0.9");
  CHECK(optimal_stepsize(0.5) == 0.49);
  CHECK(optimal_stepsize(3.4) == 2.9);
  CHECK_THROWS_AS(optimal_stepsize(0.0), InvalidInput);
  CHECK_THROWS_AS(optimal_stepsize(-1.0), InvalidInput);
  CHECK_THROWS_AS(optimal_stepsize(std::nan("")), InvalidInput);
  CHECK(optimal_stepsize_decimal(SpectrumRange(-10.1, -9.9)) == "4.9");
}

TEST_CASE("gd optimize") {
  const auto prob = generate_matrix({-1, 1}, 10, 0);
  const auto oracle = eigen_oracle(prob);
  const Vector q0 = default_initial_state(10).q;

  SUBCASE("start at the minimizer") {
    const auto rep = gd_optimize(prob, oracle.minimizer, {0.49});
    CHECK(rep.status == RunStatus::kConverged);
    CHECK(rep.iterations == 0);
  }

  SUBCASE("stable and unstable stepsizes") {
    GdConfig good{0.49};
    good.record_analysis = true;
    const auto ok = gd_optimize(prob, q0, good);
    CHECK(ok.status == RunStatus::kConverged);
    CHECK(ok.final_rho > 0.0);
    CHECK(ok.final_rho < 1.0);
    CHECK(ok.analysis.size() == ok.trace.size());
    CHECK(ok.analysis.back().f_value == ok.trace.back().f);

    GdConfig bad{0.5 * 1.01};
    bad.max_iterations = 20000;
    const auto no = gd_optimize(prob, q0, bad);
    CHECK(no.status == RunStatus::kMaxIterations);
  }

  SUBCASE("h = 0 stalls") {
    GdConfig frozen{0.0};
    frozen.max_iterations = 5;
    frozen.record_analysis = true;
    const auto rep = gd_optimize(prob, q0, frozen);
    CHECK(rep.status == RunStatus::kMaxIterations);
    for (const auto& a : rep.analysis) CHECK(a.rho == rep.analysis[0].rho);
  }

  SUBCASE("input checks") {
    CHECK_THROWS_AS(gd_optimize(prob, 2.0 * q0, {0.1}), InvalidInput);
    CHECK_THROWS_AS(gd_optimize(prob, q0, {-0.1}), InvalidInput);
  }
}
