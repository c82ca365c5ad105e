#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "confsym/adaptive.hpp"
#include "confsym/errors.hpp"
#include "confsym/gd.hpp"
#include "confsym/verify.hpp"

namespace py = pybind11;
using namespace confsym;

namespace {

Method parse_method(const std::string& name) {
  if (name == "rattle") return Method::kRattle;
  if (name == "sm1") return Method::kSm1;
  if (name == "sm2") return Method::kSm2;
  throw InvalidInput("method must be rattle, sm1 or sm2");
}

py::dict report_dict(const RunReport& rep) {
  std::vector<long> iter;
  std::vector<double> t, f, H, g, tan, h;
  for (const auto& r : rep.trace) {
    iter.push_back(r.iter);
    t.push_back(r.t);
    f.push_back(r.f);
    H.push_back(r.H);
    g.push_back(r.g_resid);
    tan.push_back(r.tangency_resid);
    h.push_back(r.h);
  }
  py::dict out;
  out["status"] = std::string(to_string(rep.status));
  out["iterations"] = rep.iterations;
  out["q"] = rep.final_state.q;
  out["p"] = rep.final_state.p;
  out["failure"] = rep.failure;
  out["iter"] = iter;
  out["t"] = t;
  out["f"] = f;
  out["H"] = H;
  out["g_resid"] = g;
  out["tangency_resid"] = tan;
  out["h"] = h;
  return out;
}

/// A quadratic problem on the unit sphere with unit mass.
struct SphereProblem {
  QuadraticProblem prob;
  SphereConstraint sphere;
  SeparableHamiltonian ham;

  explicit SphereProblem(const Matrix& A)
      : prob(A), sphere(static_cast<int>(A.rows())), ham(make_hamiltonian(prob)) {}
};

}  // namespace

PYBIND11_MODULE(_confsym, m) {
  m.doc() = "Conformal symplectic optimization on the unit sphere";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
  py::register_exception<DegenerateConstraint>(m, "DegenerateConstraint", base.ptr());
  py::register_exception<StepFailure>(m, "StepFailure", base.ptr());

  m.def("generate_matrix",
        [](double lmin, double lmax, int dim, std::uint64_t seed) {
          return generate_matrix({lmin, lmax}, dim, seed).matrix();
        },
        py::arg("lambda_min"), py::arg("lambda_max"), py::arg("dim") = 10,
        py::arg("seed") = 0);
  m.def("eigen_oracle",
        [](const Matrix& A) {
          const auto o = eigen_oracle(QuadraticProblem(A));
          return py::make_tuple(o.min_value, o.minimizer);
        },
        py::arg("A"), "(min value, minimizer) of q^T A q over the unit sphere");
  m.def("default_initial_state",
        [](int dim) {
          const auto s = default_initial_state(dim);
          return py::make_tuple(s.q, s.p);
        },
        py::arg("dim") = 10);
  m.def("random_sphere_state",
        [](int dim, std::uint64_t seed, double norm) {
          const auto s = random_sphere_state(dim, seed, norm);
          return py::make_tuple(s.q, s.p);
        },
        py::arg("dim"), py::arg("seed"), py::arg("momentum_norm") = 1.0);

  m.def("step",
        [](const Matrix& A, const Vector& q, const Vector& p, double h,
           double gamma, const std::string& method, double newton_tol) {
          const SphereProblem sp(A);
          const IntegratorConfig cfg{h, gamma, newton_tol, 50};
          const auto r = integrator_step(parse_method(method), sp.sphere, sp.ham,
                                         {q, p}, cfg);
          return py::make_tuple(r.state.q, r.state.p);
        },
        py::arg("A"), py::arg("q"), py::arg("p"), py::arg("h") = 0.1,
        py::arg("gamma") = 1.0, py::arg("method") = "sm1",
        py::arg("newton_tol") = 1e-12);

  m.def("optimize",
        [](const Matrix& A, const Vector& q0, const Vector& p0, double h,
           double gamma, const std::string& method, double tol,
           long max_iterations) {
          const SphereProblem sp(A);
          const double f_min = eigen_oracle(sp.prob).min_value;
          return report_dict(optimize(
              sp.sphere, sp.ham, {q0, p0}, {h, gamma}, parse_method(method),
              StoppingRule::oracle_gap(f_min, tol, max_iterations)));
        },
        py::arg("A"), py::arg("q0"), py::arg("p0"), py::arg("h") = 0.1,
        py::arg("gamma") = 1.0, py::arg("method") = "sm1", py::arg("tol") = 1e-6,
        py::arg("max_iterations") = 100000);

  m.def("adaptive_optimize",
        [](const Matrix& A, const Vector& q0, const Vector& p0, double h0,
           double r, double theta, double gamma, double tol,
           long max_iterations) {
          const SphereProblem sp(A);
          AdaptiveConfig cfg;
          cfg.h0 = h0;
          cfg.r = r;
          cfg.theta = theta;
          cfg.gamma = gamma;
          cfg.tol = tol;
          cfg.max_iterations = max_iterations;
          return report_dict(adaptive_optimize(sp.sphere, sp.ham, {q0, p0}, cfg,
                                               eigen_oracle(sp.prob).min_value));
        },
        py::arg("A"), py::arg("q0"), py::arg("p0"), py::arg("h0") = 0.1,
        py::arg("r") = 0.06, py::arg("theta") = 0.001, py::arg("gamma") = 1.0,
        py::arg("tol") = 1e-6, py::arg("max_iterations") = 100000);

  m.def("gd_step",
        [](const Matrix& A, const Vector& q, double h) {
          return gd_step(QuadraticProblem(A), q, h);
        },
        py::arg("A"), py::arg("q"), py::arg("h"));
  m.def("gd_jacobian",
        [](const Matrix& A, const Vector& q, double h) {
          return gd_jacobian(QuadraticProblem(A), q, h);
        },
        py::arg("A"), py::arg("q"), py::arg("h"));
  m.def("gd_optimize",
        [](const Matrix& A, const Vector& q0, double h, double tol,
           long max_iterations) {
          GdConfig cfg{h, tol, max_iterations};
          const auto rep = gd_optimize(QuadraticProblem(A), q0, cfg);
          py::dict out = report_dict(rep);
          out["final_rho"] = rep.final_rho;
          return out;
        },
        py::arg("A"), py::arg("q0"), py::arg("h"), py::arg("tol") = 1e-6,
        py::arg("max_iterations") = 100000);
  m.def("spectral_radius", &spectral_radius, py::arg("M"));
  m.def("limiting_stepsize",
        [](double lmin, double lmax) { return limiting_stepsize({lmin, lmax}); },
        py::arg("lambda_min"), py::arg("lambda_max"));
  m.def("optimal_stepsize",
        [](double lmin, double lmax) {
          return optimal_stepsize_decimal(SpectrumRange(lmin, lmax));
        },
        py::arg("lambda_min"), py::arg("lambda_max"),
        "Practical GD stepsize as an exact decimal string");
  m.def("reference_spectrum_ranges", [] {
    std::vector<std::pair<double, double>> out;
    for (const auto& r : reference_spectrum_ranges()) {
      out.emplace_back(r.lambda_min, r.lambda_max);
    }
    return out;
  });

  m.def("conformality_residual",
        [](const Matrix& A, const Vector& q, const Vector& p, double h,
           double gamma, const std::string& method, int samples,
           std::uint64_t seed) {
          const SphereProblem sp(A);
          return conformality_check(parse_method(method), sp.sphere, sp.ham, {q, p},
                                    {h, gamma}, {samples, 1e-5, seed})
              .max_residual;
        },
        py::arg("A"), py::arg("q"), py::arg("p"), py::arg("h") = 0.1,
        py::arg("gamma") = 1.0, py::arg("method") = "sm1", py::arg("samples") = 20,
        py::arg("seed") = 0);
  m.def("symmetry_error",
        [](const Matrix& A, const Vector& q, const Vector& p, double h,
           double gamma, const std::string& method) {
          const SphereProblem sp(A);
          return symmetry_check(parse_method(method), sp.sphere, sp.ham, {q, p},
                                {h, gamma});
        },
        py::arg("A"), py::arg("q"), py::arg("p"), py::arg("h") = 0.1,
        py::arg("gamma") = 1.0, py::arg("method") = "sm2");
}
