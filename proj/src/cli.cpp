#include "confsym/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "confsym/adaptive.hpp"
#include "confsym/errors.hpp"
#include "confsym/gd.hpp"
#include "confsym/model.hpp"
#include "confsym/verify.hpp"

namespace confsym::cli {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string shortest(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw InvalidInput("invalid --" + field + ": " + why);
}

int exit_for(RunStatus status) {
  switch (status) {
    case RunStatus::kConverged: return kExitConverged;
    case RunStatus::kMaxIterations: return kExitMaxIterations;
    case RunStatus::kStepFailure: return kExitStepFailure;
  }
  return kExitStepFailure;
}

void write_config_header(std::ostream& out, const std::string& command,
                         const ExperimentConfig& cfg) {
  out << "# confsym " << command << '\n'
      << "# method=" << cfg.method << '\n'
      << "# dim=" << cfg.dim << '\n'
      << "# lmin=" << shortest(cfg.lambda_min) << '\n'
      << "# lmax=" << shortest(cfg.lambda_max) << '\n'
      << "# seed=" << cfg.seed << '\n'
      << "# h=" << shortest(cfg.h) << '\n'
      << "# gamma=" << shortest(cfg.gamma) << '\n'
      << "# tol=" << shortest(cfg.tol) << '\n'
      << "# max-iterations=" << cfg.max_iterations << '\n'
      << "# r=" << shortest(cfg.r) << '\n'
      << "# theta=" << shortest(cfg.theta) << '\n'
      << "# h0=" << shortest(cfg.resolved_h0()) << '\n'
      << "# h-min=" << shortest(cfg.h_min) << '\n'
      << "# h-max=" << shortest(cfg.h_max) << '\n'
      << "# newton-tol=" << shortest(cfg.newton_tol) << '\n'
      << "# newton-max-iter=" << cfg.newton_max_iter << '\n';
}

void write_trace(std::ostream& out, const RunReport& report) {
  out << "iter,t,f,H,g_resid,tangency_resid,h\n";
  for (const auto& r : report.trace) {
    out << r.iter << ',' << num(r.t) << ',' << num(r.f) << ',' << num(r.H)
        << ',' << num(r.g_resid) << ',' << num(r.tangency_resid) << ','
        << num(r.h) << '\n';
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  require(method == "sm1" || method == "sm2" || method == "adaptive" ||
              method == "gd",
          "method", "expected one of sm1, sm2, adaptive, gd");
  require(dim >= 2, "dim", "must be at least 2");
  require(std::isfinite(lambda_min) && std::isfinite(lambda_max) &&
              lambda_min < lambda_max,
          "lmin", "need lmin < lmax");
  require(std::isfinite(h) && (method == "gd" ? h >= 0.0 : h > 0.0), "h",
          method == "gd" ? "must be non-negative" : "must be positive");
  require(std::isfinite(gamma) && gamma >= 0.0, "gamma",
          "must be non-negative");
  require(tol > 0.0, "tol", "must be positive");
  require(max_iterations >= 0, "max-iterations", "must be non-negative");
  require(std::isfinite(r) && r > 0.0, "r", "must be positive");
  require(theta >= 0.0 && theta <= 2.0, "theta", "must lie in [0, 2]");
  require(h_min > 0.0, "h-min", "must be positive");
  require(std::isfinite(h_max) && h_min <= h_max, "h-max",
          "must be >= h-min");
  const double h0v = resolved_h0();
  require(std::isfinite(h0v) && h_min <= h0v && h0v <= h_max, "h0",
          "must lie in [h-min, h-max]");
  require(newton_tol > 0.0, "newton-tol", "must be positive");
  require(newton_max_iter > 0, "newton-max-iter", "must be positive");
}

double ExperimentConfig::resolved_h0() const {
  if (!std::isnan(h0)) return h0;
  return AdaptiveConfig::default_h0(lambda_max - lambda_min);
}

void VerifyConfig::validate() const {
  require(dim >= 2, "dim", "must be at least 2");
  require(states > 0, "states", "must be positive");
  require(samples > 0, "samples", "must be positive");
  require(epsilon > 0.0, "epsilon", "must be positive");
  require(newton_tol > 0.0, "newton-tol", "must be positive");
  require(inject_fault == "none" || inject_fault == "gamma-sign",
          "inject-fault", "expected none or gamma-sign");
}

int cmd_optimize(const ExperimentConfig& cfg, std::ostream& out,
                 std::ostream& err) {
  try {
    cfg.validate();
  } catch (const InvalidInput& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  }
  const SpectrumRange range(cfg.lambda_min, cfg.lambda_max);
  const QuadraticProblem prob = generate_matrix(range, cfg.dim, cfg.seed);
  const double f_ref = eigen_oracle(prob).min_value;
  const PhaseState s0 = default_initial_state(cfg.dim);

  RunReport report;
  if (cfg.method == "gd") {
    GdConfig gcfg;
    gcfg.h = cfg.h;
    gcfg.tol = cfg.tol;
    gcfg.max_iterations = cfg.max_iterations;
    report = gd_optimize(prob, s0.q, gcfg, f_ref);
  } else {
    const SphereConstraint sphere(cfg.dim);
    const SeparableHamiltonian ham = make_hamiltonian(prob);
    if (cfg.method == "adaptive") {
      AdaptiveConfig acfg;
      acfg.r = cfg.r;
      acfg.theta = cfg.theta;
      acfg.h0 = cfg.resolved_h0();
      acfg.h_min = cfg.h_min;
      acfg.h_max = cfg.h_max;
      acfg.gamma = cfg.gamma;
      acfg.newton_tol = cfg.newton_tol;
      acfg.newton_max_iter = cfg.newton_max_iter;
      acfg.tol = cfg.tol;
      acfg.max_iterations = cfg.max_iterations;
      report = adaptive_optimize(sphere, ham, s0, acfg, f_ref);
    } else {
      const IntegratorConfig icfg{cfg.h, cfg.gamma, cfg.newton_tol,
                                  cfg.newton_max_iter};
      report = optimize(sphere, ham, s0, icfg,
                        cfg.method == "sm1" ? Method::kSm1 : Method::kSm2,
                        StoppingRule::oracle_gap(f_ref, cfg.tol,
                                                 cfg.max_iterations));
    }
  }

  write_config_header(out, "optimize", cfg);
  out << "# f_ref=" << num(f_ref) << '\n'
      << "# status=" << to_string(report.status) << '\n'
      << "# iterations=" << report.iterations << '\n';
  write_trace(out, report);
  if (report.status == RunStatus::kStepFailure) {
    err << "step failure: " << report.failure << '\n';
  }
  return exit_for(report.status);
}

int cmd_table(std::uint64_t seed, long max_iterations, std::ostream& out,
              std::ostream& err) {
  if (max_iterations < 0) {
    err << "invalid --max-iterations: must be non-negative\n";
    return kExitInvalid;
  }
  constexpr int kDim = 10;
  const PhaseState s0 = default_initial_state(kDim);
  out << "# confsym table\n"
      << "# seed=" << seed << '\n'
      << "# dim=" << kDim << '\n'
      << "# max-iterations=" << max_iterations << '\n'
      << "lambda_min,lambda_max,h_l,h_opt,status,iterations\n";
  for (const auto& range : reference_spectrum_ranges()) {
    const std::string h_opt = optimal_stepsize_decimal(range);
    GdConfig gcfg;
    gcfg.h = std::stod(h_opt);
    gcfg.max_iterations = max_iterations;
    const GdRunReport run =
        gd_optimize(generate_matrix(range, kDim, seed), s0.q, gcfg);
    out << shortest(range.lambda_min) << ',' << shortest(range.lambda_max)
        << ',' << limiting_stepsize_decimal(range, 8) << ',' << h_opt << ','
        << to_string(run.status) << ',' << run.iterations << '\n';
  }
  return kExitConverged;
}

int cmd_gd_analysis(const ExperimentConfig& cfg,
                    const std::vector<double>& h_list, std::ostream& out,
                    std::ostream& err) {
  ExperimentConfig c = cfg;
  c.method = "gd";
  try {
    c.validate();
    require(!h_list.empty(), "h-list", "needs at least one stepsize");
    for (double h : h_list) {
      require(std::isfinite(h) && h >= 0.0, "h-list",
              "stepsizes must be non-negative");
    }
  } catch (const InvalidInput& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  }
  const QuadraticProblem prob = generate_matrix(
      SpectrumRange(c.lambda_min, c.lambda_max), c.dim, c.seed);
  const double f_ref = eigen_oracle(prob).min_value;
  const Vector q0 = default_initial_state(c.dim).q;

  write_config_header(out, "gd-analysis", c);
  out << "# h-list=";
  for (size_t i = 0; i < h_list.size(); ++i) {
    out << (i ? "," : "") << shortest(h_list[i]);
  }
  out << "\n# f_ref=" << num(f_ref) << '\n' << "h,iter,rho,f\n";
  for (double h : h_list) {
    GdConfig gcfg;
    gcfg.h = h;
    gcfg.tol = c.tol;
    gcfg.max_iterations = c.max_iterations;
    gcfg.record_analysis = true;
    const GdRunReport run = gd_optimize(prob, q0, gcfg, f_ref);
    for (const auto& a : run.analysis) {
      out << shortest(h) << ',' << a.iteration << ',' << num(a.rho) << ','
          << num(a.f_value) << '\n';
    }
  }
  return kExitConverged;
}

int cmd_verify(const VerifyConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
  } catch (const InvalidInput& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  }
  constexpr double kConformalityBound = 1e-4;
  const double symmetry_bound = 10.0 * cfg.newton_tol;

  const QuadraticProblem prob =
      generate_matrix(SpectrumRange(-1.0, 1.0), cfg.dim, cfg.seed);
  const SphereConstraint sphere(cfg.dim);
  const SeparableHamiltonian ham = make_hamiltonian(prob);
  std::vector<PhaseState> states{default_initial_state(cfg.dim)};
  for (int i = 1; i < cfg.states; ++i) {
    states.push_back(random_sphere_state(cfg.dim, cfg.seed * 1000 + i));
  }
  const bool flip = cfg.inject_fault == "gamma-sign";
  std::vector<std::string> failed;

  out << "# confsym verify\n# seed=" << cfg.seed << "\n# dim=" << cfg.dim
      << "\n# states=" << cfg.states << "\n# samples=" << cfg.samples
      << "\n# epsilon=" << shortest(cfg.epsilon)
      << "\n# newton-tol=" << shortest(cfg.newton_tol)
      << "\n# inject-fault=" << cfg.inject_fault << "\n";

  out << "\n[conformality] bound=" << num(kConformalityBound) << '\n'
      << "method,gamma,h,factor_expected,max_residual,samples,fd_epsilon\n";
  bool conformal_ok = true;
  struct Case {
    Method method;
    double gamma;
    double h;
  };
  std::vector<Case> cases{{Method::kRattle, 0.0, 0.05},
                          {Method::kRattle, 0.0, 0.1}};
  for (Method m : {Method::kSm1, Method::kSm2}) {
    for (double gamma : {0.5, 1.0, 2.0}) {
      for (double h : {0.05, 0.1}) cases.push_back({m, gamma, h});
    }
  }
  for (const auto& c : cases) {
    const IntegratorConfig icfg{c.h, c.gamma, cfg.newton_tol, 50};
    IntegratorConfig stepped = icfg;
    if (flip) stepped.gamma = -icfg.gamma;
    const StepMap step = make_step_map(c.method, sphere, ham, stepped);
    double worst = 0.0;
    ConformalityReport rep;
    for (size_t i = 0; i < states.size(); ++i) {
      rep = conformality_check(
          step, sphere, ham, states[i], conformal_factor(c.method, icfg),
          {cfg.samples, cfg.epsilon, cfg.seed + i});
      worst = std::max(worst, rep.max_residual);
    }
    conformal_ok = conformal_ok && worst <= kConformalityBound;
    out << to_string(c.method) << ',' << shortest(c.gamma) << ','
        << shortest(c.h) << ',' << num(rep.factor_expected) << ','
        << num(worst) << ',' << rep.samples * static_cast<int>(states.size())
        << ',' << shortest(rep.fd_epsilon) << '\n';
  }
  if (!conformal_ok) failed.push_back("conformality");

  out << "\n[order] horizon=1 gamma=1\n"
      << "method,slope,window_lo,window_hi,stepsizes,errors\n";
  bool order_ok = true;
  const std::vector<double> h_list{0.02, 0.01, 0.005, 0.0025};
  for (Method m : {Method::kSm1, Method::kSm2, Method::kRattle}) {
    const IntegratorConfig icfg{0.02, 1.0, cfg.newton_tol, 50};
    const double lo = m == Method::kSm1 ? 0.8 : 1.8;
    const double hi = m == Method::kSm1 ? 1.2 : 2.2;
    try {
      const OrderReport rep =
          measure_order(make_step_family(m, sphere, ham, icfg), states.front(),
                        1.0, h_list);
      const bool ok = rep.slope >= lo && rep.slope <= hi;
      order_ok = order_ok && ok;
      out << to_string(m) << ',' << num(rep.slope) << ',' << lo << ',' << hi
          << ',';
      for (size_t i = 0; i < rep.stepsizes.size(); ++i) {
        out << (i ? ";" : "") << shortest(rep.stepsizes[i]);
      }
      out << ',';
      for (size_t i = 0; i < rep.errors.size(); ++i) {
        out << (i ? ";" : "") << num(rep.errors[i]);
      }
      out << '\n';
    } catch (const Error& e) {
      order_ok = false;
      out << to_string(m) << ",nan," << lo << ',' << hi << ",,\n";
      err << "order " << to_string(m) << ": " << e.what() << '\n';
    }
  }
  if (!order_ok) failed.push_back("order");

  out << "\n[symmetry] bound=" << num(symmetry_bound) << " h=0.1 gamma=1\n"
      << "method,max_return_error,asserted\n";
  const IntegratorConfig scfg{0.1, 1.0, cfg.newton_tol, 50};
  double sm2_worst = 0.0;
  double sm1_worst = 0.0;
  for (const auto& s : states) {
    sm2_worst = std::max(sm2_worst, symmetry_check(Method::kSm2, sphere, ham, s, scfg));
    sm1_worst = std::max(sm1_worst, symmetry_check(Method::kSm1, sphere, ham, s, scfg));
  }
  out << "sm2," << num(sm2_worst) << ",yes\n"
      << "sm1," << num(sm1_worst) << ",no (asymmetric, negative control)\n";
  if (!(sm2_worst <= symmetry_bound)) failed.push_back("symmetry");

  if (failed.empty()) {
    out << "\nresult=pass\n";
    return kExitConverged;
  }
  std::string names;
  for (const auto& f : failed) names += (names.empty() ? "" : ",") + f;
  out << "\nresult=fail (" << names << ")\n";
  err << "verification failed: " << names << '\n';
  return kExitVerifyFailed;
}

namespace {

/// key=value lines; '#' starts a comment. Keys use the long flag names.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("invalid --config: cannot open " + path);
  std::map<std::string, std::string> values;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput("invalid --config: line " + std::to_string(lineno) +
                         " is not key=value");
    }
    std::string key = trim(line.substr(0, eq));
    for (auto& c : key) {
      if (c == '_') c = '-';
    }
    values[key] = trim(line.substr(eq + 1));
  }
  return values;
}

/// Fills options the command line left unset from the config file. Flags
/// take precedence over the file, the file over built-in defaults.
void apply_config_file(CLI::App& cmd, const std::string& path) {
  for (const auto& [key, value] : read_config_file(path)) {
    CLI::Option* opt = nullptr;
    try {
      opt = cmd.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw InvalidInput("invalid --config: unknown key '" + key + "'");
    }
    if (opt->count() > 0 || key == "config") continue;
    opt->clear();
    if (opt->get_items_expected_max() > 1) {
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) opt->add_result(item);
    } else {
      opt->add_result(value);
    }
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw InvalidInput("invalid --" + key + " in config file: " + e.what());
    }
  }
}

void add_experiment_options(CLI::App& cmd, ExperimentConfig& cfg) {
  cmd.add_option("--method", cfg.method, "sm1, sm2, adaptive or gd");
  cmd.add_option("--dim", cfg.dim, "Ambient dimension");
  cmd.add_option("--lmin", cfg.lambda_min, "Smallest eigenvalue of A");
  cmd.add_option("--lmax", cfg.lambda_max, "Largest eigenvalue of A");
  cmd.add_option("--seed", cfg.seed, "Matrix seed");
  cmd.add_option("--h", cfg.h, "Stepsize");
  cmd.add_option("--gamma", cfg.gamma, "Dissipation");
  cmd.add_option("--tol", cfg.tol, "Oracle-gap tolerance");
  cmd.add_option("--max-iterations", cfg.max_iterations, "Iteration budget");
  cmd.add_option("--r", cfg.r, "Adaptive: desired error");
  cmd.add_option("--theta", cfg.theta, "Adaptive: controller gain");
  cmd.add_option("--h0", cfg.h0, "Adaptive: initial stepsize");
  cmd.add_option("--h-min", cfg.h_min, "Adaptive: minimum stepsize");
  cmd.add_option("--h-max", cfg.h_max, "Adaptive: maximum stepsize");
  cmd.add_option("--newton-tol", cfg.newton_tol, "RATTLE Newton tolerance");
  cmd.add_option("--newton-max-iter", cfg.newton_max_iter,
                 "RATTLE Newton iteration cap");
}

/// Writes to --out when given, stdout otherwise.
int emit(const std::string& path, const std::string& text, int code) {
  if (path.empty()) {
    std::cout << text;
    return code;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "invalid --out: cannot write " << path << '\n';
    return kExitInvalid;
  }
  f << text;
  return code;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Conformal symplectic optimization on constraint manifolds"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  ExperimentConfig opt_cfg;
  std::string opt_out, opt_config;
  auto* optimize_cmd = app.add_subcommand("optimize", "Run one optimizer");
  add_experiment_options(*optimize_cmd, opt_cfg);
  optimize_cmd->add_option("--out", opt_out, "Trace CSV path");
  optimize_cmd->add_option("--config", opt_config, "key=value config file");

  std::uint64_t table_seed = 0;
  long table_max_iter = 100000;
  std::string table_out, table_config;
  auto* table_cmd =
      app.add_subcommand("table", "Limiting/practical GD stepsize table");
  table_cmd->add_option("--seed", table_seed, "Matrix seed");
  table_cmd->add_option("--max-iterations", table_max_iter, "GD budget");
  table_cmd->add_option("--out", table_out, "CSV path");
  table_cmd->add_option("--config", table_config, "key=value config file");

  ExperimentConfig gda_cfg;
  gda_cfg.method = "gd";
  std::vector<double> h_list;
  std::string gda_out, gda_config;
  auto* gda_cmd = app.add_subcommand("gd-analysis",
                                     "Spectral radius of the GD step Jacobian");
  add_experiment_options(*gda_cmd, gda_cfg);
  gda_cmd->add_option("--h-list", h_list, "Comma-separated stepsizes")
      ->delimiter(',');
  gda_cmd->add_option("--out", gda_out, "CSV path");
  gda_cmd->add_option("--config", gda_config, "key=value config file");

  VerifyConfig ver_cfg;
  std::string ver_out, ver_config;
  auto* verify_cmd =
      app.add_subcommand("verify", "Structure-preservation checks");
  verify_cmd->add_option("--seed", ver_cfg.seed, "Matrix/state seed");
  verify_cmd->add_option("--dim", ver_cfg.dim, "Ambient dimension");
  verify_cmd->add_option("--states", ver_cfg.states, "States per config");
  verify_cmd->add_option("--samples", ver_cfg.samples,
                         "Tangent pairs per state");
  verify_cmd->add_option("--epsilon", ver_cfg.epsilon,
                         "Finite-difference step");
  verify_cmd->add_option("--newton-tol", ver_cfg.newton_tol,
                         "RATTLE Newton tolerance");
  verify_cmd->add_option("--inject-fault", ver_cfg.inject_fault,
                         "none or gamma-sign");
  verify_cmd->add_option("--out", ver_out, "Report path");
  verify_cmd->add_option("--config", ver_config, "key=value config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    std::ostringstream out;
    if (optimize_cmd->parsed()) {
      if (!opt_config.empty()) apply_config_file(*optimize_cmd, opt_config);
      const int code = cmd_optimize(opt_cfg, out, std::cerr);
      return code == kExitInvalid ? code : emit(opt_out, out.str(), code);
    }
    if (table_cmd->parsed()) {
      if (!table_config.empty()) apply_config_file(*table_cmd, table_config);
      const int code = cmd_table(table_seed, table_max_iter, out, std::cerr);
      return code == kExitInvalid ? code : emit(table_out, out.str(), code);
    }
    if (gda_cmd->parsed()) {
      if (!gda_config.empty()) apply_config_file(*gda_cmd, gda_config);
      const int code = cmd_gd_analysis(gda_cfg, h_list, out, std::cerr);
      return code == kExitInvalid ? code : emit(gda_out, out.str(), code);
    }
    if (verify_cmd->parsed()) {
      if (!ver_config.empty()) apply_config_file(*verify_cmd, ver_config);
      const int code = cmd_verify(ver_cfg, out, std::cerr);
      return code == kExitInvalid ? code : emit(ver_out, out.str(), code);
    }
  } catch (const InvalidInput& e) {
    std::cerr << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace confsym::cli
