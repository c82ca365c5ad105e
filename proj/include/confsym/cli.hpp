#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace confsym::cli {

enum ExitCode : int {
  kExitConverged = 0,
  kExitInvalid = 1,
  kExitMaxIterations = 2,
  kExitStepFailure = 3,
  kExitVerifyFailed = 4,
};

struct ExperimentConfig {
  std::string method = "sm1";  // sm1 | sm2 | adaptive | gd
  int dim = 10;
  double lambda_min = -1.0;
  double lambda_max = 1.0;
  std::uint64_t seed = 0;
  double h = 0.1;
  double gamma = 1.0;
  double tol = 1e-6;
  long max_iterations = 100000;
  double r = 0.06;
  double theta = 0.001;
  /// NaN selects 0.1 or 0.09 from the spectral width.
  double h0 = std::numeric_limits<double>::quiet_NaN();
  double h_min = 1e-6;
  double h_max = 1.0;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;

  /// Throws InvalidInput naming the offending flag.
  void validate() const;
  double resolved_h0() const;
};

struct VerifyConfig {
  std::uint64_t seed = 0;
  int dim = 10;
  int states = 5;    // random phase-manifold states per conformality config
  int samples = 20;  // tangent pairs per state
  double epsilon = 1e-5;
  double newton_tol = 1e-12;
  /// "none" or "gamma-sign": integrate with e^{+gamma h} while checking
  /// against e^{-gamma h}, to exercise the failure path.
  std::string inject_fault = "none";

  void validate() const;
};

/// Runs one optimizer and writes the trace CSV. Returns 0 on convergence, 2
/// when the iteration budget ran out, 3 on a step failure, 1 on bad input.
int cmd_optimize(const ExperimentConfig& cfg, std::ostream& out,
                 std::ostream& err);

/// Limiting and practical GD stepsizes for the reference spectral ranges,
/// plus a GD run at the practical stepsize on a seeded matrix.
int cmd_table(std::uint64_t seed, long max_iterations, std::ostream& out,
              std::ostream& err);

/// Per-iteration rho(DF(q_n)) and f(q_n) of GD for each stepsize.
int cmd_gd_analysis(const ExperimentConfig& cfg,
                    const std::vector<double>& h_list, std::ostream& out,
                    std::ostream& err);

/// Conformality, convergence order and symmetry checks. Returns 0 when every
/// bound holds, 4 naming the failing checks otherwise.
int cmd_verify(const VerifyConfig& cfg, std::ostream& out, std::ostream& err);

/// Entry point used by the executable.
int run(int argc, char** argv);

}  // namespace confsym::cli
