#include "confsym/gd.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "confsym/errors.hpp"
#include "confsym/geometry.hpp"

namespace confsym {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

constexpr double kUnitTol = 1e-10;

void check_unit(const Vector& q, const char* who) {
  if (std::abs(q.norm() - 1.0) > kUnitTol) {
    throw InvalidInput(std::string(who) + ": q must have unit norm");
  }
}

cpp_int pow10(long k) {
  cpp_int r = 1;
  for (long i = 0; i < k; ++i) r *= 10;
  return r;
}

/// The exact value of the shortest decimal string that round-trips x.
cpp_rational decimal_value(double x) {
  if (!std::isfinite(x)) throw InvalidInput("non-finite value");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  const std::string text(buf, res.ptr);

  bool negative = false;
  cpp_int mantissa = 0;
  long exponent = 0;
  bool after_point = false;
  size_t i = 0;
  if (i < text.size() && text[i] == '-') {
    negative = true;
    ++i;
  }
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.') {
      after_point = true;
    } else if (c == 'e' || c == 'E') {
      exponent += std::stol(text.substr(i + 1));
      break;
    } else {
      mantissa = mantissa * 10 + (c - '0');
      if (after_point) --exponent;
    }
  }
  cpp_rational value = exponent >= 0
                           ? cpp_rational(mantissa * pow10(exponent))
                           : cpp_rational(mantissa, pow10(-exponent));
  return negative ? cpp_rational(-value) : value;
}

cpp_rational exact_limiting_stepsize(const SpectrumRange& range) {
  return cpp_rational(1) /
         (decimal_value(range.lambda_max) - decimal_value(range.lambda_min));
}

std::string optimal_stepsize_text(const cpp_rational& h_l) {
  if (h_l <= 0) throw InvalidInput("optimal_stepsize: h_l must be positive");
  const cpp_int num = boost::multiprecision::numerator(h_l);
  const cpp_int den = boost::multiprecision::denominator(h_l);
  if (h_l >= 1) {
    const cpp_int whole = num / den;
    return cpp_int(whole - 1).str() + ".9";
  }
  // first k with 10^k h_l >= 1
  long k = 0;
  cpp_int scaled = num;
  do {
    scaled *= 10;
    ++k;
  } while (scaled < den);
  const cpp_int digit = scaled / den;  // 1..9
  const bool exact = scaled % den == 0;
  std::string out = "0." + std::string(static_cast<size_t>(k - 1), '0');
  if (exact) {
    out += cpp_int(digit - 1).str();
    out += '9';
  } else {
    out += digit.str();
  }
  return out;
}

double parse_double(const std::string& text) { return std::stod(text); }

}  // namespace

void GdConfig::validate() const {
  if (!(h >= 0.0) || !std::isfinite(h)) {
    throw InvalidInput("gd: h must be finite and non-negative");
  }
  if (!(tol > 0.0)) throw InvalidInput("gd: tol must be positive");
  if (max_iterations < 0) {
    throw InvalidInput("gd: max_iterations must be non-negative");
  }
}

Vector gd_update_map(const QuadraticProblem& prob, const Vector& q,
                     double h) {
  if (q.size() != prob.dim()) throw InvalidInput("gd: dimension mismatch");
  const Vector grad = prob.gradient(q);
  const Vector v = q - h * (grad - q * q.dot(grad));
  const double norm = v.norm();
  if (!(norm > 1e-300) || !std::isfinite(norm)) {
    throw StepFailure("gd_step: update vector vanished", norm);
  }
  return v / norm;
}

Vector gd_step(const QuadraticProblem& prob, const Vector& q, double h) {
  if (q.size() != prob.dim()) throw InvalidInput("gd_step: dimension mismatch");
  check_unit(q, "gd_step");
  return gd_update_map(prob, q, h);
}

Matrix gd_jacobian(const QuadraticProblem& prob, const Vector& q, double h) {
  if (q.size() != prob.dim()) {
    throw InvalidInput("gd_jacobian: dimension mismatch");
  }
  check_unit(q, "gd_jacobian");
  const Matrix& A = prob.matrix();
  const auto d = prob.dim();
  const Vector Aq = A * q;
  const Vector A2q = A * Aq;
  const double c = q.dot(Aq);
  const double k = 1.0 + 2.0 * h * c;
  const Vector v = k * q - 2.0 * h * Aq;
  const double vn = v.norm();
  if (!(vn > 0.0)) throw DegenerateConstraint("gd_jacobian: |v| = 0");
  const double vn3 = vn * vn * vn;
  const double h2 = h * h;
  const double h3 = h2 * h;

  Matrix first = k * Matrix::Identity(d, d) - 2.0 * h * A +
                 4.0 * h * q * Aq.transpose();
  Matrix second = k * k * k * q * q.transpose() -
                  2.0 * h * k * k * Aq * q.transpose() -
                  8.0 * c * k * h2 * q * Aq.transpose();
  Matrix third = 4.0 * k * h2 * q * A2q.transpose() +
                 16.0 * c * h3 * Aq * Aq.transpose() -
                 8.0 * h3 * Aq * A2q.transpose();
  return first / vn - second / vn3 - third / vn3;
}

double spectral_radius(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() != m.cols()) {
    throw InvalidInput("spectral_radius: matrix must be square");
  }
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw InvalidInput("spectral_radius: eigensolver failed");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double limiting_stepsize(const SpectrumRange& range) {
  return 1.0 / range.width();
}

std::string limiting_stepsize_decimal(const SpectrumRange& range,
                                      int significant_digits) {
  if (significant_digits <= 0) {
    throw InvalidInput("limiting_stepsize_decimal: need at least one digit");
  }
  const cpp_rational h_l = exact_limiting_stepsize(range);
  const cpp_int den = boost::multiprecision::denominator(h_l);
  cpp_int rem = boost::multiprecision::numerator(h_l);
  const cpp_int whole = rem / den;
  rem %= den;

  std::string out = whole.str();
  int significant = whole == 0 ? 0 : static_cast<int>(out.size());
  std::string frac;
  while (rem != 0 && significant < significant_digits) {
    rem *= 10;
    const cpp_int digit = rem / den;
    rem %= den;
    frac += digit.str();
    if (significant > 0 || digit != 0) ++significant;
  }
  if (!frac.empty()) out += "." + frac;
  return out;
}

double optimal_stepsize(double h_l) {
  return parse_double(optimal_stepsize_decimal(h_l));
}

std::string optimal_stepsize_decimal(double h_l) {
  if (!(h_l > 0.0) || !std::isfinite(h_l)) {
    throw InvalidInput("optimal_stepsize: h_l must be positive and finite");
  }
  return optimal_stepsize_text(decimal_value(h_l));
}

std::string optimal_stepsize_decimal(const SpectrumRange& range) {
  return optimal_stepsize_text(exact_limiting_stepsize(range));
}

std::vector<SpectrumRange> reference_spectrum_ranges() {
  return {{-100, -10}, {-100, 100}, {-10, 1},  {-10, 100},
          {-1, 1},     {-1, 100},   {1, 10},   {1, 100},
          {-3, 8},     {-27, 58},   {-10.1, -9.9}};
}

GdRunReport gd_optimize(const QuadraticProblem& prob, const Vector& q0,
                        const GdConfig& cfg, double f_ref) {
  cfg.validate();
  if (q0.size() != prob.dim()) {
    throw InvalidInput("gd_optimize: dimension mismatch");
  }
  check_unit(q0, "gd_optimize");

  const SphereConstraint sphere(prob.dim());
  const SeparableHamiltonian ham = make_hamiltonian(prob);
  const PhaseState s0{q0, Vector::Zero(prob.dim())};

  GdRunReport report;
  auto analyse = [&](const Vector& q, long iter) {
    if (!cfg.record_analysis) return;
    report.analysis.push_back(
        {iter, spectral_radius(gd_jacobian(prob, q, cfg.h)), prob.value(q)});
  };
  analyse(q0, 0);
  long iter = 0;
  static_cast<RunReport&>(report) = detail::drive(
      sphere, ham, s0,
      StoppingRule::oracle_gap(f_ref, cfg.tol, cfg.max_iterations),
      [&](const PhaseState& s, double& h_used) {
        h_used = cfg.h;
        PhaseState next{gd_step(prob, s.q, cfg.h), s.p};
        analyse(next.q, ++iter);
        return next;
      });
  try {
    report.final_rho =
        spectral_radius(gd_jacobian(prob, report.final_state.q, cfg.h));
  } catch (const Error&) {
    report.final_rho = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

GdRunReport gd_optimize(const QuadraticProblem& prob, const Vector& q0,
                        const GdConfig& cfg) {
  return gd_optimize(prob, q0, cfg, eigen_oracle(prob).min_value);
}

}  // namespace confsym
