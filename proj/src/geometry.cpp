#include "confsym/geometry.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "confsym/errors.hpp"

namespace confsym {

namespace {

void check_state_dims(const ConstraintManifold& man,
                      const SeparableHamiltonian& ham, const PhaseState& s) {
  const auto n = man.ambient_dim();
  if (ham.dim() != n || s.q.size() != n || s.p.size() != n) {
    throw InvalidInput("dimension mismatch: manifold n=" + std::to_string(n) +
                       ", hamiltonian n=" + std::to_string(ham.dim()) +
                       ", |q|=" + std::to_string(s.q.size()) +
                       ", |p|=" + std::to_string(s.p.size()));
  }
}

}  // namespace

Vector ConstraintManifold::project_position(const Vector& q) const {
  const Matrix G0 = jacobian(q);
  Vector y = Vector::Zero(constraint_dim());
  Vector x = q;
  for (int it = 0; it < 50; ++it) {
    const Vector r = value(x);
    if (r.lpNorm<Eigen::Infinity>() <= 1e-15) break;
    Eigen::FullPivLU<Matrix> lu(jacobian(x) * G0.transpose());
    if (!lu.isInvertible()) {
      throw DegenerateConstraint("project_position: singular G G^T");
    }
    const Vector dy = lu.solve(r);
    y -= dy;
    x = q + G0.transpose() * y;
    if (dy.lpNorm<Eigen::Infinity>() <= 1e-16) break;
  }
  return x;
}

SphereConstraint::SphereConstraint(int dim) : dim_(dim) {
  if (dim < 2) throw InvalidInput("sphere: dim must be at least 2");
}

Vector SphereConstraint::value(const Vector& q) const {
  Vector g(1);
  g(0) = q.squaredNorm() - 1.0;
  return g;
}

Matrix SphereConstraint::jacobian(const Vector& q) const {
  return 2.0 * q.transpose();
}

Matrix SphereConstraint::constraint_hessian(const Vector& /*q*/,
                                            const Vector& lambda) const {
  return 2.0 * lambda(0) * Matrix::Identity(dim_, dim_);
}

Vector SphereConstraint::project_position(const Vector& q) const {
  const double norm = q.norm();
  if (norm == 0.0) {
    throw DegenerateConstraint("sphere: cannot project the origin");
  }
  return q / norm;
}

FunctionConstraint::FunctionConstraint(int ambient_dim, int constraint_dim,
                                       ValueFn g, JacobianFn G,
                                       HessianFn hessian)
    : n_(ambient_dim),
      m_(constraint_dim),
      g_(std::move(g)),
      G_(std::move(G)),
      hessian_(std::move(hessian)) {
  if (m_ <= 0 || n_ <= m_) {
    throw InvalidInput("constraint: need 0 < m < n");
  }
}

Residuals residuals(const ConstraintManifold& man,
                    const SeparableHamiltonian& ham, const PhaseState& s) {
  check_state_dims(man, ham, s);
  return {man.value(s.q), man.jacobian(s.q) * ham.velocity(s.p)};
}

double primary_residual(const Residuals& r) {
  return r.primary.lpNorm<Eigen::Infinity>();
}

double hidden_residual(const Residuals& r) {
  return r.hidden.lpNorm<Eigen::Infinity>();
}

bool is_consistent(const ConstraintManifold& man,
                   const SeparableHamiltonian& ham, const PhaseState& s,
                   double tol) {
  const auto r = residuals(man, ham, s);
  return primary_residual(r) <= tol && hidden_residual(r) <= tol;
}

Matrix tangent_constraint_block(const ConstraintManifold& man,
                                const SeparableHamiltonian& ham,
                                const PhaseState& s) {
  check_state_dims(man, ham, s);
  const int n = man.ambient_dim();
  const int m = man.constraint_dim();
  const Matrix G = man.jacobian(s.q);
  const Vector v = ham.velocity(s.p);

  Matrix block = Matrix::Zero(2 * m, 2 * n);
  block.topLeftCorner(m, n) = G;
  for (int i = 0; i < m; ++i) {
    // d/dq (grad g_i(q) . v) = Hess g_i(q) v
    const Vector unit = Vector::Unit(m, i);
    block.block(m + i, 0, 1, n) =
        (man.constraint_hessian(s.q, unit) * v).transpose();
  }
  block.bottomRightCorner(m, n) = G * ham.inverse_mass();
  return block;
}

std::vector<Vector> tangent_basis(const ConstraintManifold& man,
                                  const SeparableHamiltonian& ham,
                                  const PhaseState& s) {
  if (!is_consistent(man, ham, s, kConsistencyTol)) {
    throw InvalidInput("tangent_basis: state is not on the phase manifold");
  }
  const Matrix block = tangent_constraint_block(man, ham, s);
  const auto rows = block.rows();
  const auto cols = block.cols();

  Eigen::ColPivHouseholderQR<Matrix> qr(block.transpose());
  if (qr.rank() < rows) {
    throw DegenerateConstraint("tangent_basis: constraint block is rank " +
                               std::to_string(qr.rank()) + " < " +
                               std::to_string(rows));
  }
  const Matrix Q = qr.householderQ();
  std::vector<Vector> basis;
  basis.reserve(static_cast<size_t>(cols - rows));
  for (auto j = rows; j < cols; ++j) basis.emplace_back(Q.col(j));
  return basis;
}

Vector project_momentum(const ConstraintManifold& man,
                        const SeparableHamiltonian& ham, const Vector& q,
                        const Vector& p) {
  const Matrix G = man.jacobian(q);
  const Matrix GMinv = G * ham.inverse_mass();
  Eigen::FullPivLU<Matrix> lu(GMinv * G.transpose());
  if (!lu.isInvertible()) {
    throw DegenerateConstraint("project_momentum: singular G M^-1 G^T");
  }
  return p - G.transpose() * lu.solve(GMinv * p);
}

PhaseState retract(const ConstraintManifold& man,
                   const SeparableHamiltonian& ham, const PhaseState& s,
                   const Vector& xi, double tau) {
  check_state_dims(man, ham, s);
  const int n = man.ambient_dim();
  if (xi.size() != 2 * n) {
    throw InvalidInput("retract: tangent vector must have length 2n");
  }
  const double off_tangent =
      (tangent_constraint_block(man, ham, s) * xi).lpNorm<Eigen::Infinity>();
  if (off_tangent > kConsistencyTol) {
    throw InvalidInput("retract: xi is not tangent (residual " +
                       std::to_string(off_tangent) + ")");
  }
  if (tau == 0.0) return s;

  PhaseState out;
  out.q = man.project_position(s.q + tau * xi.head(n));
  out.p = project_momentum(man, ham, out.q, s.p + tau * xi.tail(n));
  return out;
}

Vector concat(const PhaseState& s) {
  Vector x(s.q.size() + s.p.size());
  x << s.q, s.p;
  return x;
}

PhaseState split(const Vector& x) {
  const auto n = x.size() / 2;
  return {x.head(n), x.tail(n)};
}

}  // namespace confsym
