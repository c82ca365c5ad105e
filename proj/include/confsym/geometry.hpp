#pragma once

#include <functional>
#include <vector>

#include "confsym/hamiltonian.hpp"

namespace confsym {

/// Default tolerance for membership in the phase manifold.
inline constexpr double kConsistencyTol = 1e-8;

/// An embedded constraint manifold {q in R^n : g(q) = 0}, g : R^n -> R^m.
class ConstraintManifold {
 public:
  virtual ~ConstraintManifold() = default;

  virtual int ambient_dim() const = 0;
  virtual int constraint_dim() const = 0;

  /// g(q), an m-vector.
  virtual Vector value(const Vector& q) const = 0;
  /// G(q) = dg/dq, m x n.
  virtual Matrix jacobian(const Vector& q) const = 0;
  /// sum_i lambda_i * Hess g_i(q), n x n.
  virtual Matrix constraint_hessian(const Vector& q,
                                    const Vector& lambda) const = 0;

  /// Maps a point near the manifold back onto it. The default moves along
  /// the row space of G(q) with Newton iterations; subclasses with a
  /// closed-form projection override it.
  virtual Vector project_position(const Vector& q) const;
};

/// The unit sphere S^{d-1}: g(q) = q^T q - 1.
class SphereConstraint final : public ConstraintManifold {
 public:
  explicit SphereConstraint(int dim);

  int ambient_dim() const override { return dim_; }
  int constraint_dim() const override { return 1; }
  Vector value(const Vector& q) const override;
  Matrix jacobian(const Vector& q) const override;
  Matrix constraint_hessian(const Vector& q,
                            const Vector& lambda) const override;
  Vector project_position(const Vector& q) const override;

 private:
  int dim_;
};

/// Constraint manifold assembled from callables, for ad hoc geometries.
class FunctionConstraint final : public ConstraintManifold {
 public:
  using ValueFn = std::function<Vector(const Vector&)>;
  using JacobianFn = std::function<Matrix(const Vector&)>;
  using HessianFn = std::function<Matrix(const Vector&, const Vector&)>;

  FunctionConstraint(int ambient_dim, int constraint_dim, ValueFn g,
                     JacobianFn G, HessianFn hessian);

  int ambient_dim() const override { return n_; }
  int constraint_dim() const override { return m_; }
  Vector value(const Vector& q) const override { return g_(q); }
  Matrix jacobian(const Vector& q) const override { return G_(q); }
  Matrix constraint_hessian(const Vector& q,
                            const Vector& lambda) const override {
    return hessian_(q, lambda);
  }

 private:
  int n_;
  int m_;
  ValueFn g_;
  JacobianFn G_;
  HessianFn hessian_;
};

struct Residuals {
  Vector primary;  // g(q)
  Vector hidden;   // G(q) H_p(p)
};

Residuals residuals(const ConstraintManifold& man,
                    const SeparableHamiltonian& ham, const PhaseState& s);

/// Max-norm of both residual blocks.
double primary_residual(const Residuals& r);
double hidden_residual(const Residuals& r);

bool is_consistent(const ConstraintManifold& man,
                   const SeparableHamiltonian& ham, const PhaseState& s,
                   double tol = kConsistencyTol);

/// The 2m x 2n matrix whose null space is T_s M:
/// [ G(q)              0        ]
/// [ d/dq(G(q) H_p(p))  G(q) H_pp ]
Matrix tangent_constraint_block(const ConstraintManifold& man,
                                const SeparableHamiltonian& ham,
                                const PhaseState& s);

/// Orthonormal basis (2(n-m) vectors of length 2n) of the tangent space of
/// the phase manifold at s.
std::vector<Vector> tangent_basis(const ConstraintManifold& man,
                                  const SeparableHamiltonian& ham,
                                  const PhaseState& s);

/// Projects p onto {p : G(q) H_p(p) = 0}.
Vector project_momentum(const ConstraintManifold& man,
                        const SeparableHamiltonian& ham, const Vector& q,
                        const Vector& p);

/// First-order retraction along a tangent vector xi = (xi_q, xi_p) of length
/// 2n: the position is pulled back onto g = 0, the momentum projected onto
/// the hidden constraint at the new position. retract(s, xi, 0) == s.
PhaseState retract(const ConstraintManifold& man,
                   const SeparableHamiltonian& ham, const PhaseState& s,
                   const Vector& xi, double tau);

/// Stacks (q, p) into one 2n-vector.
Vector concat(const PhaseState& s);
PhaseState split(const Vector& x);

}  // namespace confsym
