#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "rbbound/parameter.hpp"

namespace rb {

/// Scalar coefficient function mu -> real of an affine decomposition term.
struct Coefficient {
  std::function<double(const ParameterPoint&)> fn;
  std::string description;  // optional closed form, for logging only

  double operator()(const ParameterPoint& mu) const { return fn(mu); }
};

/// Affine-parametrized full-order linear model
///   A(mu) = sum_q theta_q(mu) A_q,   f(mu) = sum_q' gamma_q'(mu) f_q',
/// with linear output s(u) = <l, u>. Immutable after construction and safe
/// to share across threads; all operations are pure.
struct AffineModel {
  Index dim_x = 0;
  ParameterBox box;
  std::vector<Coefficient> theta;  // Q terms
  std::vector<Coefficient> gamma;  // Q' terms
  std::vector<Matrix> A_q;         // Q dense dim_x x dim_x matrices
  std::vector<Vector> f_q;         // Q' vectors
  Vector l;                        // output vector
  bool symmetric = false;

  int Q() const { return static_cast<int>(A_q.size()); }
  int Qp() const { return static_cast<int>(f_q.size()); }

  /// Structural checks: consistent sizes, and symmetry of every A_q when
  /// the symmetric flag is set.
  void validate() const;
};

struct FullSolution {
  Vector u;
  ParameterPoint mu;
};

/// Relative residual tolerance of all direct solves.
inline constexpr double kSolveTolerance = 1e-10;

/// A(mu) and f(mu) assembled as dense objects.
std::pair<Matrix, Vector> assemble(const AffineModel& model,
                                   const ParameterPoint& mu);

/// Direct solve of A(mu) u = f(mu) via row-pivoted LU.
FullSolution solve_full(const AffineModel& model, const ParameterPoint& mu);

/// Adjoint solve w(mu) = A(mu)^{-T} l.
Vector solve_adjoint(const AffineModel& model, const ParameterPoint& mu);

/// Output functional s(u) = <l, u>.
double output(const AffineModel& model, const Vector& u);

/// Primal and adjoint solutions from a single factorization of A(mu).
/// Used by training and experiment loops, where both are always needed.
struct PrimalAdjointPair {
  Vector u, w;
};
PrimalAdjointPair solve_primal_adjoint(const AffineModel& model,
                                       const ParameterPoint& mu);

}  // namespace rb
