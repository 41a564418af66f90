#pragma once

#include <optional>
#include <vector>

#include "rbbound/affine_model.hpp"

namespace rb {

/// Orthonormal reduced basis, columns zeta_1..zeta_n. Each column is scaled
/// so its largest-magnitude entry is positive, which makes POD output
/// deterministic down to the bit.
struct ReducedBasis {
  Matrix Z;  // dim_x x n

  Index n() const { return Z.cols(); }
  Index dim_x() const { return Z.rows(); }
};

/// Galerkin-projected model. Carries everything the online phase needs:
/// projected operators, coefficient callbacks, and (when a dual basis is
/// given) the precomputed correction arrays C_q = Z_d^T A_q Z and
/// d_q' = Z_d^T f_q', so that the corrected output never touches a
/// dim_x-sized object.
struct ReducedModel {
  ReducedBasis basis;
  std::vector<Matrix> At_q;  // Z^T A_q Z, n x n
  std::vector<Vector> ft_q;  // Z^T f_q'
  Vector lt;                 // Z^T l
  std::vector<Coefficient> theta, gamma;
  ParameterBox box;

  bool has_dual = false;
  ReducedBasis dual_basis;
  std::vector<Matrix> Atd_q;  // Z_d^T A_q^T Z_d
  Vector ltd;                 // Z_d^T l
  std::vector<Matrix> C_q;    // Z_d^T A_q Z , n_d x n
  std::vector<Vector> d_q;    // Z_d^T f_q'

  Index n() const { return basis.n(); }
};

struct ReducedSolution {
  Vector u_tilde;
  ParameterPoint mu;
};

/// POD via SVD of the snapshot matrix: the n dominant left singular
/// directions, under the positive-largest-entry sign convention.
/// Throws RankError if n exceeds the numerical rank (singular value below
/// 1e-12 times the largest).
ReducedBasis pod_basis(const std::vector<Vector>& snapshots, int n);

/// Offline Galerkin projection. Dual projections are filled iff dual_Z is
/// given.
ReducedModel project(const AffineModel& model, const ReducedBasis& Z,
                     const std::optional<ReducedBasis>& dual_Z = std::nullopt);

/// Online reduced solve; cost independent of dim_x.
ReducedSolution solve_reduced(const ReducedModel& rm, const ParameterPoint& mu);

/// Online dual reduced solve: Z_d^T A(mu)^T Z_d u_d = Z_d^T l.
ReducedSolution solve_reduced_dual(const ReducedModel& rm,
                                   const ParameterPoint& mu);

/// s~(mu) = <l~, u~>.
double reduced_output(const ReducedModel& rm, const ReducedSolution& sol);

/// Full-space residual r(mu) = A(mu) Z u~(mu) - f(mu). Offline/test use.
Vector residual(const AffineModel& model, const ReducedModel& rm,
                const ReducedSolution& sol);

/// Adjoint-corrected output s~_c(mu) = s~(mu) - <Z_d u~_d(mu), r(mu)>,
/// evaluated through the precomputed correction arrays (online cost
/// independent of dim_x).
double corrected_output(const ReducedModel& rm, const ParameterPoint& mu);

}  // namespace rb
