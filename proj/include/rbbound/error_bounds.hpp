#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rbbound/reduction.hpp"

namespace rb {

/// Exact stability constant alpha(mu): smallest eigenvalue magnitude of the
/// symmetric A(mu) under the Euclidean norm.
double stability_constant(const AffineModel& model, const ParameterPoint& mu);

/// Lipschitz output bound  ||l|| ||r(mu)|| / alpha(mu).  Exists for
/// comparison; uses the full residual, no online efficiency intended.
double lipschitz_bound(const AffineModel& model, const ReducedModel& rm,
                       const ParameterPoint& mu);
double lipschitz_bound(const AffineModel& model, const ReducedModel& rm,
                       const ParameterPoint& mu, double alpha_mu);

/// Dual-based bound on the corrected output,
///   ||r(mu)|| ||r_d(mu)|| / alpha(mu),  r_d(mu) = A(mu)^T Z_d u~_d(mu) - l.
double dual_based_bound(const AffineModel& model, const ReducedModel& rm,
                        const ParameterPoint& mu);
double dual_based_bound(const AffineModel& model, const ReducedModel& rm,
                        const ParameterPoint& mu, double alpha_mu);

/// Offline artifacts of the probabilistic goal-oriented bound.
struct GoalOrientedBoundData {
  Matrix phi;                // dim_x x N, orthonormal columns (offline only)
  std::vector<Matrix> ip_A;  // Q matrices N x n: phi^T A_q Z
  Matrix ip_f;               // N x Q': <f_q', phi_i>
  Matrix beta_min, beta_max;  // N x K tables over the partition cells
  double t2_hat = 0.0;
  double t2_se = 0.0;  // Monte-Carlo standard error of t2_hat, reported only
  Vector eigvals;      // full eigenvalue list of the Sigma problem, descending
  bool corrected = false;
  bool rank_truncated = false;  // N was reduced to the numerical rank
  int sample_size = 0;
  std::uint64_t seed = 0;
  bool t2_halved = false;
  Partition partition;

  int N() const { return static_cast<int>(beta_min.rows()); }
};

struct TrainOptions {
  int sample_size = 200;
  int N = 10;
  bool corrected = false;
  std::uint64_t seed = 0;
  /// Use the 1/(2#Xi) normalization for T2_hat instead of the unbiased 1/#Xi.
  bool t2_halved = false;
};

/// One full-order training sample: parameter, primal and adjoint solutions.
struct FullSample {
  ParameterPoint mu;
  Vector u, w;
};

/// Draw the training set Xi and solve the full problem at every point.
/// Separated out so several trainings can share the expensive solves.
std::vector<FullSample> draw_full_samples(const AffineModel& model,
                                          int sample_size, std::uint64_t seed);

/// Offline pipeline of the goal-oriented bound: snapshot estimation of the
/// G operator, Sigma-matrix eigen reduction, beta tables over the partition,
/// tail estimate T2_hat, and the precomputed inner products for dim_x-free
/// online evaluation.
GoalOrientedBoundData train_goal_oriented(const AffineModel& model,
                                          const ReducedModel& rm,
                                          const Partition& partition,
                                          const TrainOptions& opts);
GoalOrientedBoundData train_goal_oriented(const AffineModel& model,
                                          const ReducedModel& rm,
                                          const Partition& partition,
                                          const TrainOptions& opts,
                                          std::span<const FullSample> samples);

/// Online T1(mu, N, Phi): residual products from the precomputed arrays,
/// beta selection by sign and cell, max of |low| and |up| sums.
double t1(const GoalOrientedBoundData& data, const ReducedModel& rm,
          const ParameterPoint& mu);

/// Probabilistic bound  T1(mu) + T2_hat / alpha,  valid with risk alpha.
/// Bounds |s - s~_c| when data.corrected, |s - s~| otherwise.
double bound(const GoalOrientedBoundData& data, const ReducedModel& rm,
             const ParameterPoint& mu, double alpha);

/// Versioned binary/JSON hybrid serialization (JSON metadata, matrices as
/// little-endian 64-bit float blocks).
void save_bound_data(const std::string& path, const GoalOrientedBoundData& data);
GoalOrientedBoundData load_bound_data(const std::string& path);

}  // namespace rb
