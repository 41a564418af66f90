#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "rbbound/parameter.hpp"

namespace rb {

/// Paired pick-freeze evaluations for one input index, together with the
/// per-evaluation output error bounds.
struct PickFreezeSample {
  int M = 0;
  int input_index = 0;
  std::vector<ParameterPoint> mu_a, mu_b;
  std::vector<double> s_tilde;        // outputs at mu_a[j]
  std::vector<double> s_tilde_prime;  // outputs at the hybrid points
  std::vector<double> eps, eps_prime;

  void validate() const;
};

struct SobolResult {
  int input_index = 0;
  double s_hat = 0.0;
  std::pair<double, double> meta_interval;      // [S^m, S^M]
  std::pair<double, double> combined_interval;  // bootstrap-combined
  double level = 0.0;  // (1 - alpha_as) (1 - alpha)^{2M}
};

/// Pick-freeze ratio: empirical covariance of (s, s') over empirical
/// variance of s, both with 1/M normalization.
double sobol_point_estimate(const std::vector<double>& s,
                            const std::vector<double>& s_prime);

/// Extremal values of the pick-freeze ratio over all true outputs consistent
/// with the boxes s_j in [s~_j +- eps_j], s'_j in [s~'_j +- eps'_j].
/// Computed by coordinate-wise monotone refinement (at most 100 sweeps);
/// on non-convergence the interval is widened to a certified outer
/// enclosure obtained by interval arithmetic.
std::pair<double, double> sobol_meta_interval(const PickFreezeSample& sample);

/// Bootstrap-combined certified interval at combined risk: resamples the
/// index set B times, recomputes the meta interval per replicate, and takes
/// the alpha_as/2 quantile of the lower ends and the 1-alpha_as/2 quantile
/// of the upper ends. The result always contains the meta interval.
SobolResult sobol_certified(const PickFreezeSample& sample, double alpha_as,
                            int B, double alpha, std::uint64_t seed);

/// Build a pick-freeze sample for input i: mu_a and mu_b are independent
/// uniform draws; the hybrid point takes coordinate i from mu_a[j] and all
/// other coordinates from mu_b[j].
PickFreezeSample make_pick_freeze(
    const ParameterBox& box, int input_index, int M, std::uint64_t seed,
    const std::function<double(const ParameterPoint&)>& output_fn,
    const std::function<double(const ParameterPoint&)>& eps_fn);

}  // namespace rb
