#include "rbbound/sensitivity.hpp"

#include <algorithm>
#include <cmath>

namespace rb {

void PickFreezeSample::validate() const {
  const size_t m = static_cast<size_t>(M);
  if (M < 2) throw ContractError("PickFreezeSample: M must be >= 2");
  if (s_tilde.size() != m || s_tilde_prime.size() != m || eps.size() != m ||
      eps_prime.size() != m)
    throw ContractError("PickFreezeSample: list lengths differ from M");
  for (size_t j = 0; j < m; ++j)
    if (eps[j] < 0.0 || eps_prime[j] < 0.0)
      throw ContractError("PickFreezeSample: negative error bound entry");
}

double sobol_point_estimate(const std::vector<double>& s,
                            const std::vector<double>& s_prime) {
  const int M = static_cast<int>(s.size());
  if (M < 2 || s_prime.size() != s.size())
    throw ContractError("sobol_point_estimate: need two lists of length M >= 2");
  double Sx = 0, Sy = 0, Sxy = 0, Sxx = 0;
  for (int j = 0; j < M; ++j) {
    Sx += s[static_cast<size_t>(j)];
    Sy += s_prime[static_cast<size_t>(j)];
    Sxy += s[static_cast<size_t>(j)] * s_prime[static_cast<size_t>(j)];
    Sxx += s[static_cast<size_t>(j)] * s[static_cast<size_t>(j)];
  }
  const double num = Sxy / M - (Sx / M) * (Sy / M);
  const double den = Sxx / M - (Sx / M) * (Sx / M);
  if (den <= 0.0)
    throw DegeneracyError("sobol_point_estimate: zero empirical output variance");
  return num / den;
}

namespace {

// Coordinate-wise monotone refinement of the pick-freeze ratio over the
// per-sample boxes. Keeps running sums so a candidate move costs O(1).
class RatioExtremizer {
 public:
  RatioExtremizer(const PickFreezeSample& s) : s_(s), M_(s.M) {
    x_.resize(static_cast<size_t>(M_));
    y_.resize(static_cast<size_t>(M_));
  }

  // maximize: +1 for the upper end, -1 for the lower end.
  // Returns the extremal ratio, or NaN if no sweep converged.
  double run(int direction) {
    for (int j = 0; j < M_; ++j) {
      x_[static_cast<size_t>(j)] = s_.s_tilde[static_cast<size_t>(j)];
      y_[static_cast<size_t>(j)] = s_.s_tilde_prime[static_cast<size_t>(j)];
    }
    for (int sweep = 0; sweep < 100; ++sweep) {
      recompute_sums();
      bool changed = false;
      for (int j = 0; j < M_; ++j) {
        changed |= move_x(j, direction);
        changed |= move_y(j, direction);
      }
      if (!changed) return ratio();
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

 private:
  const PickFreezeSample& s_;
  int M_;
  std::vector<double> x_, y_;
  double Sx_ = 0, Sy_ = 0, Sxy_ = 0, Sxx_ = 0;

  void recompute_sums() {
    Sx_ = Sy_ = Sxy_ = Sxx_ = 0;
    for (int j = 0; j < M_; ++j) {
      Sx_ += x_[static_cast<size_t>(j)];
      Sy_ += y_[static_cast<size_t>(j)];
      Sxy_ += x_[static_cast<size_t>(j)] * y_[static_cast<size_t>(j)];
      Sxx_ += x_[static_cast<size_t>(j)] * x_[static_cast<size_t>(j)];
    }
  }

  double ratio() const {
    const double num = Sxy_ / M_ - (Sx_ / M_) * (Sy_ / M_);
    const double den = Sxx_ / M_ - (Sx_ / M_) * (Sx_ / M_);
    if (den <= 0.0)
      throw DegeneracyError("sobol_meta_interval: degenerate output variance");
    return num / den;
  }

  double ratio_with_x(int j, double v) const {
    const size_t sj = static_cast<size_t>(j);
    const double dx = v - x_[sj];
    const double Sx = Sx_ + dx;
    const double Sxy = Sxy_ + dx * y_[sj];
    const double Sxx = Sxx_ + v * v - x_[sj] * x_[sj];
    const double num = Sxy / M_ - (Sx / M_) * (Sy_ / M_);
    const double den = Sxx / M_ - (Sx / M_) * (Sx / M_);
    if (den <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return num / den;
  }

  double ratio_with_y(int j, double v) const {
    const size_t sj = static_cast<size_t>(j);
    const double dy = v - y_[sj];
    const double Sy = Sy_ + dy;
    const double Sxy = Sxy_ + dy * x_[sj];
    const double num = Sxy / M_ - (Sx_ / M_) * (Sy / M_);
    const double den = Sxx_ / M_ - (Sx_ / M_) * (Sx_ / M_);
    if (den <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return num / den;
  }

  bool better(double cand, double cur, int direction) const {
    if (std::isnan(cand)) return false;
    return direction > 0 ? cand > cur : cand < cur;
  }

  bool move_x(int j, int direction) {
    const size_t sj = static_cast<size_t>(j);
    if (s_.eps[sj] == 0.0) return false;
    const double lo = s_.s_tilde[sj] - s_.eps[sj];
    const double hi = s_.s_tilde[sj] + s_.eps[sj];
    const double cur = ratio();
    double best_v = x_[sj], best_r = cur;
    for (double v : {lo, hi}) {
      const double r = ratio_with_x(j, v);
      if (better(r, best_r, direction)) {
        best_r = r;
        best_v = v;
      }
    }
    if (best_v == x_[sj]) return false;
    const double dx = best_v - x_[sj];
    Sx_ += dx;
    Sxy_ += dx * y_[sj];
    Sxx_ += best_v * best_v - x_[sj] * x_[sj];
    x_[sj] = best_v;
    return true;
  }

  bool move_y(int j, int direction) {
    const size_t sj = static_cast<size_t>(j);
    if (s_.eps_prime[sj] == 0.0) return false;
    const double lo = s_.s_tilde_prime[sj] - s_.eps_prime[sj];
    const double hi = s_.s_tilde_prime[sj] + s_.eps_prime[sj];
    const double cur = ratio();
    double best_v = y_[sj], best_r = cur;
    for (double v : {lo, hi}) {
      const double r = ratio_with_y(j, v);
      if (better(r, best_r, direction)) {
        best_r = r;
        best_v = v;
      }
    }
    if (best_v == y_[sj]) return false;
    const double dy = best_v - y_[sj];
    Sy_ += dy;
    Sxy_ += dy * x_[sj];
    y_[sj] = best_v;
    return true;
  }
};

struct Interval {
  double lo, hi;
};

Interval mul(Interval a, Interval b) {
  const double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {std::min({c[0], c[1], c[2], c[3]}), std::max({c[0], c[1], c[2], c[3]})};
}
Interval sqr(Interval a) {
  if (a.lo >= 0) return {a.lo * a.lo, a.hi * a.hi};
  if (a.hi <= 0) return {a.hi * a.hi, a.lo * a.lo};
  return {0.0, std::max(a.lo * a.lo, a.hi * a.hi)};
}

// Certified outer enclosure of the pick-freeze ratio by interval arithmetic
// on the numerator and denominator.
std::pair<double, double> interval_enclosure(const PickFreezeSample& s) {
  const int M = s.M;
  Interval Sx{0, 0}, Sy{0, 0}, Sxy{0, 0}, Sxx{0, 0};
  for (int j = 0; j < M; ++j) {
    const size_t sj = static_cast<size_t>(j);
    const Interval xj{s.s_tilde[sj] - s.eps[sj], s.s_tilde[sj] + s.eps[sj]};
    const Interval yj{s.s_tilde_prime[sj] - s.eps_prime[sj],
                      s.s_tilde_prime[sj] + s.eps_prime[sj]};
    const Interval p = mul(xj, yj);
    const Interval q = sqr(xj);
    Sx = {Sx.lo + xj.lo, Sx.hi + xj.hi};
    Sy = {Sy.lo + yj.lo, Sy.hi + yj.hi};
    Sxy = {Sxy.lo + p.lo, Sxy.hi + p.hi};
    Sxx = {Sxx.lo + q.lo, Sxx.hi + q.hi};
  }
  const Interval mx{Sx.lo / M, Sx.hi / M};
  const Interval my{Sy.lo / M, Sy.hi / M};
  const Interval mm = mul(mx, my);
  const Interval num{Sxy.lo / M - mm.hi, Sxy.hi / M - mm.lo};
  const Interval mx2 = sqr(mx);
  const Interval den{Sxx.lo / M - mx2.hi, Sxx.hi / M - mx2.lo};
  if (den.lo <= 0.0)
    throw DegeneracyError(
        "sobol_meta_interval: variance enclosure reaches zero; error bounds "
        "too large for a certified interval");
  const double c[4] = {num.lo / den.lo, num.lo / den.hi, num.hi / den.lo,
                       num.hi / den.hi};
  return {std::min({c[0], c[1], c[2], c[3]}), std::max({c[0], c[1], c[2], c[3]})};
}

std::pair<double, double> meta_interval_impl(const PickFreezeSample& sample) {
  const double point =
      sobol_point_estimate(sample.s_tilde, sample.s_tilde_prime);
  RatioExtremizer ext(sample);
  const double hi = ext.run(+1);
  const double lo = ext.run(-1);
  if (std::isnan(hi) || std::isnan(lo)) return interval_enclosure(sample);
  return {std::min(lo, point), std::max(hi, point)};
}

double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double h = p * (static_cast<double>(v.size()) - 1.0);
  const size_t i = static_cast<size_t>(h);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (h - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

}  // namespace

std::pair<double, double> sobol_meta_interval(const PickFreezeSample& sample) {
  sample.validate();
  return meta_interval_impl(sample);
}

SobolResult sobol_certified(const PickFreezeSample& sample, double alpha_as,
                            int B, double alpha, std::uint64_t seed) {
  sample.validate();
  if (!(alpha_as > 0.0 && alpha_as < 1.0))
    throw ContractError("sobol_certified: alpha_as must lie in (0, 1)");
  if (B < 100) throw ContractError("sobol_certified: need B >= 100");

  SobolResult res;
  res.input_index = sample.input_index;
  res.s_hat = sobol_point_estimate(sample.s_tilde, sample.s_tilde_prime);
  res.meta_interval = meta_interval_impl(sample);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, sample.M - 1);
  std::vector<double> lows, highs;
  lows.reserve(static_cast<size_t>(B));
  highs.reserve(static_cast<size_t>(B));
  PickFreezeSample rep;
  rep.M = sample.M;
  rep.input_index = sample.input_index;
  rep.s_tilde.resize(static_cast<size_t>(sample.M));
  rep.s_tilde_prime.resize(static_cast<size_t>(sample.M));
  rep.eps.resize(static_cast<size_t>(sample.M));
  rep.eps_prime.resize(static_cast<size_t>(sample.M));
  for (int b = 0; b < B; ++b) {
    for (int j = 0; j < sample.M; ++j) {
      const size_t src = static_cast<size_t>(pick(rng));
      const size_t dst = static_cast<size_t>(j);
      rep.s_tilde[dst] = sample.s_tilde[src];
      rep.s_tilde_prime[dst] = sample.s_tilde_prime[src];
      rep.eps[dst] = sample.eps[src];
      rep.eps_prime[dst] = sample.eps_prime[src];
    }
    const auto [lo, hi] = meta_interval_impl(rep);
    lows.push_back(lo);
    highs.push_back(hi);
  }
  const double q_lo = quantile(std::move(lows), alpha_as / 2.0);
  const double q_hi = quantile(std::move(highs), 1.0 - alpha_as / 2.0);
  res.combined_interval = {std::min(q_lo, res.meta_interval.first),
                           std::max(q_hi, res.meta_interval.second)};
  res.level = (1.0 - alpha_as) * std::pow(1.0 - alpha, 2.0 * sample.M);
  return res;
}

PickFreezeSample make_pick_freeze(
    const ParameterBox& box, int input_index, int M, std::uint64_t seed,
    const std::function<double(const ParameterPoint&)>& output_fn,
    const std::function<double(const ParameterPoint&)>& eps_fn) {
  if (input_index < 0 || input_index >= box.dim())
    throw ContractError("make_pick_freeze: input index out of range");
  if (M < 2) throw ContractError("make_pick_freeze: M must be >= 2");

  PickFreezeSample s;
  s.M = M;
  s.input_index = input_index;
  std::mt19937_64 rng(seed);
  for (int j = 0; j < M; ++j) s.mu_a.push_back(box.sample(rng));
  for (int j = 0; j < M; ++j) s.mu_b.push_back(box.sample(rng));
  s.s_tilde.reserve(static_cast<size_t>(M));
  s.s_tilde_prime.reserve(static_cast<size_t>(M));
  s.eps.reserve(static_cast<size_t>(M));
  s.eps_prime.reserve(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) {
    const ParameterPoint& a = s.mu_a[static_cast<size_t>(j)];
    ParameterPoint hybrid = s.mu_b[static_cast<size_t>(j)];
    hybrid.coords[input_index] = a.coords[input_index];
    s.s_tilde.push_back(output_fn(a));
    s.s_tilde_prime.push_back(output_fn(hybrid));
    s.eps.push_back(eps_fn(a));
    s.eps_prime.push_back(eps_fn(hybrid));
  }
  s.validate();
  return s;
}

}  // namespace rb
