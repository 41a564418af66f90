#include "rbbound/error_bounds.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "blob_io.hpp"

namespace rb {

double stability_constant(const AffineModel& model, const ParameterPoint& mu) {
  if (!model.symmetric)
    throw ConfigError(
        "stability_constant: only symmetric models are supported");
  auto [A, f] = assemble(model, mu);
  Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().minCoeff();
}

namespace {

double lipschitz_impl(const AffineModel& model, const ReducedModel& rm,
                      const ParameterPoint& mu, double alpha_mu) {
  if (!(alpha_mu > 0.0))
    throw DegeneracyError("lipschitz_bound: non-positive stability constant");
  const ReducedSolution sol = solve_reduced(rm, mu);
  const Vector r = residual(model, rm, sol);
  return model.l.norm() * r.norm() / alpha_mu;
}

double dual_based_impl(const AffineModel& model, const ReducedModel& rm,
                       const ParameterPoint& mu, double alpha_mu) {
  if (!rm.has_dual)
    throw ConfigError("dual_based_bound: reduced model carries no dual basis");
  if (!(alpha_mu > 0.0))
    throw DegeneracyError("dual_based_bound: non-positive stability constant");
  const ReducedSolution sol = solve_reduced(rm, mu);
  const Vector r = residual(model, rm, sol);
  const ReducedSolution sol_d = solve_reduced_dual(rm, mu);
  auto [A, f] = assemble(model, mu);
  const Vector rd = A.transpose() * (rm.dual_basis.Z * sol_d.u_tilde) - model.l;
  return r.norm() * rd.norm() / alpha_mu;
}

}  // namespace

double lipschitz_bound(const AffineModel& model, const ReducedModel& rm,
                       const ParameterPoint& mu) {
  return lipschitz_impl(model, rm, mu, stability_constant(model, mu));
}
double lipschitz_bound(const AffineModel& model, const ReducedModel& rm,
                       const ParameterPoint& mu, double alpha_mu) {
  return lipschitz_impl(model, rm, mu, alpha_mu);
}

double dual_based_bound(const AffineModel& model, const ReducedModel& rm,
                        const ParameterPoint& mu) {
  return dual_based_impl(model, rm, mu, stability_constant(model, mu));
}
double dual_based_bound(const AffineModel& model, const ReducedModel& rm,
                        const ParameterPoint& mu, double alpha_mu) {
  return dual_based_impl(model, rm, mu, alpha_mu);
}

std::vector<FullSample> draw_full_samples(const AffineModel& model,
                                          int sample_size,
                                          std::uint64_t seed) {
  const std::vector<ParameterPoint> xi =
      model.box.sample_many(sample_size, seed);
  std::vector<FullSample> out;
  out.reserve(xi.size());
  for (const ParameterPoint& mu : xi) {
    PrimalAdjointPair pa = solve_primal_adjoint(model, mu);
    out.push_back(FullSample{mu, std::move(pa.u), std::move(pa.w)});
  }
  return out;
}

GoalOrientedBoundData train_goal_oriented(const AffineModel& model,
                                          const ReducedModel& rm,
                                          const Partition& partition,
                                          const TrainOptions& opts) {
  const std::vector<FullSample> samples =
      draw_full_samples(model, opts.sample_size, opts.seed);
  return train_goal_oriented(model, rm, partition, opts, samples);
}

GoalOrientedBoundData train_goal_oriented(const AffineModel& model,
                                          const ReducedModel& rm,
                                          const Partition& partition,
                                          const TrainOptions& opts,
                                          std::span<const FullSample> samples) {
  if (opts.sample_size < 2)
    throw ContractError("train_goal_oriented: sample_size must be >= 2");
  if (opts.N < 1 || opts.N > 2 * opts.sample_size)
    throw ContractError("train_goal_oriented: need 1 <= N <= 2 * sample_size");
  if (static_cast<int>(samples.size()) != opts.sample_size)
    throw ContractError("train_goal_oriented: sample count mismatch");
  if (opts.corrected && !rm.has_dual)
    throw ConfigError("train_goal_oriented: corrected bound needs a dual basis");
  const int m = opts.sample_size;
  const Index dim = model.dim_x;

  // Per-sample residuals, (possibly corrected) adjoint states, and the
  // effective output errors s~ - s (or s~_c - s).
  Matrix W(dim, m), R(dim, m);
  Vector eff_err(m);
  std::vector<int> cell(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    const FullSample& fs = samples[static_cast<size_t>(j)];
    const ReducedSolution sol = solve_reduced(rm, fs.mu);
    const Vector r = residual(model, rm, sol);
    const double s = model.l.dot(fs.u);
    double s_eff = rm.lt.dot(sol.u_tilde);
    Vector w_eff = fs.w;
    if (opts.corrected) {
      const ReducedSolution sol_d = solve_reduced_dual(rm, fs.mu);
      const Vector zd_ud = rm.dual_basis.Z * sol_d.u_tilde;
      s_eff -= zd_ud.dot(r);
      w_eff -= zd_ud;
    }
    W.col(j) = w_eff;
    R.col(j) = r;
    eff_err[j] = s_eff - s;
    cell[static_cast<size_t>(j)] = partition.cell_of(fs.mu);
  }

  // Orthonormal basis V of Im W + Im R, then the small eigenproblem
  // Sigma = 1/(2m) [ (V^T W)(W^T V) + (V^T R)(R^T V) ].
  Matrix WR(dim, 2 * m);
  WR.leftCols(m) = W;
  WR.rightCols(m) = R;
  Eigen::ColPivHouseholderQR<Matrix> qr(WR);
  const Index rank = qr.rank();
  if (rank < 1)
    throw RankError("train_goal_oriented: residual/adjoint span is empty");
  const Matrix V = qr.householderQ() * Matrix::Identity(dim, rank);

  const Matrix VtW = V.transpose() * W;
  const Matrix VtR = V.transpose() * R;
  Matrix Sigma = (VtW * VtW.transpose() + VtR * VtR.transpose()) / (2.0 * m);
  Sigma = 0.5 * (Sigma + Sigma.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(Sigma);
  if (es.info() != Eigen::Success)
    throw NumericError("train_goal_oriented: eigensolver failed");

  GoalOrientedBoundData data;
  data.eigvals = es.eigenvalues().reverse();
  data.corrected = opts.corrected;
  data.sample_size = m;
  data.seed = opts.seed;
  data.t2_halved = opts.t2_halved;
  data.partition = partition;

  int N = opts.N;
  if (N > rank) {
    N = static_cast<int>(rank);
    data.rank_truncated = true;
  }
  Matrix Psi(rank, N);
  for (int i = 0; i < N; ++i)
    Psi.col(i) = es.eigenvectors().col(rank - 1 - i);
  data.phi = V * Psi;

  // Beta tables by discrete minimization over Xi within each cell.
  const int K = partition.size();
  data.beta_min = Matrix::Constant(N, K, std::numeric_limits<double>::infinity());
  data.beta_max =
      Matrix::Constant(N, K, -std::numeric_limits<double>::infinity());
  const Matrix D = data.phi.transpose() * W;  // N x m, D(i,j) = <w_j, phi_i>
  for (int j = 0; j < m; ++j) {
    const int k = cell[static_cast<size_t>(j)];
    for (int i = 0; i < N; ++i) {
      data.beta_min(i, k) = std::min(data.beta_min(i, k), D(i, j));
      data.beta_max(i, k) = std::max(data.beta_max(i, k), D(i, j));
    }
  }
  for (int k = 0; k < K; ++k)
    if (!std::isfinite(data.beta_min(0, k)))
      throw PartitionCoverageError(
          "train_goal_oriented: no training sample in partition cell " +
          std::to_string(k) + "; enlarge the sample or coarsen the partition");

  // Monte-Carlo tail estimate.
  const Matrix Rphi = data.phi.transpose() * R;  // N x m
  Vector tail(m);
  for (int j = 0; j < m; ++j)
    tail[j] = std::abs(eff_err[j] - D.col(j).dot(Rphi.col(j)));
  const double norm = opts.t2_halved ? 2.0 * m : static_cast<double>(m);
  data.t2_hat = tail.sum() / norm;
  const double mean_abs = tail.mean();
  const double var =
      (tail.array() - mean_abs).square().sum() / std::max(1, m - 1);
  data.t2_se = std::sqrt(var / m) * (opts.t2_halved ? 0.5 : 1.0);

  // Precomputed products for dim_x-free online residual coefficients.
  data.ip_A.reserve(model.A_q.size());
  for (const Matrix& Aq : model.A_q)
    data.ip_A.push_back(data.phi.transpose() * (Aq * rm.basis.Z));
  data.ip_f.resize(N, model.Qp());
  for (int q = 0; q < model.Qp(); ++q)
    data.ip_f.col(q) =
        data.phi.transpose() * model.f_q[static_cast<size_t>(q)];

  return data;
}

double t1(const GoalOrientedBoundData& data, const ReducedModel& rm,
          const ParameterPoint& mu) {
  const int k = data.partition.cell_of(mu);
  const ReducedSolution sol = solve_reduced(rm, mu);
  const int N = data.N();

  // <r(mu), phi_i> from the precomputed arrays: O(nQ + Q').
  Vector rho = Vector::Zero(N);
  for (size_t q = 0; q < data.ip_A.size(); ++q)
    rho += rm.theta[q](mu) * (data.ip_A[q] * sol.u_tilde);
  for (Index q = 0; q < data.ip_f.cols(); ++q)
    rho -= rm.gamma[static_cast<size_t>(q)](mu) * data.ip_f.col(q);

  double low = 0.0, up = 0.0;
  for (int i = 0; i < N; ++i) {
    if (rho[i] > 0.0) {
      low += rho[i] * data.beta_min(i, k);
      up += rho[i] * data.beta_max(i, k);
    } else if (rho[i] < 0.0) {
      low += rho[i] * data.beta_max(i, k);
      up += rho[i] * data.beta_min(i, k);
    }
    // rho[i] == 0 contributes to neither sum.
  }
  return std::max(std::abs(low), std::abs(up));
}

double bound(const GoalOrientedBoundData& data, const ReducedModel& rm,
             const ParameterPoint& mu, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ContractError("bound: risk alpha must lie in (0, 1)");
  return t1(data, rm, mu) + data.t2_hat / alpha;
}

namespace {
constexpr const char kBoundMagic[] = "RBGOBND1";
}

void save_bound_data(const std::string& path,
                     const GoalOrientedBoundData& data) {
  detail::BlobWriter w;
  w.meta["version"] = 1;
  w.meta["t2_hat"] = data.t2_hat;
  w.meta["t2_se"] = data.t2_se;
  w.meta["corrected"] = data.corrected;
  w.meta["rank_truncated"] = data.rank_truncated;
  w.meta["sample_size"] = data.sample_size;
  w.meta["seed"] = data.seed;
  w.meta["t2_halved"] = data.t2_halved;
  w.meta["Q"] = data.ip_A.size();
  detail::Json part;
  part["box_lo"] = std::vector<double>(
      data.partition.box().lo().begin(), data.partition.box().lo().end());
  part["box_hi"] = std::vector<double>(
      data.partition.box().hi().begin(), data.partition.box().hi().end());
  detail::Json cells = detail::Json::array();
  for (const Partition::Cell& c : data.partition.cells())
    cells.push_back({{"lo", std::vector<double>(c.lo.begin(), c.lo.end())},
                     {"hi", std::vector<double>(c.hi.begin(), c.hi.end())}});
  part["cells"] = cells;
  w.meta["partition"] = part;

  w.add("phi", data.phi);
  for (size_t q = 0; q < data.ip_A.size(); ++q)
    w.add("ip_A_" + std::to_string(q), data.ip_A[q]);
  w.add("ip_f", data.ip_f);
  w.add("beta_min", data.beta_min);
  w.add("beta_max", data.beta_max);
  w.add("eigvals", data.eigvals);
  w.write(path, kBoundMagic);
}

GoalOrientedBoundData load_bound_data(const std::string& path) {
  detail::BlobReader r(path, kBoundMagic);
  GoalOrientedBoundData data;
  data.t2_hat = r.meta.at("t2_hat").get<double>();
  data.t2_se = r.meta.at("t2_se").get<double>();
  data.corrected = r.meta.at("corrected").get<bool>();
  data.rank_truncated = r.meta.at("rank_truncated").get<bool>();
  data.sample_size = r.meta.at("sample_size").get<int>();
  data.seed = r.meta.at("seed").get<std::uint64_t>();
  data.t2_halved = r.meta.at("t2_halved").get<bool>();

  const auto& part = r.meta.at("partition");
  auto to_vec = [](const detail::Json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()))
        .eval();
  };
  ParameterBox box(to_vec(part.at("box_lo")), to_vec(part.at("box_hi")));
  std::vector<Partition::Cell> cells;
  for (const auto& c : part.at("cells"))
    cells.push_back({to_vec(c.at("lo")), to_vec(c.at("hi"))});
  data.partition = Partition::from_cells(box, std::move(cells));

  data.phi = r.matrix("phi");
  const auto Q = r.meta.at("Q").get<size_t>();
  for (size_t q = 0; q < Q; ++q)
    data.ip_A.push_back(r.matrix("ip_A_" + std::to_string(q)));
  data.ip_f = r.matrix("ip_f");
  data.beta_min = r.matrix("beta_min");
  data.beta_max = r.matrix("beta_max");
  data.eigvals = r.vector("eigvals");
  return data;
}

}  // namespace rb
