#include "rbbound/reduction.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace rb {

namespace {

// Flip each column so its largest-magnitude entry (first such index on
// ties) is positive.
void apply_sign_convention(Matrix& Z) {
  for (Index j = 0; j < Z.cols(); ++j) {
    Index arg = 0;
    double best = std::abs(Z(0, j));
    for (Index i = 1; i < Z.rows(); ++i) {
      const double a = std::abs(Z(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (Z(arg, j) < 0.0) Z.col(j) = -Z.col(j);
  }
}

Matrix assemble_reduced_operator(const std::vector<Matrix>& At_q,
                                 const std::vector<Coefficient>& theta,
                                 const ParameterPoint& mu) {
  Matrix At = theta[0](mu) * At_q[0];
  for (size_t q = 1; q < At_q.size(); ++q) At += theta[q](mu) * At_q[q];
  return At;
}

}  // namespace

ReducedBasis pod_basis(const std::vector<Vector>& snapshots, int n) {
  if (snapshots.empty()) throw ContractError("pod_basis: no snapshots");
  if (n < 1) throw ContractError("pod_basis: n must be >= 1");
  const Index dim = snapshots.front().size();
  Matrix S(dim, static_cast<Index>(snapshots.size()));
  for (size_t j = 0; j < snapshots.size(); ++j) {
    if (snapshots[j].size() != dim)
      throw ContractError("pod_basis: snapshot length mismatch");
    S.col(static_cast<Index>(j)) = snapshots[j];
  }
  Eigen::BDCSVD<Matrix> svd(S, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  if (n > sv.size() || sv[n - 1] < 1e-12 * sv[0])
    throw RankError("pod_basis: requested dimension " + std::to_string(n) +
                    " exceeds the numerical rank of the snapshots");
  Matrix Z = svd.matrixU().leftCols(n);
  apply_sign_convention(Z);
  return ReducedBasis{std::move(Z)};
}

ReducedModel project(const AffineModel& model, const ReducedBasis& Z,
                     const std::optional<ReducedBasis>& dual_Z) {
  if (Z.n() < 1) throw ContractError("project: empty reduced basis");
  if (Z.dim_x() != model.dim_x)
    throw ContractError("project: basis/model dimension mismatch");

  ReducedModel rm;
  rm.basis = Z;
  rm.theta = model.theta;
  rm.gamma = model.gamma;
  rm.box = model.box;
  rm.At_q.reserve(model.A_q.size());
  for (const Matrix& A : model.A_q)
    rm.At_q.push_back(Z.Z.transpose() * A * Z.Z);
  rm.ft_q.reserve(model.f_q.size());
  for (const Vector& f : model.f_q) rm.ft_q.push_back(Z.Z.transpose() * f);
  rm.lt = Z.Z.transpose() * model.l;

  if (dual_Z) {
    if (dual_Z->dim_x() != model.dim_x || dual_Z->n() < 1)
      throw ContractError("project: bad dual basis");
    rm.has_dual = true;
    rm.dual_basis = *dual_Z;
    const Matrix& Zd = dual_Z->Z;
    rm.Atd_q.reserve(model.A_q.size());
    rm.C_q.reserve(model.A_q.size());
    for (const Matrix& A : model.A_q) {
      rm.Atd_q.push_back(Zd.transpose() * A.transpose() * Zd);
      rm.C_q.push_back(Zd.transpose() * A * Z.Z);
    }
    rm.d_q.reserve(model.f_q.size());
    for (const Vector& f : model.f_q) rm.d_q.push_back(Zd.transpose() * f);
    rm.ltd = Zd.transpose() * model.l;
  }
  return rm;
}

ReducedSolution solve_reduced(const ReducedModel& rm, const ParameterPoint& mu) {
  rm.box.require_inside(mu);
  Matrix At = assemble_reduced_operator(rm.At_q, rm.theta, mu);
  Vector ft = rm.gamma[0](mu) * rm.ft_q[0];
  for (size_t q = 1; q < rm.ft_q.size(); ++q) ft += rm.gamma[q](mu) * rm.ft_q[q];
  Eigen::PartialPivLU<Matrix> lu(At);
  Vector ut = lu.solve(ft);
  const double scale = At.norm() * ut.norm() + ft.norm();
  if (!((At * ut - ft).norm() <= kSolveTolerance * scale) || !ut.allFinite())
    throw SingularSystemError("solve_reduced: singular reduced operator");
  return ReducedSolution{std::move(ut), mu};
}

ReducedSolution solve_reduced_dual(const ReducedModel& rm,
                                   const ParameterPoint& mu) {
  if (!rm.has_dual)
    throw ConfigError("solve_reduced_dual: reduced model carries no dual basis");
  rm.box.require_inside(mu);
  Matrix Atd = assemble_reduced_operator(rm.Atd_q, rm.theta, mu);
  Eigen::PartialPivLU<Matrix> lu(Atd);
  Vector ud = lu.solve(rm.ltd);
  const double scale = Atd.norm() * ud.norm() + rm.ltd.norm();
  if (!((Atd * ud - rm.ltd).norm() <= kSolveTolerance * scale) ||
      !ud.allFinite())
    throw SingularSystemError("solve_reduced_dual: singular reduced operator");
  return ReducedSolution{std::move(ud), mu};
}

double reduced_output(const ReducedModel& rm, const ReducedSolution& sol) {
  if (sol.u_tilde.size() != rm.n())
    throw ContractError("reduced_output: solution length mismatch");
  return rm.lt.dot(sol.u_tilde);
}

Vector residual(const AffineModel& model, const ReducedModel& rm,
                const ReducedSolution& sol) {
  if (sol.u_tilde.size() != rm.n())
    throw ContractError("residual: solution length mismatch");
  const Vector Zu = rm.basis.Z * sol.u_tilde;
  Vector r = Vector::Zero(model.dim_x);
  for (int q = 0; q < model.Q(); ++q)
    r += model.theta[static_cast<size_t>(q)](sol.mu) *
         (model.A_q[static_cast<size_t>(q)] * Zu);
  for (int q = 0; q < model.Qp(); ++q)
    r -= model.gamma[static_cast<size_t>(q)](sol.mu) *
         model.f_q[static_cast<size_t>(q)];
  return r;
}

double corrected_output(const ReducedModel& rm, const ParameterPoint& mu) {
  if (!rm.has_dual)
    throw ConfigError("corrected_output: reduced model carries no dual basis");
  const ReducedSolution sol = solve_reduced(rm, mu);
  const ReducedSolution sol_d = solve_reduced_dual(rm, mu);
  const double s_tilde = rm.lt.dot(sol.u_tilde);
  // <Z_d u~_d, r(mu)> through the precomputed arrays C_q, d_q.
  double corr = 0.0;
  for (size_t q = 0; q < rm.C_q.size(); ++q)
    corr += rm.theta[q](mu) * sol_d.u_tilde.dot(rm.C_q[q] * sol.u_tilde);
  for (size_t q = 0; q < rm.d_q.size(); ++q)
    corr -= rm.gamma[q](mu) * sol_d.u_tilde.dot(rm.d_q[q]);
  return s_tilde - corr;
}

}  // namespace rb
