#include "rbbound/affine_model.hpp"

#include <cmath>
#include <sstream>

namespace rb {

namespace {

std::string mu_str(const ParameterPoint& mu) {
  std::ostringstream os;
  for (Index i = 0; i < mu.dim(); ++i) os << (i ? "," : "") << mu.coords[i];
  return os.str();
}

void check_residual(const Matrix& A, const Vector& rhs, const Vector& x,
                    const ParameterPoint& mu, const char* what) {
  const double scale = A.norm() * x.norm() + rhs.norm();
  const double res = (A * x - rhs).norm();
  if (!(res <= kSolveTolerance * scale) || !x.allFinite())
    throw SingularSystemError(std::string(what) +
                              ": singular or near-singular system at mu=(" +
                              mu_str(mu) + ")");
}

}  // namespace

void AffineModel::validate() const {
  if (dim_x <= 0) throw ContractError("AffineModel: dim_x must be positive");
  if (A_q.empty() || f_q.empty())
    throw ContractError("AffineModel: empty affine decomposition");
  if (theta.size() != A_q.size() || gamma.size() != f_q.size())
    throw ContractError("AffineModel: coefficient/term count mismatch");
  for (const Matrix& A : A_q)
    if (A.rows() != dim_x || A.cols() != dim_x)
      throw ContractError("AffineModel: A_q size mismatch");
  for (const Vector& f : f_q)
    if (f.size() != dim_x) throw ContractError("AffineModel: f_q size mismatch");
  if (l.size() != dim_x) throw ContractError("AffineModel: l size mismatch");
  if (symmetric) {
    for (const Matrix& A : A_q) {
      const double scale = std::max(1.0, A.norm());
      if ((A - A.transpose()).norm() > 1e-12 * scale)
        throw ContractError("AffineModel: symmetric flag set but A_q != A_q^T");
    }
  }
}

std::pair<Matrix, Vector> assemble(const AffineModel& model,
                                   const ParameterPoint& mu) {
  model.box.require_inside(mu);
  Matrix A = Matrix::Zero(model.dim_x, model.dim_x);
  for (int q = 0; q < model.Q(); ++q) {
    const double c = model.theta[static_cast<size_t>(q)](mu);
    if (!std::isfinite(c))
      throw NumericError("assemble: non-finite theta coefficient");
    A += c * model.A_q[static_cast<size_t>(q)];
  }
  Vector f = Vector::Zero(model.dim_x);
  for (int q = 0; q < model.Qp(); ++q) {
    const double c = model.gamma[static_cast<size_t>(q)](mu);
    if (!std::isfinite(c))
      throw NumericError("assemble: non-finite gamma coefficient");
    f += c * model.f_q[static_cast<size_t>(q)];
  }
  return {std::move(A), std::move(f)};
}

FullSolution solve_full(const AffineModel& model, const ParameterPoint& mu) {
  auto [A, f] = assemble(model, mu);
  Eigen::PartialPivLU<Matrix> lu(A);
  Vector u = lu.solve(f);
  check_residual(A, f, u, mu, "solve_full");
  return FullSolution{std::move(u), mu};
}

Vector solve_adjoint(const AffineModel& model, const ParameterPoint& mu) {
  auto [A, f] = assemble(model, mu);
  Eigen::PartialPivLU<Matrix> lu(A);
  Vector w = lu.transpose().solve(model.l);
  check_residual(A.transpose(), model.l, w, mu, "solve_adjoint");
  return w;
}

double output(const AffineModel& model, const Vector& u) {
  if (u.size() != model.dim_x)
    throw ContractError("output: vector length does not match dim_x");
  return model.l.dot(u);
}

PrimalAdjointPair solve_primal_adjoint(const AffineModel& model,
                                       const ParameterPoint& mu) {
  auto [A, f] = assemble(model, mu);
  Eigen::PartialPivLU<Matrix> lu(A);
  Vector u = lu.solve(f);
  Vector w = lu.transpose().solve(model.l);
  check_residual(A, f, u, mu, "solve_full");
  check_residual(A.transpose(), model.l, w, mu, "solve_adjoint");
  return PrimalAdjointPair{std::move(u), std::move(w)};
}

}  // namespace rb
