#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "rbbound/benchmarks.hpp"
#include "rbbound/reduction.hpp"
#include "test_helpers.hpp"

using namespace rb;
using rbtest::fixed_model;
using rbtest::mu1;
using rbtest::vec;

namespace {

std::vector<Vector> transport_snapshots(const AffineModel& model, int count,
                                        std::uint64_t seed) {
  std::vector<Vector> snaps;
  for (const auto& mu : model.box.sample_many(count, seed))
    snaps.push_back(solve_full(model, mu).u);
  return snaps;
}

}  // namespace

TEST_CASE("pod basic span and sign convention") {
  Vector e1 = Vector::Zero(4), e2 = Vector::Zero(4);
  e1[0] = 1;
  e2[1] = 1;
  auto Z = pod_basis({e1, e1, e2}, 2);
  CHECK(Z.n() == 2);
  CHECK(Z.Z.col(0).isApprox(e1));
  CHECK(Z.Z.col(1).isApprox(e2));
  CHECK((Z.Z.transpose() * Z.Z).isApprox(Matrix::Identity(2, 2), 1e-10));
}

TEST_CASE("pod rank error") {
  Vector e1 = Vector::Zero(3);
  e1[0] = 1;
  CHECK_THROWS_AS(pod_basis({e1, 2 * e1}, 2), RankError);
}

TEST_CASE("pod full-rank reconstruction") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<Vector> snaps;
  for (int j = 0; j < 4; ++j) {
    Vector s(10);
    for (Index i = 0; i < 10; ++i) s[i] = g(rng);
    snaps.push_back(s);
  }
  auto Z = pod_basis(snaps, 4);
  double err = 0;
  for (const auto& s : snaps)
    err += (s - Z.Z * (Z.Z.transpose() * s)).squaredNorm();
  CHECK(err <= 1e-18 * 10);
}

TEST_CASE("pod projection error equals singular-value tail") {
  TransportConfig cfg;
  cfg.dx = 0.1;
  cfg.dt = 0.1;
  auto model = build_transport(cfg);
  auto snaps = transport_snapshots(model, 30, 17);
  const int n = 6;
  auto Z = pod_basis(snaps, n);

  Matrix S(model.dim_x, static_cast<Index>(snaps.size()));
  for (size_t j = 0; j < snaps.size(); ++j)
    S.col(static_cast<Index>(j)) = snaps[j];
  Eigen::JacobiSVD<Matrix> svd(S);  // independent of the BDC path
  double tail = 0;
  for (Index i = n; i < svd.singularValues().size(); ++i)
    tail += svd.singularValues()[i] * svd.singularValues()[i];

  double err = 0;
  for (const auto& s : snaps)
    err += (s - Z.Z * (Z.Z.transpose() * s)).squaredNorm();
  CHECK(err == doctest::Approx(tail).epsilon(1e-8));
}

TEST_CASE("pod determinism is bitwise") {
  TransportConfig cfg;
  cfg.dx = 0.2;
  cfg.dt = 0.2;
  auto model = build_transport(cfg);
  auto snaps = transport_snapshots(model, 12, 5);
  auto Z1 = pod_basis(snaps, 4);
  auto Z2 = pod_basis(snaps, 4);
  CHECK((Z1.Z.array() == Z2.Z.array()).all());
}

TEST_CASE("project identity basis gives leading block") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  Matrix A(5, 5);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j) A(i, j) = g(rng);
  auto model = fixed_model(A + 6 * Matrix::Identity(5, 5), vec({1, 2, 3, 4, 5}),
                           vec({1, 0, 0, 0, 0}));
  ReducedBasis Z{Matrix::Identity(5, 5).leftCols(3)};
  auto rm = project(model, Z);
  CHECK(rm.At_q[0].isApprox(model.A_q[0].topLeftCorner(3, 3)));
  CHECK(rm.ft_q[0].isApprox(model.f_q[0].head(3)));
}

TEST_CASE("full-dimensional basis reproduces the full solve") {
  TransportConfig cfg;
  cfg.dx = 0.25;
  cfg.dt = 0.25;
  auto model = build_transport(cfg);
  // orthogonal square Z from a QR factorization of a random matrix
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  Matrix M(model.dim_x, model.dim_x);
  for (Index i = 0; i < model.dim_x; ++i)
    for (Index j = 0; j < model.dim_x; ++j) M(i, j) = g(rng);
  Matrix Q = Eigen::HouseholderQR<Matrix>(M).householderQ();
  ReducedBasis Z{Q};
  auto rm = project(model, Z);

  auto mu = mu1(0.75);
  auto full = solve_full(model, mu);
  auto red = solve_reduced(rm, mu);
  CHECK((Z.Z * red.u_tilde - full.u).norm() <= 1e-9 * full.u.norm());
  CHECK(reduced_output(rm, red) ==
        doctest::Approx(output(model, full.u)).epsilon(1e-9));
  CHECK(residual(model, rm, red).norm() <= 1e-9);
}

TEST_CASE("scalar Galerkin solve") {
  Matrix S(3, 3);
  S << 4, 1, 0, 1, 3, 1, 0, 1, 5;
  Vector f = vec({1, 2, 0});
  auto model = fixed_model(S, f, vec({1, 0, 0}), true);
  Vector zeta = vec({1, 1, 1}).normalized();
  ReducedBasis Z{zeta};
  auto rm = project(model, Z);
  auto sol = solve_reduced(rm, mu1(0.5));
  const double expected = zeta.dot(f) / zeta.dot(S * zeta);
  CHECK(sol.u_tilde[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("Galerkin orthogonality of the residual") {
  TransportConfig cfg;
  cfg.dx = 0.1;
  cfg.dt = 0.1;
  auto model = build_transport(cfg);
  auto Z = pod_basis(transport_snapshots(model, 20, 23), 5);
  auto rm = project(model, Z);
  for (const auto& mu : model.box.sample_many(10, 29)) {
    auto sol = solve_reduced(rm, mu);
    Vector r = residual(model, rm, sol);
    CHECK((Z.Z.transpose() * r).norm() <= 1e-9 * std::max(1.0, r.norm()));
  }
}

TEST_CASE("residual with zero coefficients is -f") {
  auto model = fixed_model(Matrix::Identity(3, 3), vec({1, 2, 3}),
                           vec({1, 0, 0}));
  ReducedBasis Z{Matrix::Identity(3, 3).leftCols(1)};
  auto rm = project(model, Z);
  ReducedSolution z{Vector::Zero(1), mu1(0.5)};
  CHECK(residual(model, rm, z).isApprox(-vec({1, 2, 3})));
}

TEST_CASE("reproduction of in-range solutions") {
  TransportConfig cfg;
  cfg.dx = 0.2;
  cfg.dt = 0.2;
  auto model = build_transport(cfg);
  auto mu_star = mu1(0.8);
  auto u_star = solve_full(model, mu_star).u;
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  std::vector<Vector> snaps;
  for (int j = 0; j < 5; ++j) {
    Vector s(model.dim_x);
    for (Index i = 0; i < model.dim_x; ++i) s[i] = g(rng);
    snaps.push_back(s);
  }
  snaps.push_back(u_star);
  auto Z = pod_basis(snaps, static_cast<int>(snaps.size()));
  auto rm = project(model, Z);
  auto sol = solve_reduced(rm, mu_star);
  CHECK((Z.Z * sol.u_tilde - u_star).norm() <= 1e-9 * u_star.norm());
}

TEST_CASE("output error identity <w, r> = s~ - s") {
  TransportConfig cfg;
  cfg.dx = 0.1;
  cfg.dt = 0.1;
  auto model = build_transport(cfg);
  auto Z = pod_basis(transport_snapshots(model, 20, 37), 5);
  auto rm = project(model, Z);
  for (const auto& mu : model.box.sample_many(8, 41)) {
    auto sol = solve_reduced(rm, mu);
    Vector r = residual(model, rm, sol);
    Vector w = solve_adjoint(model, mu);
    const double s = output(model, solve_full(model, mu).u);
    const double st = reduced_output(rm, sol);
    CHECK(std::abs((st - s) - w.dot(r)) <= 1e-9 * std::max(1.0, std::abs(s)));
  }
}

TEST_CASE("corrected output with the exact adjoint recovers s") {
  TransportConfig cfg;
  cfg.dx = 0.1;
  cfg.dt = 0.1;
  auto model = build_transport(cfg);
  auto Z = pod_basis(transport_snapshots(model, 20, 43), 4);
  auto mu = mu1(0.66);
  ReducedBasis Zd{solve_adjoint(model, mu).normalized()};
  auto rm = project(model, Z, Zd);
  const double s = output(model, solve_full(model, mu).u);
  CHECK(corrected_output(rm, mu) ==
        doctest::Approx(s).epsilon(1e-9));
}

TEST_CASE("corrected output requires a dual basis") {
  auto model = fixed_model(Matrix::Identity(3, 3), vec({1, 2, 3}),
                           vec({1, 0, 0}));
  ReducedBasis Z{Matrix::Identity(3, 3).leftCols(2)};
  auto rm = project(model, Z);
  CHECK_THROWS_AS(corrected_output(rm, mu1(0.5)), ConfigError);
}

TEST_CASE("corrected output matches its full-space definition") {
  TransportConfig cfg;
  cfg.dx = 0.1;
  cfg.dt = 0.1;
  auto model = build_transport(cfg);
  auto snaps = transport_snapshots(model, 20, 47);
  std::vector<Vector> adj;
  for (const auto& mu : model.box.sample_many(20, 47))
    adj.push_back(solve_adjoint(model, mu));
  auto Z = pod_basis(snaps, 5);
  auto Zd = pod_basis(adj, 5);
  auto rm = project(model, Z, Zd);
  for (const auto& mu : model.box.sample_many(6, 53)) {
    auto sol = solve_reduced(rm, mu);
    auto sol_d = solve_reduced_dual(rm, mu);
    Vector r = residual(model, rm, sol);
    const double expected =
        reduced_output(rm, sol) - (Zd.Z * sol_d.u_tilde).dot(r);
    CHECK(corrected_output(rm, mu) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("mean reduction error decreases with basis size") {
  TransportConfig cfg;
  cfg.dx = 0.1;
  cfg.dt = 0.1;
  auto model = build_transport(cfg);
  auto snaps = transport_snapshots(model, 30, 59);
  auto eval = model.box.sample_many(20, 61);
  std::vector<Vector> exact;
  for (const auto& mu : eval) exact.push_back(solve_full(model, mu).u);

  double prev = std::numeric_limits<double>::infinity();
  for (int n : {2, 4, 6, 8}) {
    auto Z = pod_basis(snaps, n);
    auto rm = project(model, Z);
    double mean = 0;
    for (size_t j = 0; j < eval.size(); ++j) {
      auto sol = solve_reduced(rm, eval[j]);
      mean += (Z.Z * sol.u_tilde - exact[j]).norm();
    }
    mean /= static_cast<double>(eval.size());
    CHECK(mean < prev);
    prev = mean;
  }
}

TEST_CASE("corrected convergence slope is steeper") {
  TransportConfig cfg;
  cfg.dx = 0.1;
  cfg.dt = 0.1;
  auto model = build_transport(cfg);
  auto snaps = transport_snapshots(model, 40, 67);
  std::vector<Vector> adj;
  for (const auto& mu : model.box.sample_many(40, 67))
    adj.push_back(solve_adjoint(model, mu));
  auto eval = model.box.sample_many(25, 71);
  std::vector<double> s_true;
  for (const auto& mu : eval)
    s_true.push_back(output(model, solve_full(model, mu).u));

  std::vector<double> lx, ly_plain, ly_corr;
  for (int n : {2, 4, 6, 8, 10}) {
    auto rm = project(model, pod_basis(snaps, n),
                      pod_basis(adj, n));
    double ep = 0, ec = 0;
    for (size_t j = 0; j < eval.size(); ++j) {
      auto sol = solve_reduced(rm, eval[j]);
      ep += std::abs(reduced_output(rm, sol) - s_true[j]);
      ec += std::abs(corrected_output(rm, eval[j]) - s_true[j]);
    }
    lx.push_back(n);
    ly_plain.push_back(std::log(ep / eval.size()));
    ly_corr.push_back(std::log(ec / eval.size()));
  }
  auto slope = [&](const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(lx.size());
    for (size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += y[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * y[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
  };
  CHECK(slope(ly_corr) < slope(ly_plain));
}
