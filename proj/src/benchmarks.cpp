#include "rbbound/benchmarks.hpp"

#include <cmath>

namespace rb {

namespace {

int steps_from_spacing(double h, const char* name) {
  const double inv = 1.0 / h;
  const int n = static_cast<int>(std::lround(inv));
  if (n < 1 || std::abs(inv - n) > 1e-9)
    throw ConfigError(std::string("transport: 1/") + name +
                      " must be an integer");
  return n;
}

Vector box_vec(Index p, double v) { return Vector::Constant(p, v); }

}  // namespace

TransportConfig::TransportConfig()
    : mu_box(box_vec(1, 0.5), box_vec(1, 1.0)) {}

int TransportConfig::Nx() const { return steps_from_spacing(dx, "dx"); }
int TransportConfig::Nt() const { return steps_from_spacing(dt, "dt"); }

AffineModel build_transport(const TransportConfig& cfg) {
  const int Nx = cfg.Nx();
  const int Nt = cfg.Nt();
  const Index dim = cfg.dim();
  const double dx = cfg.dx;
  const double dt = cfg.dt;

  // B(mu) = B0 + mu B1, unknown ordering n-major i-minor. Rows:
  //   n = 0, all i      : u_i^0 = (i dx)(1 - i dx)
  //   n >= 1, i = 0     : u_0^n = 0
  //   n = 0..Nt-1,
  //   i = 0..Nx-1       : implicit upwind relation, row at (n+1, i+1)
  Matrix B0 = Matrix::Zero(dim, dim);
  Matrix B1 = Matrix::Zero(dim, dim);
  Vector y = Vector::Zero(dim);

  for (int i = 0; i <= Nx; ++i) {
    const Index row = cfg.unknown_index(0, i);
    B0(row, row) = 1.0;
    y[row] = (i * dx) * (1.0 - i * dx);
  }
  for (int n = 1; n <= Nt; ++n) {
    const Index row = cfg.unknown_index(n, 0);
    B0(row, row) = 1.0;
    y[row] = 0.0;
  }
  for (int n = 0; n < Nt; ++n) {
    for (int i = 0; i < Nx; ++i) {
      const Index row = cfg.unknown_index(n + 1, i + 1);
      B0(row, cfg.unknown_index(n + 1, i + 1)) += 1.0 / dt;
      B0(row, cfg.unknown_index(n, i + 1)) -= 1.0 / dt;
      B1(row, cfg.unknown_index(n + 1, i + 1)) += 1.0 / dx;
      B1(row, cfg.unknown_index(n + 1, i)) -= 1.0 / dx;
      y[row] = std::sin(i * dx) * std::exp(-i * dx);
    }
  }

  AffineModel model;
  model.dim_x = dim;
  model.box = cfg.mu_box;
  model.symmetric = true;
  // A(mu) = B^T B = B0^T B0 + mu (B0^T B1 + B1^T B0) + mu^2 B1^T B1.
  model.A_q.push_back(B0.transpose() * B0);
  model.A_q.push_back(B0.transpose() * B1 + B1.transpose() * B0);
  model.A_q.push_back(B1.transpose() * B1);
  model.theta.push_back({[](const ParameterPoint&) { return 1.0; }, "1"});
  model.theta.push_back({[](const ParameterPoint& mu) { return mu[0]; }, "mu"});
  model.theta.push_back(
      {[](const ParameterPoint& mu) { return mu[0] * mu[0]; }, "mu^2"});
  // f(mu) = B^T y = B0^T y + mu B1^T y.
  model.f_q.push_back(B0.transpose() * y);
  model.f_q.push_back(B1.transpose() * y);
  model.gamma.push_back({[](const ParameterPoint&) { return 1.0; }, "1"});
  model.gamma.push_back({[](const ParameterPoint& mu) { return mu[0]; }, "mu"});
  // Output selects the last space-time unknown u_{Nx}^{Nt}.
  model.l = Vector::Zero(dim);
  model.l[cfg.unknown_index(Nt, Nx)] = 1.0;
  model.validate();
  return model;
}

Vector transport_time_march(const TransportConfig& cfg,
                            const ParameterPoint& mu_pt) {
  cfg.mu_box.require_inside(mu_pt);
  const double mu = mu_pt[0];
  const int Nx = cfg.Nx();
  const int Nt = cfg.Nt();
  const double dx = cfg.dx;
  const double dt = cfg.dt;

  Vector u(cfg.dim());
  for (int i = 0; i <= Nx; ++i)
    u[cfg.unknown_index(0, i)] = (i * dx) * (1.0 - i * dx);
  const double diag = 1.0 / dt + mu / dx;
  for (int n = 0; n < Nt; ++n) {
    u[cfg.unknown_index(n + 1, 0)] = 0.0;
    for (int i = 0; i < Nx; ++i) {
      const double rhs = u[cfg.unknown_index(n, i + 1)] / dt +
                         mu * u[cfg.unknown_index(n + 1, i)] / dx +
                         std::sin(i * dx) * std::exp(-i * dx);
      u[cfg.unknown_index(n + 1, i + 1)] = rhs / diag;
    }
  }
  return u;
}

DiffusionConfig::DiffusionConfig() : DiffusionConfig(3, 60) {}

DiffusionConfig::DiffusionConfig(int blocks_, int grid_n_)
    : blocks(blocks_),
      grid_n(grid_n_),
      mu_box(box_vec(blocks_, 0.1), box_vec(blocks_, 10.0)) {
  if (blocks < 1) throw ConfigError("diffusion: blocks must be >= 1");
  if (grid_n < blocks + 1)
    throw ConfigError("diffusion: grid_n must be >= blocks + 1");
}

AffineModel build_diffusion(const DiffusionConfig& cfg) {
  const int n = cfg.grid_n;       // interior nodes
  const int ne = n + 1;           // elements
  const double h = 1.0 / ne;
  const int b = cfg.blocks;

  AffineModel model;
  model.dim_x = n;
  model.box = cfg.mu_box;
  model.symmetric = true;

  // Element e spans (e h, (e+1) h); its block is floor(e b / ne). Each A_q
  // collects the second-difference stiffness contributions of block q.
  std::vector<Matrix> A(static_cast<size_t>(b), Matrix::Zero(n, n));
  for (int e = 0; e < ne; ++e) {
    const int q = e * b / ne;
    Matrix& Aq = A[static_cast<size_t>(q)];
    const int left = e - 1;   // interior node index left of the element
    const int right = e;      // interior node index right of the element
    const double k = 1.0 / h;
    if (left >= 0) Aq(left, left) += k;
    if (right < n) Aq(right, right) += k;
    if (left >= 0 && right < n) {
      Aq(left, right) -= k;
      Aq(right, left) -= k;
    }
  }
  for (int q = 0; q < b; ++q) {
    model.A_q.push_back(std::move(A[static_cast<size_t>(q)]));
    model.theta.push_back(
        {[q](const ParameterPoint& mu) { return mu[q]; },
         "mu_" + std::to_string(q + 1)});
  }

  model.f_q.push_back(Vector::Constant(n, h));
  model.gamma.push_back({[](const ParameterPoint&) { return 1.0; }, "1"});

  // Output: mean value over the interior nodes of the last block.
  model.l = Vector::Zero(n);
  int count = 0;
  for (int i = 0; i < n; ++i) {
    // Node i sits at (i+1) h; its block by position.
    const int q = static_cast<int>((i + 1) * static_cast<long>(b) / ne);
    if (std::min(q, b - 1) == b - 1) {
      model.l[i] = 1.0;
      ++count;
    }
  }
  model.l /= count;
  model.validate();
  return model;
}

}  // namespace rb
