#pragma once

#include "rbbound/affine_model.hpp"

namespace rb {

/// Space-time discretization of the 1-D linear transport equation
///   u_t + mu u_x = sin(x) exp(-x),  u(x,0) = x(1-x),  u(0,t) = 0,
/// by the implicit first-order upwind scheme. The unknown is the whole
/// space-time vector, ordered n-major, i-minor, and the normal equations
/// B(mu)^T B(mu) u = B(mu)^T y make the system symmetric.
struct TransportConfig {
  double dx = 0.05;
  double dt = 0.02;
  ParameterBox mu_box;  // default [0.5, 1]

  TransportConfig();

  int Nx() const;
  int Nt() const;
  Index dim() const { return Index(Nx() + 1) * Index(Nt() + 1); }
  Index unknown_index(int n, int i) const { return Index(n) * (Nx() + 1) + i; }
};

/// Affine model of the transport benchmark: Q = 3 with Theta = (1, mu, mu^2)
/// from the split B = B0 + mu B1, Q' = 2 with gamma = (1, mu), output
/// l selecting the last space-time unknown.
AffineModel build_transport(const TransportConfig& cfg);

/// Independent oracle: sequential time marching of the upwind scheme,
/// solving each implicit step by forward substitution. Never assembles B.
Vector transport_time_march(const TransportConfig& cfg,
                            const ParameterPoint& mu);

/// 1-D affine-diffusion stand-in for the elliptic case: Poisson-type system
/// on grid_n interior nodes, piecewise-constant diffusion coefficient mu_q
/// on `blocks` equal blocks, constant load, output = mean value over the
/// last block. Symmetric and coercive for positive mu.
struct DiffusionConfig {
  int blocks = 3;
  int grid_n = 60;
  ParameterBox mu_box;  // default [0.1, 10]^blocks

  DiffusionConfig();
  DiffusionConfig(int blocks_, int grid_n_);
};

AffineModel build_diffusion(const DiffusionConfig& cfg);

}  // namespace rb
