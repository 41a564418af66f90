#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "rbbound/errors.hpp"

namespace rb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// A parameter tuple in R^p.
struct ParameterPoint {
  Vector coords;

  Index dim() const { return coords.size(); }
  double operator[](Index i) const { return coords[i]; }
};

/// Axis-aligned parameter box endowed with the per-coordinate uniform law.
class ParameterBox {
 public:
  ParameterBox() = default;
  ParameterBox(Vector lo, Vector hi);

  Index dim() const { return lo_.size(); }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }

  bool contains(const ParameterPoint& mu) const;
  void require_inside(const ParameterPoint& mu) const;

  /// One uniform draw. The generator is passed by reference so that
  /// consecutive draws form a reproducible stream.
  ParameterPoint sample(std::mt19937_64& rng) const;

  /// sample_size independent uniform draws from a fresh seeded stream.
  std::vector<ParameterPoint> sample_many(int sample_size,
                                          std::uint64_t seed) const;

  double measure() const { return (hi_ - lo_).prod(); }

 private:
  Vector lo_, hi_;
};

/// Partition of a ParameterBox into axis-aligned cells. Cells are produced
/// as a uniform grid, cells_per_dim subdivisions along every coordinate.
/// Boundary ties resolve to the lower-index cell.
class Partition {
 public:
  struct Cell {
    Vector lo, hi;
  };

  Partition() = default;

  static Partition uniform_grid(const ParameterBox& box, int cells_per_dim);
  static Partition uniform_grid(const ParameterBox& box,
                                const std::vector<int>& cells_per_dim);
  /// Rebuild from explicit cells (deserialization); covering is re-checked.
  static Partition from_cells(const ParameterBox& box, std::vector<Cell> cells);

  int size() const { return static_cast<int>(cells_.size()); }
  const Cell& cell(int k) const { return cells_.at(static_cast<size_t>(k)); }
  const std::vector<Cell>& cells() const { return cells_; }
  const ParameterBox& box() const { return box_; }

  /// Index k(mu) of the unique cell containing mu.
  int cell_of(const ParameterPoint& mu) const;

 private:
  ParameterBox box_;
  std::vector<Cell> cells_;

  void check_covering() const;
};

}  // namespace rb
