#include "rbbound/parameter.hpp"

#include <cmath>
#include <sstream>

namespace rb {

namespace {

std::string point_to_string(const ParameterPoint& mu) {
  std::ostringstream os;
  os << "(";
  for (Index i = 0; i < mu.dim(); ++i) {
    if (i) os << ", ";
    os << mu.coords[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

ParameterBox::ParameterBox(Vector lo, Vector hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size())
    throw ContractError("ParameterBox: lo and hi dimensions differ");
  for (Index i = 0; i < lo_.size(); ++i)
    if (!(lo_[i] < hi_[i]))
      throw ContractError("ParameterBox: lo[i] < hi[i] violated at i=" +
                          std::to_string(i));
}

bool ParameterBox::contains(const ParameterPoint& mu) const {
  if (mu.dim() != dim()) return false;
  for (Index i = 0; i < dim(); ++i)
    if (mu.coords[i] < lo_[i] || mu.coords[i] > hi_[i]) return false;
  return true;
}

void ParameterBox::require_inside(const ParameterPoint& mu) const {
  if (mu.dim() != dim())
    throw ContractError("parameter dimension " + std::to_string(mu.dim()) +
                        " does not match box dimension " +
                        std::to_string(dim()));
  if (!contains(mu))
    throw DomainError("parameter " + point_to_string(mu) +
                      " lies outside the parameter box");
}

ParameterPoint ParameterBox::sample(std::mt19937_64& rng) const {
  Vector c(dim());
  for (Index i = 0; i < dim(); ++i) {
    std::uniform_real_distribution<double> dist(lo_[i], hi_[i]);
    c[i] = dist(rng);
  }
  return ParameterPoint{std::move(c)};
}

std::vector<ParameterPoint> ParameterBox::sample_many(
    int sample_size, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<ParameterPoint> out;
  out.reserve(static_cast<size_t>(sample_size));
  for (int j = 0; j < sample_size; ++j) out.push_back(sample(rng));
  return out;
}

Partition Partition::uniform_grid(const ParameterBox& box, int cells_per_dim) {
  return uniform_grid(
      box, std::vector<int>(static_cast<size_t>(box.dim()), cells_per_dim));
}

Partition Partition::uniform_grid(const ParameterBox& box,
                                  const std::vector<int>& cells_per_dim) {
  if (static_cast<Index>(cells_per_dim.size()) != box.dim())
    throw ContractError("Partition: cells_per_dim size mismatch");
  for (int c : cells_per_dim)
    if (c < 1) throw ContractError("Partition: cells_per_dim must be >= 1");

  Partition part;
  part.box_ = box;
  const Index p = box.dim();

  // Cartesian product of per-dimension subdivisions, lowest dimension fastest.
  std::vector<int> idx(static_cast<size_t>(p), 0);
  while (true) {
    Cell cell;
    cell.lo.resize(p);
    cell.hi.resize(p);
    for (Index d = 0; d < p; ++d) {
      const double w =
          (box.hi()[d] - box.lo()[d]) / cells_per_dim[static_cast<size_t>(d)];
      cell.lo[d] = box.lo()[d] + idx[static_cast<size_t>(d)] * w;
      cell.hi[d] = box.lo()[d] + (idx[static_cast<size_t>(d)] + 1) * w;
    }
    // Snap outer faces to the box to avoid rounding gaps.
    for (Index d = 0; d < p; ++d) {
      if (idx[static_cast<size_t>(d)] == 0) cell.lo[d] = box.lo()[d];
      if (idx[static_cast<size_t>(d)] ==
          cells_per_dim[static_cast<size_t>(d)] - 1)
        cell.hi[d] = box.hi()[d];
    }
    part.cells_.push_back(std::move(cell));

    Index d = 0;
    for (; d < p; ++d) {
      if (++idx[static_cast<size_t>(d)] < cells_per_dim[static_cast<size_t>(d)])
        break;
      idx[static_cast<size_t>(d)] = 0;
    }
    if (d == p) break;
  }
  part.check_covering();
  return part;
}

Partition Partition::from_cells(const ParameterBox& box,
                                std::vector<Cell> cells) {
  Partition part;
  part.box_ = box;
  part.cells_ = std::move(cells);
  part.check_covering();
  return part;
}

void Partition::check_covering() const {
  double total = 0.0;
  for (const Cell& c : cells_) {
    for (Index d = 0; d < box_.dim(); ++d) {
      if (c.lo[d] < box_.lo()[d] - 1e-12 || c.hi[d] > box_.hi()[d] + 1e-12)
        throw ContractError("Partition: cell escapes the box");
    }
    total += (c.hi - c.lo).prod();
  }
  const double box_measure = box_.measure();
  if (std::abs(total - box_measure) > 1e-9 * box_measure)
    throw ContractError("Partition: cell measures do not sum to the box");
}

int Partition::cell_of(const ParameterPoint& mu) const {
  box_.require_inside(mu);
  for (int k = 0; k < size(); ++k) {
    const Cell& c = cells_[static_cast<size_t>(k)];
    bool inside = true;
    for (Index d = 0; d < box_.dim() && inside; ++d)
      inside = mu.coords[d] >= c.lo[d] && mu.coords[d] <= c.hi[d];
    if (inside) return k;  // boundary ties go to the lower index
  }
  throw DomainError("parameter lies outside every partition cell");
}

}  // namespace rb
