#pragma once

#include "gmt/geometry.hpp"
#include "gmt/poly_set.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace gmt {

/// Indicator of a set on a regular grid of cubes of side h. Cell (i, j, k)
/// has its center at origin + (i + 1/2, j + 1/2, k + 1/2) h; storage is
/// row-major with the first axis fastest. In two dimensions dims[2] == 1.
class VoxelSet {
 public:
  VoxelSet() = default;
  VoxelSet(int n, std::array<int, 3> dims, const Vec& origin, double h);

  int dim() const { return n_; }
  const std::array<int, 3>& dims() const { return dims_; }
  const Vec& origin() const { return origin_; }
  double spacing() const { return h_; }
  size_t size() const { return cells_.size(); }

  size_t index(int i, int j, int k = 0) const {
    return static_cast<size_t>(i) + static_cast<size_t>(dims_[0]) * (static_cast<size_t>(j) + static_cast<size_t>(dims_[1]) * static_cast<size_t>(k));
  }
  std::array<int, 3> coords(size_t idx) const;
  bool in_grid(int i, int j, int k = 0) const {
    return i >= 0 && j >= 0 && k >= 0 && i < dims_[0] && j < dims_[1] && k < dims_[2];
  }
  /// Cells outside the grid read as empty.
  bool get(int i, int j, int k = 0) const { return in_grid(i, j, k) && cells_[index(i, j, k)] != 0; }
  void set(int i, int j, int k, bool value) { cells_[index(i, j, k)] = value ? 1 : 0; }
  std::vector<std::uint8_t>& cells() { return cells_; }
  const std::vector<std::uint8_t>& cells() const { return cells_; }

  Vec center(int i, int j, int k = 0) const;
  Vec center(size_t idx) const;
  /// Grid coordinates of the cell containing p (may lie outside the grid).
  std::array<int, 3> cell_of(const Vec& p) const;

  size_t count() const;
  double cell_volume() const { return std::pow(h_, n_); }
  double volume() const { return static_cast<double>(count()) * cell_volume(); }
  bool contains(const Vec& p) const;
  /// |E ∩ B| by counting cell centers inside the ball.
  double volume_in(const Ball& ball) const;
  Box bounds() const;

  /// True when every cell touching the grid border is empty.
  bool has_margin() const;
  VoxelSet padded(int cells) const;

  bool operator==(const VoxelSet& o) const {
    return n_ == o.n_ && dims_ == o.dims_ && origin_ == o.origin_ && h_ == o.h_ && cells_ == o.cells_;
  }

 private:
  int n_ = 2;
  std::array<int, 3> dims_{0, 0, 1};
  Vec origin_ = Vec::Zero();
  double h_ = 1.0;
  std::vector<std::uint8_t> cells_;
};

/// Cell set iff its center lies inside s (even-odd rule). The grid is aligned
/// to integer multiples of h and padded by `pad` empty cells on every side.
VoxelSet rasterize(const PolyCurveSet& s, double h, int pad = 2);

/// Cells whose centers satisfy `inside`, over the h-aligned grid covering
/// `box` plus `pad` cells.
VoxelSet rasterize_implicit(const std::function<bool(const Vec&)>& inside, const Box& box, int n, double h,
                            int pad = 2);

}  // namespace gmt
