#pragma once

#include "gmt/anisotropy.hpp"
#include "gmt/voxel_set.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace gmt {

/// Graph-cut discretization of the Phi-perimeter on a voxel lattice.
///
/// Each undirected neighbor family k (lattice offset e_k, counted once per
/// +-pair) gets weight h^{n-1} M_k / |e_k| times the modulation factor at the
/// edge midpoint. M_k is the Cauchy-Crofton mass of the directions d on the
/// sphere whose image A^{1/2} d is closest to +-e_k:
///   M_k = c_n * integral of |A^{1/2} d| over that cell, c_2 = 1/4, c_3 = 1/(2 pi),
/// so that sum_k M_k |e_k / |e_k| . nu| approximates Phi(nu).
struct CutGraphSpec {
  int n = 2;
  int order = 8;
  double h = 1.0;
  std::vector<std::array<int, 3>> offsets;
  std::vector<double> crofton;  // M_k / |e_k|
  std::optional<Anisotropy> anisotropy;
  /// max over nu of |sum_k M_k |e_hat_k . nu| - Phi(nu)| / Phi(nu).
  double metrication_bound = 0.0;
  /// Integer units per unit of weight; shared by every solver on this spec.
  double scale = 1.0;

  double weight(size_t k, const Vec& midpoint) const;
  std::int64_t quantized(size_t k, const Vec& midpoint) const;
  /// Continuum-normalized cut density for a plane with normal nu.
  double density(const Vec& nu) const;
};

/// Orders: 4, 8, 16 (n = 2) or 6, 26, 98 (n = 3). Throws InputError otherwise.
CutGraphSpec cut_weights(const Anisotropy& a, double h, int order);

/// Total weight of edges between set and empty cells; cells outside the grid
/// count as empty. With `only` set, just the edges touching a flagged cell.
double cut_value(const VoxelSet& f, const CutGraphSpec& spec, const std::vector<char>* only = nullptr);

}  // namespace gmt
