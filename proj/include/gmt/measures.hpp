#pragma once

#include "gmt/anisotropy.hpp"
#include "gmt/boundary.hpp"
#include "gmt/discrete_set.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gmt {

/// Sum of facet measures, after clipping to `region` when given.
double perimeter(const BoundaryPatch& b, const std::optional<Region>& region = std::nullopt);

/// Sum of Phi(centroid, normal) * measure over the (clipped) facets.
double perimeter_phi(const BoundaryPatch& b, const Anisotropy& a,
                     const std::optional<Region>& region = std::nullopt);

/// (n-1)-volume of the unit ball in R^{n-1}: 2 for n = 2, pi for n = 3.
double equator_measure(int n);

struct DensityThresholds {
  double volume_min = 0.0;
  double perimeter_lo = 0.0;
  double perimeter_hi = 0.0;

  /// volume_ratio >= 0.05 omega_n, perimeter_ratio in [0.2, 10] omega_{n-1}.
  static DensityThresholds defaults(int n);
};

struct DensitySample {
  Vec x = Vec::Zero();
  double r = 0.0;
  double volume_ratio = 0.0;     // min(|E ∩ B_r|, |B_r \ E|) / r^n
  double perimeter_ratio = 0.0;  // P(E, B_r) / r^{n-1}
  bool flagged = false;
};

struct DensityReport {
  int n = 2;
  std::vector<DensitySample> samples;
  double c_vol_min = 0.0;
  double c_per_min = 0.0;
  double c_per_max = 0.0;
  DensityThresholds thresholds;
  bool passed = true;
};

/// Density ratios at every (point, radius) pair. Points must lie within the
/// set's boundary tolerance of the boundary (DomainError otherwise); for voxel
/// sets each ball must fit inside the grid.
DensityReport density_check(const DiscreteSet& e, const std::vector<Vec>& points, const std::vector<double>& radii,
                            const DensityThresholds& thresholds, int threads = 1);

/// Facet centroids taken every k-th facet with k = max(1, size / count) and a
/// seed-dependent offset in [0, k).
std::vector<Vec> sample_boundary_points(const BoundaryPatch& b, size_t count, std::uint64_t seed);

/// Columns `x,y[,z],r,vol_ratio,per_ratio,flag`.
void write_density_csv(std::ostream& out, const DensityReport& report);

}  // namespace gmt
