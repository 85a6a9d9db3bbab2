#pragma once

#include "gmt/cut.hpp"
#include "gmt/discrete_set.hpp"
#include "gmt/excess.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gmt {

/// Result of re-optimizing a voxel set inside B_r(x).
///
/// F minimizes the cut metric among sets equal to E outside the ball (the
/// inclusion-minimal minimizer, so ties go to the complement). The reported
/// gap measures the improvement with the mesh Phi-perimeter of the smoothed
/// extractions of E and F,
///   gap = max(0, P_Phi(E, W) - P_Phi(F, W)) / r^{n-1},  W = B_{r + 2h + 3 sigma}(x),
/// while gap_cut is the same difference in the cut metric itself.
struct Competitor {
  VoxelSet f;
  double gap = 0.0;
  double gap_cut = 0.0;
  size_t free_cells = 0;
  std::int64_t cost_e = 0;  // quantized cut cost of the edges touching free cells
  std::int64_t cost_f = 0;
};

/// Throws DomainError when B_r(x) leaves the grid.
Competitor local_optimal_competitor(const VoxelSet& e, const Vec& x, double r, const CutGraphSpec& spec,
                                    double smoothing);
/// Exhaustive enumeration over at most 22 free cells (InputError beyond).
Competitor brute_force_competitor(const VoxelSet& e, const Vec& x, double r, const CutGraphSpec& spec,
                                  double smoothing);

struct LambdaSample {
  Vec x = Vec::Zero();
  double r = 0.0;
  double gap = 0.0;
  double gap_cut = 0.0;
};

struct LambdaCertificate {
  int n = 2;
  std::vector<LambdaSample> samples;
  double lambda_hat = 0.0;
  double r0 = 0.0;
  double metrication_bound = 0.0;
  int order = 8;
  std::string note;
};

/// The dyadic radii 2^-j <= r0, largest first, stopping above `r_min`.
std::vector<double> dyadic_radii(double r0, double r_min);

/// Gaps at every (point, radius) pair; lambda_hat is the largest. Radii above
/// r0 are rejected.
LambdaCertificate certify_lambda(const DiscreteSet& e, const CutGraphSpec& spec, double r0,
                                 const std::vector<Vec>& points, const std::vector<double>& radii, int threads = 1);

/// Columns `x,y[,z],r,gap`, closed by `LAMBDA_HAT,<value>,R0,<value>`.
void write_certificate_csv(std::ostream& out, const LambdaCertificate& c);

/// Global minimizer of cut perimeter + |F Δ E0| / kappa by one min cut.
/// Border cells stay empty.
VoxelSet polish(const VoxelSet& e0, double kappa, const CutGraphSpec& spec);

struct SingularScanReport {
  int n = 2;
  double epsilon = 0.0;
  std::vector<Vec> candidates;
  std::vector<double> deepest_radius;
  size_t scanned = 0;
};

/// Boundary points whose excess exceeds epsilon at every trusted scale of
/// their multiscale scan. Points are subsampled facet centroids plus, for
/// polygons, every vertex.
SingularScanReport singular_scan(const DiscreteSet& e, double epsilon, double theta, double r0, int k_max,
                                 size_t max_points = 4096, int threads = 1);

/// Columns `x,y[,z],deepest_r`.
void write_singular_csv(std::ostream& out, const SingularScanReport& r);

}  // namespace gmt
