#pragma once

#include "gmt/boundary.hpp"
#include "gmt/discrete_set.hpp"

#include <iosfwd>
#include <vector>

namespace gmt {

enum ExcessFlag : unsigned {
  kNoBoundary = 1u,   // no boundary inside the region
  kTie = 2u,          // mean normal vanishes; nu_opt is arbitrary
  kEarlyStop = 4u,    // fewer than 8 extracted facets: scale not trusted
  kNonManifold = 8u,  // extracted boundary not a manifold in the ball
};

/// Best constant direction for the normals in B_r(x) and the resulting
/// spherical excess (mass - |m|) / r^{n-1}.
struct DirectionFit {
  Vec nu_opt = Vec::UnitY();
  double excess = 0.0;
  double mass = 0.0;
  Vec mean_normal = Vec::Zero();
  size_t facet_count = 0;
  unsigned flags = 0;
};

DirectionFit spherical_excess(const BoundaryPatch& b, const Vec& x, double r);
/// Checks that the ball fits in the voxel domain before measuring.
DirectionFit spherical_excess(const DiscreteSet& e, const Vec& x, double r);

struct CylinderMeasure {
  double value = 0.0;
  double mass = 0.0;
  unsigned flags = 0;
};

/// (1 / r^{n-1}) * sum over facets clipped to C_nu(x, r) of (1 - nu . nu_E) * measure.
CylinderMeasure cylindrical_excess(const BoundaryPatch& b, const Vec& x, double r, const Vec& nu);
CylinderMeasure cylindrical_excess(const DiscreteSet& e, const Vec& x, double r, const Vec& nu);

struct Flatness {
  double value = 0.0;
  double h_opt = 0.0;
  unsigned flags = 0;
};

/// L2 distance to the best plane orthogonal to nu inside C_nu(x, r),
/// normalized by r^{n+1}. The optimal offset is the measure-weighted mean
/// height; the squared heights are integrated exactly over each facet.
Flatness flatness(const BoundaryPatch& b, const Vec& x, double r, const Vec& nu);
Flatness flatness(const DiscreteSet& e, const Vec& x, double r, const Vec& nu);
/// The flatness objective for a fixed offset (for optimality checks).
double flatness_at_offset(const BoundaryPatch& b, const Vec& x, double r, const Vec& nu, double offset);

struct ScaleEntry {
  int k = 0;
  double r = 0.0;
  double excess = 0.0;
  Vec nu = Vec::Zero();
  double flatness = 0.0;
  double cyl_excess = 0.0;
  unsigned flags = 0;
  bool trusted() const { return (flags & (kEarlyStop | kNoBoundary)) == 0; }
};

struct ScaleScan {
  Vec x = Vec::Zero();
  double theta = 0.5;
  std::vector<ScaleEntry> entries;
  double sup_excess = 0.0;  // over trusted entries
  int trusted = 0;
  bool early_stop = false;
};

/// Entries at r_k = theta^k r0 for k = 0..k_max. On extracted boundaries the
/// scan stops at the first ball holding fewer than 8 facets and flags that
/// entry; exact boundaries are trusted at every scale.
ScaleScan multiscale_scan(const DiscreteSet& e, const Vec& x, double theta, double r0, int k_max);

/// Columns `x,y[,z],k,r,excess,nu_x,nu_y[,nu_z],flatness,cyl_excess,flags`.
void write_scan_csv(std::ostream& out, const std::vector<ScaleScan>& scans, int n);

}  // namespace gmt
