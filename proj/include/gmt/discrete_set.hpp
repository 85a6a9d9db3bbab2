#pragma once

#include "gmt/boundary.hpp"
#include "gmt/poly_set.hpp"
#include "gmt/voxel_set.hpp"

#include <variant>

namespace gmt {

/// A set of finite perimeter together with its reduced boundary: either an
/// exact polygonal region (n = 2) or a voxel indicator whose boundary is
/// extracted once at construction.
class DiscreteSet {
 public:
  static DiscreteSet from_poly(PolyCurveSet s);
  /// `smoothing` is a length in [0, 4h].
  static DiscreteSet from_voxels(VoxelSet v, double smoothing);

  int dim() const;
  bool is_exact() const { return std::holds_alternative<PolyCurveSet>(rep_); }
  const PolyCurveSet* poly() const { return std::get_if<PolyCurveSet>(&rep_); }
  const VoxelSet* voxels() const { return std::get_if<VoxelSet>(&rep_); }
  const BoundaryPatch& boundary() const { return boundary_; }

  bool contains(const Vec& p) const;
  double volume_in(const Ball& ball) const;
  /// Grid spacing, or 0 for the exact representation.
  double resolution() const;
  double smoothing() const { return boundary_.smoothing(); }
  /// Largest accepted distance between a query point and the boundary.
  double boundary_tolerance() const;
  /// Domain box: the voxel grid, or the polygon bounds (unbounded use allowed).
  Box bounds() const;

  double distance_to_boundary(const Vec& p, double search_radius) const;
  /// Throws DomainError when p is farther than boundary_tolerance() from the boundary.
  void require_near_boundary(const Vec& p) const;
  /// Throws DomainError when a voxel set's grid does not contain the region.
  void require_inside_domain(const Region& region) const;

 private:
  std::variant<PolyCurveSet, VoxelSet> rep_;
  BoundaryPatch boundary_;
};

}  // namespace gmt
