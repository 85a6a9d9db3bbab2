#pragma once

#include "gmt/boundary.hpp"
#include "gmt/geometry.hpp"

#include <vector>

namespace gmt {

using Loop = std::vector<Eigen::Vector2d>;

/// An exact planar region bounded by simple, pairwise disjoint polygonal loops.
/// Outer loops run counter-clockwise and holes clockwise; the constructor
/// re-orients loops by nesting depth, so callers may pass either orientation.
class PolyCurveSet {
 public:
  PolyCurveSet() = default;
  /// Throws InputError for loops with fewer than 3 vertices, zero-length
  /// edges, self-intersections or crossings between loops.
  explicit PolyCurveSet(std::vector<Loop> loops);

  const std::vector<Loop>& loops() const { return loops_; }
  bool empty() const { return loops_.empty(); }
  size_t edge_count() const;

  /// Even-odd membership.
  bool contains(const Vec& p) const;
  double area() const;
  Box bounds() const;
  /// |E ∩ B_r(c)| computed exactly from signed triangle/disk pieces per edge.
  double area_in_disk(const Vec& center, double radius) const;

 private:
  std::vector<Loop> loops_;
};

double signed_area(const Loop& loop);

/// One facet per edge with the outward unit normal and the edge length.
BoundaryPatch boundary_of_poly(const PolyCurveSet& s);

}  // namespace gmt
