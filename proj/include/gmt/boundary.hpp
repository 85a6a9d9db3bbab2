#pragma once

#include "gmt/geometry.hpp"

#include <array>
#include <memory>
#include <vector>

namespace gmt {

/// A flat piece of the reduced boundary: a segment (n = 2) or a triangle or
/// planar quad (n = 3). `measure` is the H^{n-1} weight actually carried, which
/// can be smaller than the geometric area after area-fraction clipping in 3D.
struct Facet {
  std::array<Vec, 4> v{};
  int nv = 2;
  Vec centroid = Vec::Zero();
  Vec normal = Vec::Zero();
  double measure = 0.0;

  double geometric_measure() const;
  /// Integral of f(y)^2 over the facet for an affine f, given by its values at
  /// the vertices; scaled by measure / geometric_measure.
  double integrate_square(const std::array<double, 4>& vertex_values) const;
};

Facet make_segment(const Vec& a, const Vec& b, const Vec& normal);
Facet make_polygon_facet(std::initializer_list<Vec> verts, const Vec& normal);

enum class Provenance { exact, extracted };

class FacetIndex;

/// The extracted reduced boundary: facets with centroid, outward unit normal
/// and measure.
class BoundaryPatch {
 public:
  BoundaryPatch() = default;
  BoundaryPatch(int n, std::vector<Facet> facets, Provenance provenance, double smoothing = 0.0);

  int dim() const { return n_; }
  const std::vector<Facet>& facets() const { return facets_; }
  Provenance provenance() const { return provenance_; }
  double smoothing() const { return smoothing_; }
  bool empty() const { return facets_.empty(); }
  size_t size() const { return facets_.size(); }

  double total_measure() const;
  /// Sum of measure * normal; zero for a closed boundary.
  Vec mean_normal() const;

  /// Set when the boundary came from an empty or full voxel set.
  bool degenerate() const { return degenerate_; }
  void mark_degenerate() { degenerate_ = true; }

  /// Builds a bucket grid so that region queries touch only nearby facets.
  void build_index();
  bool indexed() const { return index_ != nullptr; }
  /// Indices of facets whose bounding box meets `box` (all facets without an index).
  std::vector<size_t> candidates(const Box& box) const;

 private:
  int n_ = 2;
  std::vector<Facet> facets_;
  Provenance provenance_ = Provenance::exact;
  double smoothing_ = 0.0;
  bool degenerate_ = false;
  std::shared_ptr<const FacetIndex> index_;
};

/// Facets of `b` restricted to `region`. In two dimensions segments are split
/// exactly at the region boundary; in three dimensions a facet keeps the
/// fraction of its measure estimated from 3 (triangle) or 4 (quad) interior
/// sample points.
BoundaryPatch clip_to_region(const BoundaryPatch& b, const Region& region);

/// Facets of `b` outside `region`; with clip_to_region this partitions the
/// measure exactly in two dimensions.
BoundaryPatch clip_outside(const BoundaryPatch& b, const Region& region);

/// Distance from `p` to the nearest facet within `search_radius`; +inf if none.
double distance_to_facets(const BoundaryPatch& b, const Vec& p, double search_radius);

}  // namespace gmt
