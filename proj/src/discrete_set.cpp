#include "gmt/discrete_set.hpp"

#include "gmt/extract.hpp"

#include <sstream>

namespace gmt {

DiscreteSet DiscreteSet::from_poly(PolyCurveSet s) {
  DiscreteSet d;
  d.boundary_ = boundary_of_poly(s);
  d.rep_ = std::move(s);
  return d;
}

DiscreteSet DiscreteSet::from_voxels(VoxelSet v, double smoothing) {
  if (!v.has_margin()) v = v.padded(1);
  DiscreteSet d;
  d.boundary_ = extract_boundary(v, smoothing);
  d.rep_ = std::move(v);
  return d;
}

int DiscreteSet::dim() const { return is_exact() ? 2 : voxels()->dim(); }

bool DiscreteSet::contains(const Vec& p) const {
  return std::visit([&](const auto& s) { return s.contains(p); }, rep_);
}

double DiscreteSet::volume_in(const Ball& ball) const {
  if (const auto* p = poly()) return p->area_in_disk(ball.center, ball.radius);
  return voxels()->volume_in(ball);
}

double DiscreteSet::resolution() const { return is_exact() ? 0.0 : voxels()->spacing(); }

double DiscreteSet::boundary_tolerance() const {
  if (const auto* v = voxels()) return v->spacing();
  const Box b = poly()->bounds();
  return b.empty() ? 1e-9 : 1e-6 * std::max((b.hi - b.lo).norm(), 1.0);
}

Box DiscreteSet::bounds() const {
  return std::visit([](const auto& s) { return s.bounds(); }, rep_);
}

double DiscreteSet::distance_to_boundary(const Vec& p, double search_radius) const {
  return distance_to_facets(boundary_, p, search_radius);
}

void DiscreteSet::require_near_boundary(const Vec& p) const {
  const double tol = boundary_tolerance();
  if (!(distance_to_boundary(p, 2.0 * tol + 1e-12) <= tol)) {
    std::ostringstream os;
    os << "point (" << p.head(dim()).transpose() << ") is farther than " << tol << " from the boundary";
    throw DomainError(os.str());
  }
}

void DiscreteSet::require_inside_domain(const Region& region) const {
  const auto* v = voxels();
  if (!v) return;
  const Box r = region_bounds(region, v->dim());
  const Box g = v->bounds();
  for (int a = 0; a < v->dim(); ++a) {
    if (r.lo[a] < g.lo[a] || r.hi[a] > g.hi[a]) {
      std::ostringstream os;
      os << "region around (" << std::visit([](const auto& x) { return Vec(x.center); }, region).head(v->dim()).transpose()
         << ") leaves the voxel domain";
      throw DomainError(os.str());
    }
  }
}

}  // namespace gmt
