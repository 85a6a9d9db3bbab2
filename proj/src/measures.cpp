#include "gmt/measures.hpp"

#include "gmt/parallel.hpp"
#include "gmt/text.hpp"

#include <algorithm>
#include <ostream>

namespace gmt {

double perimeter(const BoundaryPatch& b, const std::optional<Region>& region) {
  if (!region) return b.total_measure();
  return clip_to_region(b, *region).total_measure();
}

double perimeter_phi(const BoundaryPatch& b, const Anisotropy& a, const std::optional<Region>& region) {
  const BoundaryPatch clipped = region ? clip_to_region(b, *region) : b;
  double s = 0.0;
  for (const Facet& f : clipped.facets()) s += a.phi(f.centroid, f.normal) * f.measure;
  return s;
}

double equator_measure(int n) { return unit_ball_volume(n - 1); }

DensityThresholds DensityThresholds::defaults(int n) {
  DensityThresholds t;
  t.volume_min = 0.05 * unit_ball_volume(n);
  t.perimeter_lo = 0.2 * equator_measure(n);
  t.perimeter_hi = 10.0 * equator_measure(n);
  return t;
}

DensityReport density_check(const DiscreteSet& e, const std::vector<Vec>& points, const std::vector<double>& radii,
                            const DensityThresholds& thresholds, int threads) {
  const int n = e.dim();
  for (double r : radii)
    if (!(r > 0.0)) throw InputError("density radii must be positive");
  for (const Vec& x : points) {
    e.require_near_boundary(x);
    for (double r : radii) e.require_inside_domain(Ball{x, r});
  }
  DensityReport rep;
  rep.n = n;
  rep.thresholds = thresholds;
  rep.samples.resize(points.size() * radii.size());
  parallel_for(rep.samples.size(), threads, [&](size_t i) {
    DensitySample& s = rep.samples[i];
    s.x = points[i / radii.size()];
    s.r = radii[i % radii.size()];
    const Ball ball{s.x, s.r};
    const double inside = e.volume_in(ball);
    const double full = unit_ball_volume(n) * std::pow(s.r, n);
    s.volume_ratio = std::max(0.0, std::min(inside, full - inside)) / std::pow(s.r, n);
    s.perimeter_ratio = perimeter(e.boundary(), Region{ball}) / std::pow(s.r, n - 1);
  });
  rep.c_vol_min = std::numeric_limits<double>::infinity();
  rep.c_per_min = std::numeric_limits<double>::infinity();
  rep.c_per_max = 0.0;
  for (DensitySample& s : rep.samples) {
    s.flagged = s.volume_ratio < thresholds.volume_min || s.perimeter_ratio < thresholds.perimeter_lo ||
                s.perimeter_ratio > thresholds.perimeter_hi;
    rep.passed = rep.passed && !s.flagged;
    rep.c_vol_min = std::min(rep.c_vol_min, s.volume_ratio);
    rep.c_per_min = std::min(rep.c_per_min, s.perimeter_ratio);
    rep.c_per_max = std::max(rep.c_per_max, s.perimeter_ratio);
  }
  if (rep.samples.empty()) rep.c_vol_min = rep.c_per_min = 0.0;
  return rep;
}

std::vector<Vec> sample_boundary_points(const BoundaryPatch& b, size_t count, std::uint64_t seed) {
  std::vector<Vec> out;
  if (b.empty() || count == 0) return out;
  const size_t stride = std::max<size_t>(1, b.size() / count);
  for (size_t i = seed % stride; i < b.size() && out.size() < count; i += stride) out.push_back(b.facets()[i].centroid);
  return out;
}

void write_density_csv(std::ostream& out, const DensityReport& report) {
  const int n = report.n;
  out << "x,y" << (n == 3 ? ",z" : "") << ",r,vol_ratio,per_ratio,flag\n";
  for (const DensitySample& s : report.samples) {
    for (int a = 0; a < n; ++a) out << text::fmt(s.x[a]) << ",";
    out << text::fmt(s.r) << "," << text::fmt(s.volume_ratio) << "," << text::fmt(s.perimeter_ratio) << ","
        << (s.flagged ? 1 : 0) << "\n";
  }
}

}  // namespace gmt
