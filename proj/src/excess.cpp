#include "gmt/excess.hpp"

#include "gmt/text.hpp"

#include <ostream>

namespace gmt {

namespace {

constexpr size_t kMinTrustedFacets = 8;

Vec default_axis(int n) { return n == 2 ? Vec::UnitY() : Vec::UnitZ(); }

}  // namespace

DirectionFit spherical_excess(const BoundaryPatch& b, const Vec& x, double r) {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  const int n = b.dim();
  const BoundaryPatch clipped = clip_to_region(b, Ball{x, r});
  DirectionFit fit;
  fit.nu_opt = default_axis(n);
  fit.facet_count = clipped.size();
  fit.mass = clipped.total_measure();
  fit.mean_normal = clipped.mean_normal();
  if (clipped.empty() || !(fit.mass > 0.0)) {
    fit.flags |= kNoBoundary;
    return fit;
  }
  const double scale = std::pow(r, n - 1);
  const double m = fit.mean_normal.norm();
  if (m <= 1e-12 * fit.mass) {
    fit.flags |= kTie;
    fit.excess = fit.mass / scale;
    return fit;
  }
  fit.nu_opt = fit.mean_normal / m;
  fit.excess = std::max(0.0, fit.mass - m) / scale;
  return fit;
}

DirectionFit spherical_excess(const DiscreteSet& e, const Vec& x, double r) {
  e.require_inside_domain(Ball{x, r});
  return spherical_excess(e.boundary(), x, r);
}

CylinderMeasure cylindrical_excess(const BoundaryPatch& b, const Vec& x, double r, const Vec& nu) {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  const int n = b.dim();
  const Vec axis = unit(nu, n);
  const BoundaryPatch clipped = clip_to_region(b, Cylinder{x, r, axis});
  CylinderMeasure out;
  if (clipped.empty()) {
    out.flags |= kNoBoundary;
    return out;
  }
  double s = 0.0;
  for (const Facet& f : clipped.facets()) {
    s += std::max(0.0, 1.0 - axis.dot(f.normal)) * f.measure;
    out.mass += f.measure;
  }
  out.value = s / std::pow(r, n - 1);
  return out;
}

CylinderMeasure cylindrical_excess(const DiscreteSet& e, const Vec& x, double r, const Vec& nu) {
  e.require_inside_domain(Cylinder{x, r, unit(nu, e.dim())});
  return cylindrical_excess(e.boundary(), x, r, nu);
}

double flatness_at_offset(const BoundaryPatch& b, const Vec& x, double r, const Vec& nu, double offset) {
  const int n = b.dim();
  const Vec axis = unit(nu, n);
  const BoundaryPatch clipped = clip_to_region(b, Cylinder{x, r, axis});
  double s = 0.0;
  for (const Facet& f : clipped.facets()) {
    std::array<double, 4> heights{};
    for (int i = 0; i < f.nv; ++i) heights[static_cast<size_t>(i)] = (f.v[static_cast<size_t>(i)] - x).dot(axis) - offset;
    s += f.integrate_square(heights);
  }
  return s / std::pow(r, n + 1);
}

Flatness flatness(const BoundaryPatch& b, const Vec& x, double r, const Vec& nu) {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  const int n = b.dim();
  const Vec axis = unit(nu, n);
  const BoundaryPatch clipped = clip_to_region(b, Cylinder{x, r, axis});
  Flatness out;
  double mass = 0.0, moment = 0.0;
  for (const Facet& f : clipped.facets()) {
    mass += f.measure;
    moment += (f.centroid - x).dot(axis) * f.measure;
  }
  if (!(mass > 0.0)) {
    out.flags |= kNoBoundary;
    return out;
  }
  out.h_opt = moment / mass;
  double s = 0.0;
  for (const Facet& f : clipped.facets()) {
    std::array<double, 4> heights{};
    for (int i = 0; i < f.nv; ++i)
      heights[static_cast<size_t>(i)] = (f.v[static_cast<size_t>(i)] - x).dot(axis) - out.h_opt;
    s += f.integrate_square(heights);
  }
  out.value = s / std::pow(r, n + 1);
  return out;
}

Flatness flatness(const DiscreteSet& e, const Vec& x, double r, const Vec& nu) {
  e.require_inside_domain(Cylinder{x, r, unit(nu, e.dim())});
  return flatness(e.boundary(), x, r, nu);
}

ScaleScan multiscale_scan(const DiscreteSet& e, const Vec& x, double theta, double r0, int k_max) {
  if (!(theta > 0.0 && theta < 1.0)) throw InputError("theta must lie in (0, 1)");
  if (k_max < 1) throw InputError("k_max must be >= 1");
  if (!(r0 > 0.0)) throw InputError("r0 must be positive");
  e.require_near_boundary(x);
  ScaleScan scan;
  scan.x = x;
  scan.theta = theta;
  const bool extracted = e.boundary().provenance() == Provenance::extracted;
  double r = r0;
  for (int k = 0; k <= k_max; ++k, r *= theta) {
    const DirectionFit fit = spherical_excess(e, x, r);
    ScaleEntry entry;
    entry.k = k;
    entry.r = r;
    entry.excess = fit.excess;
    entry.nu = fit.nu_opt;
    entry.flags = fit.flags;
    if (extracted && fit.facet_count < kMinTrustedFacets) entry.flags |= kEarlyStop;
    if (!(entry.flags & kNoBoundary)) {
      entry.flatness = flatness(e.boundary(), x, r, fit.nu_opt).value;
      entry.cyl_excess = cylindrical_excess(e.boundary(), x, r, fit.nu_opt).value;
    }
    scan.entries.push_back(entry);
    if (!entry.trusted()) {
      scan.early_stop = true;
      break;
    }
    ++scan.trusted;
    scan.sup_excess = std::max(scan.sup_excess, entry.excess);
  }
  return scan;
}

void write_scan_csv(std::ostream& out, const std::vector<ScaleScan>& scans, int n) {
  out << "x,y" << (n == 3 ? ",z" : "") << ",k,r,excess,nu_x,nu_y" << (n == 3 ? ",nu_z" : "")
      << ",flatness,cyl_excess,flags\n";
  for (const ScaleScan& s : scans) {
    for (const ScaleEntry& e : s.entries) {
      for (int a = 0; a < n; ++a) out << text::fmt(s.x[a]) << ",";
      out << e.k << "," << text::fmt(e.r) << "," << text::fmt(e.excess) << ",";
      for (int a = 0; a < n; ++a) out << text::fmt(e.nu[a]) << ",";
      out << text::fmt(e.flatness) << "," << text::fmt(e.cyl_excess) << "," << e.flags << "\n";
    }
  }
}

}  // namespace gmt
