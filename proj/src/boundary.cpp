#include "gmt/boundary.hpp"

#include <algorithm>
#include <limits>

namespace gmt {

double Facet::geometric_measure() const {
  switch (nv) {
    case 2: return (v[1] - v[0]).norm();
    case 3: return 0.5 * (v[1] - v[0]).cross(v[2] - v[0]).norm();
    case 4:
      return 0.5 * (v[1] - v[0]).cross(v[2] - v[0]).norm() +
             0.5 * (v[2] - v[0]).cross(v[3] - v[0]).norm();
    default: return 0.0;
  }
}

double Facet::integrate_square(const std::array<double, 4>& f) const {
  auto tri = [](double area, double a, double b, double c) {
    return area / 6.0 * (a * a + b * b + c * c + a * b + b * c + a * c);
  };
  const double geo = geometric_measure();
  if (!(geo > 0.0)) return 0.0;
  double integral = 0.0;
  switch (nv) {
    case 2: integral = geo / 3.0 * (f[0] * f[0] + f[0] * f[1] + f[1] * f[1]); break;
    case 3: integral = tri(geo, f[0], f[1], f[2]); break;
    case 4: {
      const double a1 = 0.5 * (v[1] - v[0]).cross(v[2] - v[0]).norm();
      const double a2 = 0.5 * (v[2] - v[0]).cross(v[3] - v[0]).norm();
      integral = tri(a1, f[0], f[1], f[2]) + tri(a2, f[0], f[2], f[3]);
      break;
    }
    default: break;
  }
  return integral * (measure / geo);
}

Facet make_segment(const Vec& a, const Vec& b, const Vec& normal) {
  Facet f;
  f.v[0] = a;
  f.v[1] = b;
  f.nv = 2;
  f.centroid = 0.5 * (a + b);
  f.normal = normal;
  f.measure = (b - a).norm();
  return f;
}

Facet make_polygon_facet(std::initializer_list<Vec> verts, const Vec& normal) {
  Facet f;
  f.nv = static_cast<int>(verts.size());
  int i = 0;
  Vec c = Vec::Zero();
  for (const Vec& p : verts) {
    f.v[static_cast<size_t>(i++)] = p;
    c += p;
  }
  f.centroid = c / f.nv;
  f.normal = normal;
  f.measure = f.geometric_measure();
  return f;
}

namespace {

Box facet_box(const Facet& f) {
  Box b;
  for (int i = 0; i < f.nv; ++i) b.extend(f.v[static_cast<size_t>(i)]);
  return b;
}

}  // namespace

class FacetIndex {
 public:
  FacetIndex(const std::vector<Facet>& facets, int n) : n_(n) {
    for (const auto& f : facets) bounds_.extend(facet_box(f).lo), bounds_.extend(facet_box(f).hi);
    const Vec extent = (bounds_.hi - bounds_.lo).cwiseMax(1e-12);
    double max_facet = 0.0;
    for (const auto& f : facets) {
      const Box b = facet_box(f);
      max_facet = std::max(max_facet, (b.hi - b.lo).maxCoeff());
    }
    double vol = 1.0;
    for (int i = 0; i < n; ++i) vol *= extent[i];
    const double per_cell = std::pow(vol / std::max<size_t>(facets.size(), 1), 1.0 / n);
    cell_ = std::max({max_facet, per_cell, 1e-12});
    for (int i = 0; i < 3; ++i)
      dims_[static_cast<size_t>(i)] = i < n ? static_cast<int>(extent[i] / cell_) + 1 : 1;
    buckets_.resize(static_cast<size_t>(dims_[0]) * dims_[1] * dims_[2]);
    for (size_t id = 0; id < facets.size(); ++id) {
      const Box b = facet_box(facets[id]);
      visit(b, [&](size_t cell) { buckets_[cell].push_back(id); });
    }
  }

  std::vector<size_t> query(const Box& box) const {
    std::vector<size_t> out;
    visit(box, [&](size_t cell) { out.insert(out.end(), buckets_[cell].begin(), buckets_[cell].end()); });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  template <class F>
  void visit(const Box& box, F&& fn) const {
    std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int i = 0; i < 3; ++i) {
      const auto s = static_cast<size_t>(i);
      if (i >= n_) continue;
      lo[s] = std::max(0, static_cast<int>(std::floor((box.lo[i] - bounds_.lo[i]) / cell_)));
      hi[s] = std::min(dims_[s] - 1, static_cast<int>(std::floor((box.hi[i] - bounds_.lo[i]) / cell_)));
      if (lo[s] > hi[s]) return;
    }
    for (int k = lo[2]; k <= hi[2]; ++k)
      for (int j = lo[1]; j <= hi[1]; ++j)
        for (int i = lo[0]; i <= hi[0]; ++i)
          fn(static_cast<size_t>(i) + static_cast<size_t>(dims_[0]) * (static_cast<size_t>(j) + static_cast<size_t>(dims_[1]) * k));
  }

  int n_;
  Box bounds_;
  double cell_ = 1.0;
  std::array<int, 3> dims_{1, 1, 1};
  std::vector<std::vector<size_t>> buckets_;
};

BoundaryPatch::BoundaryPatch(int n, std::vector<Facet> facets, Provenance provenance, double smoothing)
    : n_(n), facets_(std::move(facets)), provenance_(provenance), smoothing_(smoothing) {}

double BoundaryPatch::total_measure() const {
  double s = 0.0;
  for (const auto& f : facets_) s += f.measure;
  return s;
}

Vec BoundaryPatch::mean_normal() const {
  Vec m = Vec::Zero();
  for (const auto& f : facets_) m += f.measure * f.normal;
  return m;
}

void BoundaryPatch::build_index() {
  if (!facets_.empty()) index_ = std::make_shared<const FacetIndex>(facets_, n_);
}

std::vector<size_t> BoundaryPatch::candidates(const Box& box) const {
  if (index_) return index_->query(box);
  std::vector<size_t> all(facets_.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  return all;
}

namespace {

// Parameter interval [t0, t1] of segment a + t (b - a) inside the region;
// t0 > t1 when the segment misses it.
std::pair<double, double> inside_interval(const Vec& a, const Vec& b, const Ball& ball) {
  const Vec d = b - a;
  const Vec f = a - ball.center;
  const double qa = d.squaredNorm();
  const double qb = 2.0 * f.dot(d);
  const double qc = f.squaredNorm() - ball.radius * ball.radius;
  if (!(qa > 0.0)) return qc < 0.0 ? std::pair{0.0, 1.0} : std::pair{1.0, 0.0};
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc <= 0.0) return {1.0, 0.0};
  const double sq = std::sqrt(disc);
  // Numerically stable roots.
  const double q = -0.5 * (qb + std::copysign(sq, qb));
  double r0 = q / qa;
  double r1 = q != 0.0 ? qc / q : -r0;
  if (r0 > r1) std::swap(r0, r1);
  return {std::max(0.0, r0), std::min(1.0, r1)};
}

std::pair<double, double> inside_interval(const Vec& a, const Vec& b, const Cylinder& cyl, int n) {
  const Frame frame = make_frame(cyl.axis, n);
  const Vec pa = a - cyl.center;
  const Vec d = b - a;
  double t0 = 0.0, t1 = 1.0;
  // Liang-Barsky against |w| < r (axis) and |u| < r (tangent); n = 2 only.
  auto clip = [&](double p, double q) {
    if (p == 0.0) {
      if (q < 0.0) t0 = 2.0, t1 = -1.0;
      return;
    }
    const double t = q / p;
    if (p < 0.0) t0 = std::max(t0, t);
    else t1 = std::min(t1, t);
  };
  const double w0 = pa.dot(cyl.axis), dw = d.dot(cyl.axis);
  const double u0 = pa.dot(frame.tangents[0]), du = d.dot(frame.tangents[0]);
  clip(dw, cyl.radius - w0);
  clip(-dw, cyl.radius + w0);
  clip(du, cyl.radius - u0);
  clip(-du, cyl.radius + u0);
  return {t0, t1};
}

void push_piece(std::vector<Facet>& out, const Facet& f, double t0, double t1) {
  if (!(t1 > t0)) return;
  const Vec a = f.v[0] + t0 * (f.v[1] - f.v[0]);
  const Vec b = f.v[0] + t1 * (f.v[1] - f.v[0]);
  Facet piece = make_segment(a, b, f.normal);
  if (piece.measure > 0.0) out.push_back(piece);
}

double inside_fraction(const Facet& f, const Region& region) {
  bool all_in = true;
  for (int i = 0; i < f.nv; ++i) all_in = all_in && region_contains(region, f.v[static_cast<size_t>(i)]);
  if (all_in) return 1.0;
  int hits = 0;
  if (f.nv == 3) {
    for (int i = 0; i < 3; ++i) {
      const Vec p = (4.0 * f.v[static_cast<size_t>(i)] + f.v[static_cast<size_t>((i + 1) % 3)] +
                     f.v[static_cast<size_t>((i + 2) % 3)]) / 6.0;
      hits += region_contains(region, p) ? 1 : 0;
    }
    return hits / 3.0;
  }
  for (int i = 0; i < f.nv; ++i) {
    const Vec p = 0.5 * (f.v[static_cast<size_t>(i)] + f.centroid);
    hits += region_contains(region, p) ? 1 : 0;
  }
  return static_cast<double>(hits) / f.nv;
}

BoundaryPatch clip_impl(const BoundaryPatch& b, const Region& region, bool keep_inside) {
  const int n = b.dim();
  std::vector<size_t> ids;
  if (keep_inside) {
    ids = b.candidates(region_bounds(region, n));
  } else {
    ids.resize(b.size());
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  }
  std::vector<Facet> out;
  out.reserve(ids.size());
  for (size_t id : ids) {
    const Facet& f = b.facets()[id];
    if (n == 2) {
      const auto [t0, t1] = std::visit(
          [&](const auto& r) {
            if constexpr (std::is_same_v<std::decay_t<decltype(r)>, Ball>) return inside_interval(f.v[0], f.v[1], r);
            else return inside_interval(f.v[0], f.v[1], r, n);
          },
          region);
      if (keep_inside) {
        push_piece(out, f, t0, t1);
      } else if (!(t1 > t0)) {
        out.push_back(f);
      } else {
        push_piece(out, f, 0.0, t0);
        push_piece(out, f, t1, 1.0);
      }
      continue;
    }
    double frac = inside_fraction(f, region);
    if (!keep_inside) frac = 1.0 - frac;
    if (frac <= 0.0) continue;
    Facet g = f;
    g.measure = f.measure * frac;
    out.push_back(g);
  }
  BoundaryPatch clipped(n, std::move(out), b.provenance(), b.smoothing());
  return clipped;
}

}  // namespace

BoundaryPatch clip_to_region(const BoundaryPatch& b, const Region& region) { return clip_impl(b, region, true); }

BoundaryPatch clip_outside(const BoundaryPatch& b, const Region& region) { return clip_impl(b, region, false); }

double distance_to_facets(const BoundaryPatch& b, const Vec& p, double search_radius) {
  Box box;
  Vec ext = Vec::Zero();
  for (int i = 0; i < b.dim(); ++i) ext[i] = search_radius;
  box.extend(p - ext);
  box.extend(p + ext);
  double best = std::numeric_limits<double>::infinity();
  for (size_t id : b.candidates(box)) {
    const Facet& f = b.facets()[id];
    double d = 0.0;
    if (f.nv == 2) d = point_segment_distance(p, f.v[0], f.v[1]);
    else if (f.nv == 3) d = point_triangle_distance(p, f.v[0], f.v[1], f.v[2]);
    else d = std::min(point_triangle_distance(p, f.v[0], f.v[1], f.v[2]),
                      point_triangle_distance(p, f.v[0], f.v[2], f.v[3]));
    best = std::min(best, d);
  }
  return best <= search_radius ? best : std::numeric_limits<double>::infinity();
}

}  // namespace gmt
