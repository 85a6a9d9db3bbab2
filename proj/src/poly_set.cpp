#include "gmt/poly_set.hpp"

#include <algorithm>

namespace gmt {

namespace {

using P2 = Eigen::Vector2d;

double cross2(const P2& a, const P2& b) { return a.x() * b.y() - a.y() * b.x(); }

int orient(const P2& a, const P2& b, const P2& c) {
  const double v = cross2(b - a, c - a);
  const double scale = (b - a).norm() * (c - a).norm();
  if (std::abs(v) <= 1e-14 * scale) return 0;
  return v > 0.0 ? 1 : -1;
}

bool on_segment(const P2& a, const P2& b, const P2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segments_meet(const P2& a, const P2& b, const P2& c, const P2& d) {
  const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

struct Edge {
  size_t loop, idx;
  P2 a, b;
  double xmin, xmax;
};

void check_simple(const std::vector<Loop>& loops) {
  std::vector<Edge> edges;
  for (size_t l = 0; l < loops.size(); ++l) {
    const Loop& lp = loops[l];
    for (size_t i = 0; i < lp.size(); ++i) {
      const P2& a = lp[i];
      const P2& b = lp[(i + 1) % lp.size()];
      edges.push_back({l, i, a, b, std::min(a.x(), b.x()), std::max(a.x(), b.x())});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& p, const Edge& q) { return p.xmin < q.xmin; });
  for (size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    for (size_t j = i + 1; j < edges.size() && edges[j].xmin <= e.xmax; ++j) {
      const Edge& f = edges[j];
      if (e.loop == f.loop) {
        const size_t m = loops[e.loop].size();
        const bool next = (e.idx + 1) % m == f.idx;
        const bool prev = (f.idx + 1) % m == e.idx;
        if (next || prev) {
          // Adjacent edges share one vertex; reject only a fold back along the edge.
          const P2& shared = next ? e.b : e.a;
          const P2& far_f = next ? f.b : f.a;
          const P2& far_e = next ? e.a : e.b;
          if ((orient(e.a, e.b, far_f) == 0 && on_segment(e.a, e.b, far_f)) ||
              (orient(f.a, f.b, far_e) == 0 && on_segment(f.a, f.b, far_e)))
            throw InputError("polygon loop folds back on itself near (" + std::to_string(shared.x()) +
                             ", " + std::to_string(shared.y()) + ")");
          continue;
        }
      }
      if (segments_meet(e.a, e.b, f.a, f.b))
        throw InputError("polygon loops intersect near (" + std::to_string(e.a.x()) + ", " +
                         std::to_string(e.a.y()) + ")");
    }
  }
}

bool point_in_loop(const Loop& loop, const P2& p) {
  bool in = false;
  for (size_t i = 0, j = loop.size() - 1; i < loop.size(); j = i++) {
    const P2& a = loop[i];
    const P2& b = loop[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) in = !in;
    }
  }
  return in;
}

// Signed area of the intersection of the disk |z| < r with the triangle (0, a, b).
double triangle_disk_area(const P2& a, const P2& b, double r) {
  const P2 d = b - a;
  const double qa = d.squaredNorm();
  if (!(qa > 0.0)) return 0.0;
  const double qb = 2.0 * a.dot(d);
  const double qc = a.squaredNorm() - r * r;
  double ts[4] = {0.0, 0.0, 0.0, 1.0};
  int nt = 1;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double t0 = (-qb - sq) / (2.0 * qa);
    const double t1 = (-qb + sq) / (2.0 * qa);
    if (t0 > 0.0 && t0 < 1.0) ts[nt++] = t0;
    if (t1 > 0.0 && t1 < 1.0) ts[nt++] = t1;
  }
  ts[nt++] = 1.0;
  double total = 0.0;
  for (int k = 0; k + 1 < nt; ++k) {
    const P2 p = a + ts[k] * d;
    const P2 q = a + ts[k + 1] * d;
    const P2 mid = 0.5 * (p + q);
    if (mid.squaredNorm() < r * r) total += 0.5 * cross2(p, q);
    else total += 0.5 * r * r * std::atan2(cross2(p, q), p.dot(q));
  }
  return total;
}

}  // namespace

double signed_area(const Loop& loop) {
  double s = 0.0;
  for (size_t i = 0; i < loop.size(); ++i) s += cross2(loop[i], loop[(i + 1) % loop.size()]);
  return 0.5 * s;
}

PolyCurveSet::PolyCurveSet(std::vector<Loop> loops) {
  for (const Loop& lp : loops) {
    if (lp.size() < 3) throw InputError("polygon loop needs at least 3 vertices");
    for (size_t i = 0; i < lp.size(); ++i) {
      const P2& a = lp[i];
      const P2& b = lp[(i + 1) % lp.size()];
      if (!a.allFinite()) throw InputError("polygon vertex is not finite");
      if ((b - a).norm() <= 0.0) throw InputError("polygon has a zero-length edge");
    }
  }
  check_simple(loops);
  for (size_t l = 0; l < loops.size(); ++l) {
    int depth = 0;
    for (size_t m = 0; m < loops.size(); ++m)
      if (m != l && point_in_loop(loops[m], loops[l][0])) ++depth;
    const bool want_ccw = depth % 2 == 0;
    if ((signed_area(loops[l]) > 0.0) != want_ccw) std::reverse(loops[l].begin(), loops[l].end());
  }
  loops_ = std::move(loops);
}

size_t PolyCurveSet::edge_count() const {
  size_t n = 0;
  for (const Loop& lp : loops_) n += lp.size();
  return n;
}

bool PolyCurveSet::contains(const Vec& p) const {
  bool in = false;
  for (const Loop& lp : loops_) in ^= point_in_loop(lp, p.head<2>());
  return in;
}

double PolyCurveSet::area() const {
  double s = 0.0;
  for (const Loop& lp : loops_) s += signed_area(lp);
  return s;
}

Box PolyCurveSet::bounds() const {
  Box b;
  for (const Loop& lp : loops_)
    for (const P2& p : lp) b.extend(Vec(p.x(), p.y(), 0.0));
  return b;
}

double PolyCurveSet::area_in_disk(const Vec& center, double radius) const {
  if (!(radius > 0.0)) return 0.0;
  const P2 c = center.head<2>();
  double s = 0.0;
  for (const Loop& lp : loops_)
    for (size_t i = 0; i < lp.size(); ++i) s += triangle_disk_area(lp[i] - c, lp[(i + 1) % lp.size()] - c, radius);
  return std::clamp(s, 0.0, std::numbers::pi * radius * radius);
}

BoundaryPatch boundary_of_poly(const PolyCurveSet& s) {
  std::vector<Facet> facets;
  facets.reserve(s.edge_count());
  for (const Loop& lp : s.loops()) {
    for (size_t i = 0; i < lp.size(); ++i) {
      const P2& a = lp[i];
      const P2& b = lp[(i + 1) % lp.size()];
      const P2 d = b - a;
      const double len = d.norm();
      if (!(len > 0.0)) throw InputError("polygon has a zero-length edge");
      const Vec normal(d.y() / len, -d.x() / len, 0.0);
      facets.push_back(make_segment(Vec(a.x(), a.y(), 0.0), Vec(b.x(), b.y(), 0.0), normal));
    }
  }
  BoundaryPatch patch(2, std::move(facets), Provenance::exact);
  patch.build_index();
  return patch;
}

}  // namespace gmt
