#include "gmt/extract.hpp"

#include <algorithm>

namespace gmt {

namespace {

BoundaryPatch raw_faces(const VoxelSet& v) {
  const int n = v.dim();
  const double h = v.spacing();
  const double half = 0.5 * h;
  std::vector<Facet> facets;
  for (size_t idx = 0; idx < v.size(); ++idx) {
    if (!v.cells()[idx]) continue;
    const auto c = v.coords(idx);
    const Vec ctr = v.center(c[0], c[1], c[2]);
    for (int axis = 0; axis < n; ++axis) {
      for (int side : {-1, 1}) {
        auto nb = c;
        nb[static_cast<size_t>(axis)] += side;
        if (v.get(nb[0], nb[1], nb[2])) continue;
        Vec normal = Vec::Zero();
        normal[axis] = side;
        const Vec fc = ctr + half * normal;
        if (n == 2) {
          Vec t = Vec::Zero();
          t[1 - axis] = half;
          facets.push_back(make_segment(fc - t, fc + t, normal));
        } else {
          Vec t1 = Vec::Zero(), t2 = Vec::Zero();
          t1[(axis + 1) % 3] = half;
          t2[(axis + 2) % 3] = half;
          facets.push_back(make_polygon_facet({fc - t1 - t2, fc + t1 - t2, fc + t1 + t2, fc - t1 + t2}, normal));
        }
      }
    }
  }
  return BoundaryPatch(n, std::move(facets), Provenance::extracted, 0.0);
}

// Mollified indicator on a padded node grid.
struct Field {
  int n = 2;
  std::array<int, 3> dims{1, 1, 1};
  Vec origin = Vec::Zero();  // position of node (0, 0, 0)
  double h = 1.0;
  std::vector<double> u;
  std::vector<Vec> grad;

  size_t index(int i, int j, int k) const {
    return static_cast<size_t>(i) + static_cast<size_t>(dims[0]) * (static_cast<size_t>(j) + static_cast<size_t>(dims[1]) * static_cast<size_t>(k));
  }
  Vec node(int i, int j, int k) const {
    Vec p = origin + h * Vec(i, j, k);
    if (n == 2) p[2] = 0.0;
    return p;
  }

  Vec grad_at(const Vec& p) const {
    std::array<int, 3> base{0, 0, 0};
    std::array<double, 3> frac{0.0, 0.0, 0.0};
    for (int a = 0; a < n; ++a) {
      const auto s = static_cast<size_t>(a);
      const double t = (p[a] - origin[a]) / h;
      base[s] = std::clamp(static_cast<int>(std::floor(t)), 0, dims[s] - 2);
      frac[s] = std::clamp(t - base[s], 0.0, 1.0);
    }
    Vec g = Vec::Zero();
    const int kc = n == 3 ? 2 : 1;
    for (int dk = 0; dk < kc; ++dk)
      for (int dj = 0; dj < 2; ++dj)
        for (int di = 0; di < 2; ++di) {
          double w = (di ? frac[0] : 1.0 - frac[0]) * (dj ? frac[1] : 1.0 - frac[1]);
          if (n == 3) w *= dk ? frac[2] : 1.0 - frac[2];
          g += w * grad[index(base[0] + di, base[1] + dj, base[2] + dk)];
        }
    return g;
  }
};

Field mollify(const VoxelSet& v, double sigma) {
  const int n = v.dim();
  const double h = v.spacing();
  const int radius = static_cast<int>(std::ceil(3.0 * sigma / h - 1e-12));
  std::vector<double> kernel(static_cast<size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double w = std::exp(-0.5 * (k * h / sigma) * (k * h / sigma));
    kernel[static_cast<size_t>(k + radius)] = w;
    sum += w;
  }
  for (double& w : kernel) w /= sum;

  const int pad = radius + 1;
  Field f;
  f.n = n;
  f.h = h;
  for (int a = 0; a < n; ++a) f.dims[static_cast<size_t>(a)] = v.dims()[static_cast<size_t>(a)] + 2 * pad;
  f.origin = v.center(0, 0, 0);
  for (int a = 0; a < n; ++a) f.origin[a] -= pad * h;
  f.u.assign(static_cast<size_t>(f.dims[0]) * f.dims[1] * f.dims[2], 0.0);
  const int kp = n == 3 ? pad : 0;
  for (int k = 0; k < v.dims()[2]; ++k)
    for (int j = 0; j < v.dims()[1]; ++j)
      for (int i = 0; i < v.dims()[0]; ++i)
        if (v.cells()[v.index(i, j, k)]) f.u[f.index(i + pad, j + pad, k + kp)] = 1.0;

  std::vector<double> tmp(f.u.size());
  for (int axis = 0; axis < n; ++axis) {
    const auto s = static_cast<size_t>(axis);
    const size_t stride = axis == 0 ? 1 : axis == 1 ? static_cast<size_t>(f.dims[0]) : static_cast<size_t>(f.dims[0]) * f.dims[1];
    std::fill(tmp.begin(), tmp.end(), 0.0);
    for (size_t idx = 0; idx < f.u.size(); ++idx) {
      const double val = f.u[idx];
      if (val == 0.0) continue;
      const int pos = static_cast<int>((idx / stride) % static_cast<size_t>(f.dims[s]));
      for (int k = -radius; k <= radius; ++k) {
        const int q = pos + k;
        if (q < 0 || q >= f.dims[s]) continue;
        tmp[static_cast<size_t>(static_cast<long>(idx) + static_cast<long>(k) * static_cast<long>(stride))] +=
            val * kernel[static_cast<size_t>(k + radius)];
      }
    }
    f.u.swap(tmp);
  }

  f.grad.assign(f.u.size(), Vec::Zero());
  for (int k = 0; k < f.dims[2]; ++k)
    for (int j = 0; j < f.dims[1]; ++j)
      for (int i = 0; i < f.dims[0]; ++i) {
        const std::array<int, 3> c{i, j, k};
        Vec g = Vec::Zero();
        for (int a = 0; a < n; ++a) {
          auto lo = c, hi = c;
          const auto s = static_cast<size_t>(a);
          lo[s] = std::max(0, c[s] - 1);
          hi[s] = std::min(f.dims[s] - 1, c[s] + 1);
          if (hi[s] == lo[s]) continue;
          g[a] = (f.u[f.index(hi[0], hi[1], hi[2])] - f.u[f.index(lo[0], lo[1], lo[2])]) / ((hi[s] - lo[s]) * h);
        }
        f.grad[f.index(i, j, k)] = g;
      }
  return f;
}

constexpr double kLevel = 0.5;

struct Crossing {
  Vec p;
  Vec out_dir;  // from the inside node to the outside node
};

Crossing cross_edge(const Vec& pa, double fa, const Vec& pb, double fb) {
  const double t = (kLevel - fa) / (fb - fa);
  return {pa + t * (pb - pa), fa > kLevel ? Vec(pb - pa) : Vec(pa - pb)};
}

Vec facet_normal(const Field& f, const Vec& centroid, const Vec& geometric, const Vec& out_hint) {
  const Vec g = f.grad_at(centroid);
  const double gn = g.norm();
  if (gn > 1e-12) return -g / gn;
  Vec nrm = geometric.normalized();
  if (nrm.dot(out_hint) < 0.0) nrm = -nrm;
  return nrm;
}

void marching_squares(const Field& f, std::vector<Facet>& out) {
  for (int j = 0; j + 1 < f.dims[1]; ++j) {
    for (int i = 0; i + 1 < f.dims[0]; ++i) {
      const std::array<std::array<int, 2>, 4> corner{{{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
      std::array<double, 4> val{};
      std::array<Vec, 4> pos;
      int mask = 0;
      for (int c = 0; c < 4; ++c) {
        const auto cc = corner[static_cast<size_t>(c)];
        val[static_cast<size_t>(c)] = f.u[f.index(cc[0], cc[1], 0)];
        pos[static_cast<size_t>(c)] = f.node(cc[0], cc[1], 0);
        if (val[static_cast<size_t>(c)] > kLevel) mask |= 1 << c;
      }
      if (mask == 0 || mask == 15) continue;
      // Edge e joins corner e and corner e + 1.
      auto edge_cross = [&](int e) {
        const auto a = static_cast<size_t>(e), b = static_cast<size_t>((e + 1) % 4);
        return cross_edge(pos[a], val[a], pos[b], val[b]);
      };
      auto emit = [&](int e1, int e2) {
        const Crossing p = edge_cross(e1);
        const Crossing q = edge_cross(e2);
        if ((q.p - p.p).norm() <= 0.0) return;
        const Vec mid = 0.5 * (p.p + q.p);
        const Vec d = q.p - p.p;
        const Vec nrm = facet_normal(f, mid, Vec(d.y(), -d.x(), 0.0), p.out_dir + q.out_dir);
        out.push_back(make_segment(p.p, q.p, nrm));
      };
      // Corner c is cut off by edges c - 1 and c.
      auto cut_corner = [&](int c) { emit((c + 3) % 4, c); };
      const int inside = __builtin_popcount(static_cast<unsigned>(mask));
      if (inside == 1 || inside == 3) {
        const bool lone_inside = inside == 1;
        for (int c = 0; c < 4; ++c)
          if (((mask >> c) & 1) == (lone_inside ? 1 : 0)) cut_corner(c);
      } else if (mask == 5 || mask == 10) {
        const double center = 0.25 * (val[0] + val[1] + val[2] + val[3]);
        const bool cut_outside = center > kLevel;
        for (int c = 0; c < 4; ++c)
          if (((mask >> c) & 1) == (cut_outside ? 0 : 1)) cut_corner(c);
      } else {
        // Two adjacent inside corners: a straight cut through the opposite edges.
        int e1 = -1, e2 = -1;
        for (int e = 0; e < 4; ++e) {
          const bool sa = (mask >> e) & 1;
          const bool sb = (mask >> ((e + 1) % 4)) & 1;
          if (sa != sb) (e1 < 0 ? e1 : e2) = e;
        }
        emit(e1, e2);
      }
    }
  }
}

void marching_tetrahedra(const Field& f, std::vector<Facet>& out) {
  static const int kPerm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k + 1 < f.dims[2]; ++k) {
    for (int j = 0; j + 1 < f.dims[1]; ++j) {
      for (int i = 0; i + 1 < f.dims[0]; ++i) {
        std::array<double, 8> val{};
        std::array<Vec, 8> pos;
        bool any_in = false, any_out = false;
        for (int c = 0; c < 8; ++c) {
          const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
          val[static_cast<size_t>(c)] = f.u[f.index(i + di, j + dj, k + dk)];
          pos[static_cast<size_t>(c)] = f.node(i + di, j + dj, k + dk);
          (val[static_cast<size_t>(c)] > kLevel ? any_in : any_out) = true;
        }
        if (!any_in || !any_out) continue;
        for (const auto& perm : kPerm) {
          const int b1 = 1 << perm[0];
          const int b2 = b1 | (1 << perm[1]);
          const std::array<int, 4> tet{0, b1, b2, 7};
          std::array<int, 4> ins{}, outs{};
          int ni = 0, no = 0;
          for (int t : tet) (val[static_cast<size_t>(t)] > kLevel ? ins[static_cast<size_t>(ni++)] : outs[static_cast<size_t>(no++)]) = t;
          if (ni == 0 || no == 0) continue;
          auto cr = [&](int a, int b) {
            return cross_edge(pos[static_cast<size_t>(a)], val[static_cast<size_t>(a)], pos[static_cast<size_t>(b)],
                              val[static_cast<size_t>(b)]);
          };
          auto tri = [&](const Crossing& a, const Crossing& b, const Crossing& c) {
            const Vec geo = (b.p - a.p).cross(c.p - a.p);
            if (!(geo.norm() > 0.0)) return;
            const Vec ctr = (a.p + b.p + c.p) / 3.0;
            const Vec nrm = facet_normal(f, ctr, geo, a.out_dir + b.out_dir + c.out_dir);
            out.push_back(make_polygon_facet({a.p, b.p, c.p}, nrm));
          };
          if (ni == 1) {
            tri(cr(ins[0], outs[0]), cr(ins[0], outs[1]), cr(ins[0], outs[2]));
          } else if (no == 1) {
            tri(cr(ins[0], outs[0]), cr(ins[1], outs[0]), cr(ins[2], outs[0]));
          } else {
            const Crossing p0 = cr(ins[0], outs[0]), p1 = cr(ins[0], outs[1]);
            const Crossing p2 = cr(ins[1], outs[1]), p3 = cr(ins[1], outs[0]);
            tri(p0, p1, p2);
            tri(p0, p2, p3);
          }
        }
      }
    }
  }
}

}  // namespace

BoundaryPatch extract_boundary(const VoxelSet& v, double smoothing) {
  const double h = v.spacing();
  if (!(smoothing >= 0.0) || smoothing > 4.0 * h * (1.0 + 1e-12))
    throw InputError("smoothing must lie in [0, 4h]");
  const size_t set = v.count();
  if (set == 0 || set == v.size()) {
    BoundaryPatch empty(v.dim(), {}, Provenance::extracted, smoothing);
    empty.mark_degenerate();
    return empty;
  }
  if (smoothing == 0.0) {
    BoundaryPatch patch = raw_faces(v);
    patch.build_index();
    return patch;
  }
  const Field f = mollify(v, smoothing);
  std::vector<Facet> facets;
  if (v.dim() == 2) marching_squares(f, facets);
  else marching_tetrahedra(f, facets);
  BoundaryPatch patch(v.dim(), std::move(facets), Provenance::extracted, smoothing);
  patch.build_index();
  return patch;
}

}  // namespace gmt
