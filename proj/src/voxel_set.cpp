#include "gmt/voxel_set.hpp"

#include <algorithm>

namespace gmt {

VoxelSet::VoxelSet(int n, std::array<int, 3> dims, const Vec& origin, double h)
    : n_(n), dims_(dims), origin_(origin), h_(h) {
  if (n != 2 && n != 3) throw InputError("voxel set dimension must be 2 or 3");
  if (!(h > 0.0) || !std::isfinite(h)) throw InputError("voxel spacing must be positive");
  if (n == 2) dims_[2] = 1;
  for (int i = 0; i < n; ++i)
    if (dims_[static_cast<size_t>(i)] < 2) throw InputError("voxel dims must be >= 2 per axis");
  if (n == 2) origin_[2] = 0.0;
  cells_.assign(static_cast<size_t>(dims_[0]) * dims_[1] * dims_[2], 0);
}

std::array<int, 3> VoxelSet::coords(size_t idx) const {
  const auto d0 = static_cast<size_t>(dims_[0]);
  const auto d1 = static_cast<size_t>(dims_[1]);
  return {static_cast<int>(idx % d0), static_cast<int>((idx / d0) % d1), static_cast<int>(idx / (d0 * d1))};
}

Vec VoxelSet::center(int i, int j, int k) const {
  Vec c = origin_ + h_ * Vec(i + 0.5, j + 0.5, k + 0.5);
  if (n_ == 2) c[2] = 0.0;
  return c;
}

Vec VoxelSet::center(size_t idx) const {
  const auto c = coords(idx);
  return center(c[0], c[1], c[2]);
}

std::array<int, 3> VoxelSet::cell_of(const Vec& p) const {
  std::array<int, 3> c{0, 0, 0};
  for (int i = 0; i < n_; ++i)
    c[static_cast<size_t>(i)] = static_cast<int>(std::floor((p[i] - origin_[i]) / h_));
  return c;
}

size_t VoxelSet::count() const {
  return static_cast<size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

bool VoxelSet::contains(const Vec& p) const {
  const auto c = cell_of(p);
  return get(c[0], c[1], c[2]);
}

double VoxelSet::volume_in(const Ball& ball) const {
  const auto lo = cell_of(ball.center - Vec::Constant(ball.radius));
  const auto hi = cell_of(ball.center + Vec::Constant(ball.radius));
  const int klo = n_ == 3 ? std::max(lo[2], 0) : 0;
  const int khi = n_ == 3 ? std::min(hi[2], dims_[2] - 1) : 0;
  size_t hits = 0;
  for (int k = klo; k <= khi; ++k)
    for (int j = std::max(lo[1], 0); j <= std::min(hi[1], dims_[1] - 1); ++j)
      for (int i = std::max(lo[0], 0); i <= std::min(hi[0], dims_[0] - 1); ++i)
        if (cells_[index(i, j, k)] && ball.contains(center(i, j, k))) ++hits;
  return static_cast<double>(hits) * cell_volume();
}

Box VoxelSet::bounds() const {
  Box b;
  b.extend(origin_);
  Vec hi = origin_;
  for (int i = 0; i < n_; ++i) hi[i] += dims_[static_cast<size_t>(i)] * h_;
  b.extend(hi);
  return b;
}

bool VoxelSet::has_margin() const {
  for (size_t idx = 0; idx < cells_.size(); ++idx) {
    if (!cells_[idx]) continue;
    const auto c = coords(idx);
    for (int a = 0; a < n_; ++a) {
      const auto s = static_cast<size_t>(a);
      if (c[s] == 0 || c[s] == dims_[s] - 1) return false;
    }
  }
  return true;
}

VoxelSet VoxelSet::padded(int cells) const {
  std::array<int, 3> d = dims_;
  Vec o = origin_;
  for (int a = 0; a < n_; ++a) {
    d[static_cast<size_t>(a)] += 2 * cells;
    o[a] -= cells * h_;
  }
  VoxelSet out(n_, d, o, h_);
  const int kp = n_ == 3 ? cells : 0;
  for (int k = 0; k < dims_[2]; ++k)
    for (int j = 0; j < dims_[1]; ++j)
      for (int i = 0; i < dims_[0]; ++i)
        if (cells_[index(i, j, k)]) out.set(i + cells, j + cells, k + kp, true);
  return out;
}

namespace {

VoxelSet aligned_grid(const Box& box, int n, double h, int pad) {
  std::array<int, 3> dims{1, 1, 1};
  Vec origin = Vec::Zero();
  for (int a = 0; a < n; ++a) {
    const double lo = box.empty() ? 0.0 : std::floor(box.lo[a] / h);
    const double hi = box.empty() ? 0.0 : std::ceil(box.hi[a] / h);
    origin[a] = (lo - pad) * h;
    dims[static_cast<size_t>(a)] = std::max(2, static_cast<int>(hi - lo) + 2 * pad);
  }
  return VoxelSet(n, dims, origin, h);
}

}  // namespace

VoxelSet rasterize(const PolyCurveSet& s, double h, int pad) {
  if (!(h > 0.0)) throw InputError("rasterize: h must be positive");
  VoxelSet v = aligned_grid(s.bounds(), 2, h, std::max(pad, 1));
  if (s.empty()) return v;
  std::vector<double> xs;
  for (int j = 0; j < v.dims()[1]; ++j) {
    const double y = v.center(0, j)[1];
    xs.clear();
    for (const Loop& lp : s.loops()) {
      for (size_t i = 0, p = lp.size() - 1; i < lp.size(); p = i++) {
        const auto& a = lp[i];
        const auto& b = lp[p];
        if ((a.y() > y) != (b.y() > y)) xs.push_back(a.x() + (y - a.y()) * (b.x() - a.x()) / (b.y() - a.y()));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (size_t q = 0; q + 1 < xs.size(); q += 2) {
      // Inside is x in [xs[q], xs[q+1]), matching PolyCurveSet::contains.
      const double x0 = (xs[q] - v.origin()[0]) / h - 0.5;
      const double x1 = (xs[q + 1] - v.origin()[0]) / h - 0.5;
      const int i0 = std::max(0, static_cast<int>(std::ceil(x0)));
      const int i1 = std::min(v.dims()[0] - 1, static_cast<int>(std::ceil(x1)) - 1);
      for (int i = i0; i <= i1; ++i) v.set(i, j, 0, true);
    }
  }
  return v;
}

VoxelSet rasterize_implicit(const std::function<bool(const Vec&)>& inside, const Box& box, int n, double h,
                            int pad) {
  if (!(h > 0.0)) throw InputError("rasterize: h must be positive");
  VoxelSet v = aligned_grid(box, n, h, std::max(pad, 1));
  for (size_t idx = 0; idx < v.size(); ++idx)
    if (inside(v.center(idx))) v.cells()[idx] = 1;
  return v;
}

}  // namespace gmt
