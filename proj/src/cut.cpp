#include "gmt/cut.hpp"

#include <algorithm>
#include <numeric>

namespace gmt {

namespace {

std::vector<std::array<int, 3>> lattice_families(int n, int order) {
  int reach = 0;
  bool axes_only = false;
  if (n == 2 && order == 4) axes_only = true, reach = 1;
  else if (n == 2 && order == 8) reach = 1;
  else if (n == 2 && order == 16) reach = 2;
  else if (n == 3 && order == 6) axes_only = true, reach = 1;
  else if (n == 3 && order == 26) reach = 1;
  else if (n == 3 && order == 98) reach = 2;
  else throw InputError("unsupported neighborhood order " + std::to_string(order) + " for n = " + std::to_string(n));

  std::vector<std::array<int, 3>> out;
  const int kr = n == 3 ? reach : 0;
  for (int k = -kr; k <= kr; ++k)
    for (int j = -reach; j <= reach; ++j)
      for (int i = -reach; i <= reach; ++i) {
        if (i == 0 && j == 0 && k == 0) continue;
        if (std::gcd(std::gcd(std::abs(i), std::abs(j)), std::abs(k)) != 1) continue;
        if (axes_only && (i != 0) + (j != 0) + (k != 0) != 1) continue;
        // One representative per +- pair: first nonzero coordinate positive.
        const int first = i != 0 ? i : j != 0 ? j : k;
        if (first < 0) continue;
        out.push_back({i, j, k});
      }
  return out;
}

std::vector<Vec> sphere_directions(int n) {
  std::vector<Vec> dirs;
  if (n == 2) {
    constexpr int kCount = 72000;
    for (int i = 0; i < kCount; ++i) {
      const double t = 2.0 * std::numbers::pi * (i + 0.5) / kCount;
      dirs.emplace_back(std::cos(t), std::sin(t), 0.0);
    }
    return dirs;
  }
  constexpr int kCount = 200000;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < kCount; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / kCount;
    const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    dirs.emplace_back(rad * std::cos(golden * i), rad * std::sin(golden * i), z);
  }
  return dirs;
}

Mat sqrt_block(const Mat& a, int n) {
  Mat out = Mat::Zero();
  Eigen::SelfAdjointEigenSolver<Mat> es(n == 2 ? Mat(a + Mat(Eigen::Vector3d(0, 0, 1).asDiagonal())) : a);
  out = es.operatorSqrt();
  if (n == 2) out(2, 2) = 0.0;
  return out;
}

}  // namespace

double CutGraphSpec::weight(size_t k, const Vec& midpoint) const {
  const double f = anisotropy ? anisotropy->factor(midpoint) : 1.0;
  return std::pow(h, n - 1) * crofton[k] * f;
}

std::int64_t CutGraphSpec::quantized(size_t k, const Vec& midpoint) const {
  return std::max<std::int64_t>(1, std::llround(weight(k, midpoint) * scale));
}

double CutGraphSpec::density(const Vec& nu) const {
  double s = 0.0;
  for (size_t k = 0; k < offsets.size(); ++k) {
    const Vec e(offsets[k][0], offsets[k][1], offsets[k][2]);
    s += crofton[k] * std::abs(e.dot(nu));
  }
  return s;
}

CutGraphSpec cut_weights(const Anisotropy& a, double h, int order) {
  if (!(h > 0.0)) throw InputError("cut_weights: h must be positive");
  const int n = a.dim();
  CutGraphSpec spec;
  spec.n = n;
  spec.order = order;
  spec.h = h;
  spec.offsets = lattice_families(n, order);
  spec.anisotropy = a;

  std::vector<Vec> unit_offsets;
  for (const auto& o : spec.offsets) unit_offsets.push_back(Vec(o[0], o[1], o[2]).normalized());
  const Mat root = sqrt_block(a.matrix(), n);
  const auto dirs = sphere_directions(n);
  const double sphere = n == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
  const double cn = n == 2 ? 0.25 : 1.0 / (2.0 * std::numbers::pi);
  const double dmeasure = sphere / static_cast<double>(dirs.size());
  std::vector<double> mass(spec.offsets.size(), 0.0);
  for (const Vec& d : dirs) {
    const Vec img = root * d;
    const double len = img.norm();
    size_t best = 0;
    double best_dot = -1.0;
    for (size_t k = 0; k < unit_offsets.size(); ++k) {
      const double c = std::abs(unit_offsets[k].dot(img));
      if (c > best_dot) best_dot = c, best = k;
    }
    mass[best] += cn * len * dmeasure;
  }
  for (size_t k = 0; k < spec.offsets.size(); ++k) {
    const Vec e(spec.offsets[k][0], spec.offsets[k][1], spec.offsets[k][2]);
    spec.crofton.push_back(mass[k] / e.norm());
  }

  // Metrication error of the base integrand over a dense set of normals.
  double worst = 0.0;
  std::vector<Vec> probes;
  const auto dense = sphere_directions(n);
  for (size_t i = 0; i < dense.size(); i += n == 2 ? 1 : 23) probes.push_back(dense[i]);
  if (n == 2) {
    // The density has kinks exactly where nu is orthogonal to an offset.
    for (const auto& o : spec.offsets) probes.push_back(Vec(-o[1], o[0], 0.0).normalized());
  }
  for (const Vec& nu : probes) {
    const double exact = std::sqrt(nu.dot(a.matrix() * nu));
    worst = std::max(worst, std::abs(spec.density(nu) - exact) / exact);
  }
  spec.metrication_bound = worst;

  double max_w = 0.0;
  for (double c : spec.crofton) max_w = std::max(max_w, c);
  const double max_factor = a.kind() == AnisotropyKind::modulated ? 1.0 + a.modulation().beta : 1.0;
  spec.scale = 1e9 / (std::pow(h, n - 1) * max_w * max_factor);
  return spec;
}

double cut_value(const VoxelSet& f, const CutGraphSpec& spec, const std::vector<char>* only) {
  double total = 0.0;
  for (size_t idx = 0; idx < f.size(); ++idx) {
    const auto c = f.coords(idx);
    const bool in = f.cells()[idx] != 0;
    for (size_t k = 0; k < spec.offsets.size(); ++k) {
      const auto& o = spec.offsets[k];
      // Each undirected edge once: from idx forward, plus the backward edge
      // when the neighbor lies outside the grid.
      for (int sgn : {1, -1}) {
        const int i = c[0] + sgn * o[0], j = c[1] + sgn * o[1], kk = c[2] + sgn * o[2];
        const bool nb_in_grid = f.in_grid(i, j, kk);
        if (sgn == -1 && nb_in_grid) continue;
        const bool nb = f.get(i, j, kk);
        if (nb == in) continue;
        if (only && !(*only)[idx] && !(nb_in_grid && (*only)[f.index(i, j, kk)])) continue;
        const Vec mid = f.center(c[0], c[1], c[2]) + 0.5 * sgn * f.spacing() * Vec(o[0], o[1], f.dim() == 3 ? o[2] : 0);
        total += spec.weight(k, mid);
      }
    }
  }
  return total;
}

}  // namespace gmt
