#include "gmt/geometry.hpp"

#include <algorithm>

namespace gmt {

Box region_bounds(const Region& region, int n) {
  Box box;
  std::visit(
      [&](const auto& r) {
        // A cylinder fits inside the ball of radius r * sqrt(2) about its center.
        double reach = r.radius;
        if constexpr (std::is_same_v<std::decay_t<decltype(r)>, Cylinder>) reach *= std::sqrt(2.0);
        Vec ext = Vec::Zero();
        for (int i = 0; i < n; ++i) ext[i] = reach;
        box.extend(r.center - ext);
        box.extend(r.center + ext);
      },
      region);
  return box;
}

Vec unit(const Vec& v, int n) {
  Vec w = Vec::Zero();
  for (int i = 0; i < n; ++i) w[i] = v[i];
  const double norm = w.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("zero or non-finite direction vector");
  return w / norm;
}

Frame make_frame(const Vec& nu, int n) {
  Frame f;
  f.n = n;
  f.normal = unit(nu, n);
  if (n == 2) {
    f.tangents[0] = Vec(f.normal.y(), -f.normal.x(), 0.0);
    return f;
  }
  // Gram-Schmidt against the coordinate axis least aligned with nu.
  Eigen::Index axis = 0;
  f.normal.cwiseAbs().minCoeff(&axis);
  Vec seed = Vec::Zero();
  seed[axis] = 1.0;
  Vec t1 = seed - seed.dot(f.normal) * f.normal;
  t1.normalize();
  f.tangents[0] = t1;
  f.tangents[1] = f.normal.cross(t1);
  return f;
}

std::vector<Eigen::Vector2d> unit_disk_samples(int n, int count) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(static_cast<size_t>(count));
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : -1.0 + 2.0 * i / (count - 1);
      out.emplace_back(t, 0.0);
    }
    return out;
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double rad = std::sqrt((i + 0.5) / count);
    const double ang = golden * i;
    out.emplace_back(rad * std::cos(ang), rad * std::sin(ang));
  }
  return out;
}

std::vector<Vec> unit_ball_samples(int n, int count) {
  const double spacing = std::pow(unit_ball_volume(n) / std::max(count, 1), 1.0 / n);
  const int half = static_cast<int>(std::ceil(1.0 / spacing)) + 1;
  std::vector<Vec> out;
  const int kmax = n == 3 ? half : 0;
  for (int k = -kmax; k <= kmax; ++k) {
    for (int j = -half; j <= half; ++j) {
      for (int i = -half; i <= half; ++i) {
        Vec p((i + 0.5) * spacing, (j + 0.5) * spacing, n == 3 ? (k + 0.5) * spacing : 0.0);
        if (p.squaredNorm() < 1.0) out.push_back(p);
      }
    }
  }
  return out;
}

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
  const Vec ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double point_triangle_distance(const Vec& p, const Vec& a, const Vec& b, const Vec& c) {
  const Vec ab = b - a;
  const Vec ac = c - a;
  const Vec nrm = ab.cross(ac);
  const double area2 = nrm.squaredNorm();
  if (area2 > 0.0) {
    // Project onto the plane and test barycentric coordinates.
    const Vec q = p - (p - a).dot(nrm) / area2 * nrm;
    const Vec aq = q - a;
    const double d00 = ab.dot(ab), d01 = ab.dot(ac), d11 = ac.dot(ac);
    const double d20 = aq.dot(ab), d21 = aq.dot(ac);
    const double den = d00 * d11 - d01 * d01;
    const double v = (d11 * d20 - d01 * d21) / den;
    const double w = (d00 * d21 - d01 * d20) / den;
    if (v >= 0.0 && w >= 0.0 && v + w <= 1.0) return (p - q).norm();
  }
  return std::min({point_segment_distance(p, a, b), point_segment_distance(p, b, c),
                   point_segment_distance(p, c, a)});
}

}  // namespace gmt
