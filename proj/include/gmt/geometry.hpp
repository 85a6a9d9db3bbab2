#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace gmt {

// Points and vectors live in R^3; two-dimensional data keeps the third
// coordinate at zero and carries its dimension alongside.
using Vec = Eigen::Vector3d;
using Mat = Eigen::Matrix3d;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: config strings, files, generator specs.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A precondition on the geometric data does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

struct Ball {
  Vec center = Vec::Zero();
  double radius = 0.0;

  bool contains(const Vec& p) const { return (p - center).squaredNorm() < radius * radius; }
};

/// The cylinder C_nu(x, r): |(y - x).nu| < r and |(y - x) - ((y - x).nu) nu| < r.
struct Cylinder {
  Vec center = Vec::Zero();
  double radius = 0.0;
  Vec axis = Vec::UnitY();

  bool contains(const Vec& p) const {
    const Vec d = p - center;
    const double along = d.dot(axis);
    return std::abs(along) < radius && (d - along * axis).squaredNorm() < radius * radius;
  }
};

using Region = std::variant<Ball, Cylinder>;

inline bool region_contains(const Region& region, const Vec& p) {
  return std::visit([&](const auto& r) { return r.contains(p); }, region);
}

struct Box {
  Vec lo = Vec::Constant(std::numeric_limits<double>::infinity());
  Vec hi = Vec::Constant(-std::numeric_limits<double>::infinity());

  void extend(const Vec& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  bool empty() const { return (lo.array() > hi.array()).any(); }
};

Box region_bounds(const Region& region, int n);

/// Volume of the unit ball in R^n (omega_n).
inline double unit_ball_volume(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi / 3.0;
    default: throw DomainError("unit_ball_volume: unsupported dimension " + std::to_string(n));
  }
}

/// Orthonormal frame (t_1, ..., t_{n-1}, nu) with nu the last axis.
/// In two dimensions t_1 = (nu_y, -nu_x) so that (t_1, nu) is positively oriented.
struct Frame {
  int n = 2;
  std::array<Vec, 2> tangents{Vec::Zero(), Vec::Zero()};
  Vec normal = Vec::UnitY();

  Vec to_world(const Eigen::Vector2d& tangential, double height) const {
    Vec p = height * normal + tangential[0] * tangents[0];
    if (n == 3) p += tangential[1] * tangents[1];
    return p;
  }
  Eigen::Vector2d tangential(const Vec& d) const {
    return {d.dot(tangents[0]), n == 3 ? d.dot(tangents[1]) : 0.0};
  }
};

Frame make_frame(const Vec& nu, int n);

/// Projects onto the first n coordinates and normalizes; throws on a zero vector.
Vec unit(const Vec& v, int n);

/// Uniform random unit vector in R^n drawn from a Gaussian.
template <class Rng>
Vec random_unit(Rng& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Vec v = Vec::Zero();
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    const double norm = v.norm();
    if (norm > 1e-12) return v / norm;
  }
}

/// Quasi-uniform points in the unit (n-1)-disk (segment [-1,1] for n = 2,
/// sunflower spiral for n = 3), returned as tangential coordinates.
std::vector<Eigen::Vector2d> unit_disk_samples(int n, int count);

/// Quasi-uniform points in the unit n-ball, deterministic.
std::vector<Vec> unit_ball_samples(int n, int count);

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b);
double point_triangle_distance(const Vec& p, const Vec& a, const Vec& b, const Vec& c);

}  // namespace gmt
