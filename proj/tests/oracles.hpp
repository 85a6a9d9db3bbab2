#pragma once

// Closed-form and brute-force reference values, computed without the library.

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracle {

/// Excess of a circle of radius R in a ball of radius r centred on it: the arc
/// inside has half-angle a = 2 asin(r / 2R); mass 2Ra, mean normal 2R sin a.
inline double circle_excess(double R, double r) {
  const double a = 2.0 * std::asin(r / (2.0 * R));
  return 2.0 * R * (a - std::sin(a)) / r;
}

/// Arc length minus chord length inside B_r, divided by r, for a circle of radius R.
inline double arc_chord_gap(double R, double r) {
  const double a = 2.0 * std::asin(r / (2.0 * R));
  return (2.0 * R * a - 2.0 * R * std::sin(a)) / r;
}

/// Line of slope s through the cylinder axis point, direction e_n.
inline double line_cylindrical_excess(double s) { return 2.0 * (std::sqrt(1.0 + s * s) - 1.0); }
inline double line_flatness(double s) { return 2.0 / 3.0 * s * s * std::sqrt(1.0 + s * s); }

/// Flatness of the circle y = -(R - sqrt(R^2 - t^2)) over |t| < r with direction e_2,
/// by composite Simpson quadrature in the arc parameter.
inline double circle_flatness(double R, double r, int steps = 20000) {
  auto height = [&](double t) { return -(R - std::sqrt(R * R - t * t)); };
  auto weight = [&](double t) { return R / std::sqrt(R * R - t * t); };
  const double hstep = 2.0 * r / steps;
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double t = -r + i * hstep;
    const double c = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double w = c * weight(t) * hstep / 3.0;
    m0 += w;
    m1 += w * height(t);
    m2 += w * height(t) * height(t);
  }
  return (m2 - m1 * m1 / m0) / (r * r * r);
}

/// Sagitta of a chord of half-length r' on a circle of radius R, divided by r'.
inline double sagitta_ratio(double R, double rp) { return (R - std::sqrt(R * R - rp * rp)) / rp; }

}  // namespace oracle
