#pragma once

#include "gmt/anisotropy.hpp"
#include "gmt/poly_set.hpp"
#include "gmt/voxel_set.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace gmt {

using Generated = std::variant<PolyCurveSet, VoxelSet>;

/// {x : x . normal <= offset} cut to the box [-L, L]^2.
PolyCurveSet make_half_space(const Vec& normal, double offset, double L = 4.0);
/// Regular polygon inscribed in the circle, first vertex at angle 0.
PolyCurveSet make_ball(const Vec& center, double R, int segments = 2048);
/// Intersection of the half-planes x . nu_k <= Phi(0, nu_k) over `directions`
/// equally spaced unit vectors.
PolyCurveSet make_wulff(const Anisotropy& a, int directions = 720);
/// Union of a horizontal and a vertical stadium of width w reaching to
/// distance L from the origin; its only corners are the four reflex corners
/// (+-w/2, +-w/2). Each cap uses `arc_segments` segments.
PolyCurveSet make_cross(double w, double L = 1.0, int arc_segments = 128);
/// Subgraph {y < f(x)} of a named function over [-L, L], cut at y = -L - 1.
/// Names: line (a x), sine ((a / pi) sin(pi x)), tent (-a |x|),
/// parabola (a x^2 / 2).
PolyCurveSet make_graph(const std::string& name, double a, double L = 1.0, int segments = 2000);
double graph_function(const std::string& name, double a, double x);

/// Flips each non-margin cell with probability p using mt19937_64(seed).
VoxelSet make_noisy(const VoxelSet& base, double p, std::uint64_t seed);

struct GenerateContext {
  int n = 2;
  double h = 1.0 / 128.0;
  const Anisotropy* anisotropy = nullptr;  // required by wulff
};

/// Parses a generator spec such as `ball:R=1`, `half:normal=0,1;offset=0`,
/// `wulff`, `cross:w=0.4`, `graph:f=sine;a=0.3` or
/// `noisy:base=ball:R=1;p=0.05;seed=7`. Two-dimensional shapes come back as
/// polygons (noisy sets as voxels at ctx.h); in three dimensions half, ball
/// and noisy are available as voxel sets.
Generated generate(std::string_view spec, const GenerateContext& ctx);

}  // namespace gmt
