#include "doctest.h"

#include "gmt/discrete_set.hpp"
#include "gmt/extract.hpp"
#include "gmt/generate.hpp"
#include "gmt/io.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace gmt;

namespace {

Loop square(double s) { return {{-s, -s}, {s, -s}, {s, s}, {-s, s}}; }

// Area of the unit-square-free disk/half-plane lens {y < c} ∩ B_r(0), by the segment formula.
double disk_below(double r, double c) {
  if (c >= r) return std::numbers::pi * r * r;
  if (c <= -r) return 0.0;
  const double seg = r * r * std::acos(c / r) - c * std::sqrt(r * r - c * c);
  return std::numbers::pi * r * r - seg;
}

}  // namespace

TEST_CASE("polygon set membership, area and orientation repair") {
  Loop hole = square(0.25);
  const PolyCurveSet s({square(1.0), hole});
  CHECK(s.area() == doctest::Approx(4.0 - 0.25));
  CHECK(s.contains(Vec(0.5, 0.5, 0)));
  CHECK_FALSE(s.contains(Vec(0.1, 0.1, 0)));
  CHECK_FALSE(s.contains(Vec(2, 0, 0)));
  CHECK(s.edge_count() == 8);
  // Outer loop counter-clockwise, hole clockwise after repair.
  CHECK(signed_area(s.loops()[0]) * signed_area(s.loops()[1]) < 0);
  const BoundaryPatch b = boundary_of_poly(s);
  CHECK(b.total_measure() == doctest::Approx(8.0 + 2.0));
  CHECK(b.mean_normal().norm() < 1e-12);
  for (const Facet& f : b.facets()) {
    // Outward normal: a step along it leaves the set.
    CHECK_FALSE(s.contains(f.centroid + 1e-6 * f.normal));
    CHECK(s.contains(f.centroid - 1e-6 * f.normal));
  }
}

TEST_CASE("invalid polygons are rejected") {
  CHECK_THROWS_AS(PolyCurveSet({Loop{{0, 0}, {1, 0}}}), InputError);
  CHECK_THROWS_AS(PolyCurveSet({Loop{{0, 0}, {1, 1}, {1, 0}, {0, 1}}}), InputError);
  CHECK_THROWS_AS(PolyCurveSet({Loop{{0, 0}, {0, 0}, {1, 0}, {0, 1}}}), InputError);
  CHECK_THROWS_AS(PolyCurveSet({square(1.0), Loop{{0.5, 0.5}, {2, 0.5}, {2, 0.7}}}), InputError);
}

TEST_CASE("exact disk intersection area") {
  const PolyCurveSet half = make_half_space(Vec::UnitY(), 0.1, 3.0);
  for (double r : {0.05, 0.3, 1.0})
    for (double cy : {-0.2, 0.0, 0.05, 0.3}) {
      const double c = 0.1 - cy;
      CHECK(half.area_in_disk(Vec(0.2, cy, 0), r) == doctest::Approx(disk_below(r, c)).epsilon(1e-12));
    }
  const PolyCurveSet disk = make_ball(Vec::Zero(), 1.0, 4096);
  CHECK(std::abs(disk.area_in_disk(Vec(5, 5, 0), 0.5)) < 1e-12);
  CHECK(disk.area_in_disk(Vec::Zero(), 0.5) == doctest::Approx(std::numbers::pi * 0.25));
}

TEST_CASE("voxel grid indexing and rasterization") {
  const VoxelSet v = rasterize(make_ball(Vec::Zero(), 1.0), 1.0 / 32, 3);
  CHECK(v.has_margin());
  CHECK(v.volume() == doctest::Approx(std::numbers::pi).epsilon(0.01));
  const auto c = v.cell_of(Vec(0.01, -0.02, 0));
  CHECK(v.get(c[0], c[1]));
  CHECK_FALSE(v.get(-1, 0));
  const size_t idx = v.index(5, 7);
  CHECK(v.coords(idx) == std::array<int, 3>{5, 7, 0});
  const VoxelSet p = v.padded(4);
  CHECK(p.count() == v.count());
  CHECK(p.dims()[0] == v.dims()[0] + 8);
  const auto pc = p.cell_of(Vec(0.3, 0.3, 0));
  const auto vc = v.cell_of(Vec(0.3, 0.3, 0));
  CHECK(p.center(pc[0], pc[1]).isApprox(v.center(vc[0], vc[1])));
}

TEST_CASE("GMTVOX1 and polygon text round trips") {
  VoxelSet v(3, {4, 3, 3}, Vec(-1, 0.5, 2), 0.25);
  v.set(1, 1, 1, true);
  v.set(2, 1, 1, true);
  std::stringstream buf;
  write_voxels(buf, v);
  CHECK(buf.str().rfind("GMTVOX1\n", 0) == 0);
  CHECK(read_voxels(buf) == v);

  std::stringstream bad("GMTVOX1\nn=2 dims=2,2 origin=0,0 spacing=1\n\x01");
  CHECK_THROWS_AS(read_voxels(bad), InputError);

  const PolyCurveSet s({square(1.0), square(0.5)});
  std::stringstream pb;
  write_poly(pb, s);
  const PolyCurveSet back = read_poly(pb);
  CHECK(back.loops().size() == 2);
  CHECK(back.area() == doctest::Approx(s.area()).epsilon(1e-15));

  std::stringstream garbage("# comment\n0,0\n1,0\nnot a number\n");
  CHECK_THROWS_AS(read_poly(garbage), InputError);
}

TEST_CASE("raw extraction returns the exact cell faces") {
  VoxelSet v(2, {6, 6, 1}, Vec::Zero(), 0.5);
  for (int i = 2; i < 4; ++i)
    for (int j = 2; j < 5; ++j) v.set(i, j, 0, true);
  const BoundaryPatch b = extract_boundary(v, 0.0);
  CHECK(b.provenance() == Provenance::extracted);
  CHECK(b.total_measure() == doctest::Approx(2 * (1.0 + 1.5)));
  CHECK(b.mean_normal().norm() < 1e-12);
}

TEST_CASE("smoothed extraction approximates the circle and sphere") {
  const double h = 1.0 / 64;
  const BoundaryPatch c = extract_boundary(rasterize(make_ball(Vec::Zero(), 1.0), h, 6), 2 * h);
  CHECK(c.total_measure() == doctest::Approx(2 * std::numbers::pi).epsilon(0.01));
  for (const Facet& f : c.facets()) CHECK(f.normal.dot(f.centroid.normalized()) > 0.95);

  const double h3 = 1.0 / 16;
  const VoxelSet b = std::get<VoxelSet>(generate("ball:R=1", {3, h3, nullptr})).padded(6);
  const BoundaryPatch s = extract_boundary(b, 2 * h3);
  CHECK(s.total_measure() == doctest::Approx(4 * std::numbers::pi).epsilon(0.03));
  CHECK(s.mean_normal().norm() < 1e-6 * s.total_measure());
}

TEST_CASE("degenerate and out-of-range extraction inputs") {
  const VoxelSet empty(2, {8, 8, 1}, Vec::Zero(), 0.1);
  const BoundaryPatch b = extract_boundary(empty, 0.1);
  CHECK(b.empty());
  CHECK(b.degenerate());
  CHECK_THROWS_AS(extract_boundary(empty, 0.5), InputError);
  CHECK_THROWS_AS(extract_boundary(empty, -0.01), InputError);
}

TEST_CASE("generator specs") {
  const GenerateContext ctx{2, 1.0 / 32, nullptr};
  CHECK(std::holds_alternative<PolyCurveSet>(generate("ball:R=0.5", ctx)));
  CHECK(std::holds_alternative<PolyCurveSet>(generate("half:normal=0,1;offset=0", ctx)));
  CHECK(std::holds_alternative<PolyCurveSet>(generate("cross:w=0.4", ctx)));
  CHECK(std::holds_alternative<PolyCurveSet>(generate("graph:f=sine;a=0.3", ctx)));
  const Generated noisy = generate("noisy:base=ball:R=0.5;p=0.1;seed=3", ctx);
  REQUIRE(std::holds_alternative<VoxelSet>(noisy));
  CHECK(std::get<VoxelSet>(noisy) == std::get<VoxelSet>(generate("noisy:base=ball:R=0.5;p=0.1;seed=3", ctx)));
  CHECK_FALSE(std::get<VoxelSet>(noisy) == std::get<VoxelSet>(generate("noisy:base=ball:R=0.5;p=0.1;seed=4", ctx)));
  CHECK_THROWS_AS(generate("wulff", ctx), InputError);
  CHECK_THROWS_AS(generate("teapot", ctx), InputError);
  CHECK_THROWS_AS(generate("ball:R=abc", ctx), InputError);

  const Anisotropy a = Anisotropy::parse("quadratic:1,0,0,4", 2);
  const PolyCurveSet w = make_wulff(a, 720);
  // The Wulff shape of sqrt(x^2 + 4 y^2) is the ellipse with semi-axes 1 and 2.
  CHECK(w.area() == doctest::Approx(2 * std::numbers::pi).epsilon(1e-3));

  CHECK(graph_function("tent", 0.3, -0.5) == doctest::Approx(-0.15));
  CHECK(graph_function("parabola", 0.3, 1.0) == doctest::Approx(0.15));
}

TEST_CASE("discrete set wrapper checks its preconditions") {
  const DiscreteSet exact = DiscreteSet::from_poly(make_ball(Vec::Zero(), 1.0));
  CHECK(exact.is_exact());
  CHECK(exact.resolution() == 0.0);
  CHECK_NOTHROW(exact.require_near_boundary(Vec(1, 0, 0)));
  CHECK_THROWS_AS(exact.require_near_boundary(Vec(0.5, 0, 0)), DomainError);
  CHECK(exact.volume_in(Ball{Vec(1, 0, 0), 0.1}) == doctest::Approx(std::numbers::pi * 0.01 / 2).epsilon(0.05));

  const double h = 1.0 / 32;
  const DiscreteSet vox = DiscreteSet::from_voxels(rasterize(make_ball(Vec::Zero(), 1.0), h, 2), 2 * h);
  CHECK_FALSE(vox.is_exact());
  CHECK(vox.resolution() == h);
  CHECK_THROWS_AS(vox.require_inside_domain(Ball{Vec(1, 0, 0), 0.5}), DomainError);
  CHECK_NOTHROW(vox.require_inside_domain(Ball{Vec(0.9, 0, 0), 0.05}));
}
