#include "doctest.h"

#include "../oracles.hpp"

#include "gmt/excess.hpp"
#include "gmt/generate.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace gmt;

TEST_CASE("circle spherical excess matches the arc formula") {
  const DiscreteSet e = DiscreteSet::from_poly(make_ball(Vec::Zero(), 1.0, 8192));
  for (double r : {0.05, 0.2, 0.5, 1.0}) {
    const DirectionFit fit = spherical_excess(e.boundary(), Vec(1, 0, 0), r);
    CHECK(fit.excess == doctest::Approx(oracle::circle_excess(1.0, r)).epsilon(2e-3));
    CHECK(fit.nu_opt.isApprox(Vec(1, 0, 0), 1e-9));
    CHECK(fit.flags == 0);
  }
}

TEST_CASE("flatness of the circle against quadrature and its optimal offset") {
  const DiscreteSet e = DiscreteSet::from_poly(make_ball(Vec(0, -1, 0), 1.0, 8192));
  for (double r : {0.1, 0.3}) {
    const Flatness f = flatness(e.boundary(), Vec::Zero(), r, Vec::UnitY());
    CHECK(f.value == doctest::Approx(oracle::circle_flatness(1.0, r)).epsilon(1e-3));
    const double best = flatness_at_offset(e.boundary(), Vec::Zero(), r, Vec::UnitY(), f.h_opt);
    CHECK(best == doctest::Approx(f.value).epsilon(1e-10));
    CHECK(flatness_at_offset(e.boundary(), Vec::Zero(), r, Vec::UnitY(), f.h_opt + 0.01 * r) > best);
  }
}

TEST_CASE("cylindrical excess of a tilted line") {
  for (double s : {0.0, 0.2, 0.7}) {
    const BoundaryPatch b = boundary_of_poly(make_half_space(Vec(-s, 1, 0).normalized(), 0.0));
    const CylinderMeasure m = cylindrical_excess(b, Vec::Zero(), 0.4, Vec::UnitY());
    CHECK(m.value == doctest::Approx(oracle::line_cylindrical_excess(s)).epsilon(1e-12));
    CHECK(m.mass == doctest::Approx(0.8 * std::sqrt(1 + s * s)).epsilon(1e-12));
    // Measured against its own normal, the line is flat.
    CHECK(cylindrical_excess(b, Vec::Zero(), 0.4, Vec(-s, 1, 0).normalized()).value < 1e-14);
  }
}

TEST_CASE("flags for empty balls and cancelling normals") {
  const BoundaryPatch b = boundary_of_poly(make_ball(Vec::Zero(), 0.1, 64));
  CHECK((spherical_excess(b, Vec(3, 3, 0), 0.5).flags & kNoBoundary) != 0);
  const DirectionFit tie = spherical_excess(b, Vec::Zero(), 0.5);
  CHECK((tie.flags & kTie) != 0);
  const double polygon_length = 64 * 2 * 0.1 * std::sin(std::numbers::pi / 64);
  CHECK(tie.excess == doctest::Approx(polygon_length / 0.5).epsilon(1e-12));
}

TEST_CASE("multiscale scan on exact and extracted boundaries") {
  const DiscreteSet exact = DiscreteSet::from_poly(make_ball(Vec::Zero(), 1.0, 4096));
  const ScaleScan sc = multiscale_scan(exact, Vec(1, 0, 0), 0.5, 0.4, 5);
  REQUIRE(sc.entries.size() == 6);
  CHECK(sc.trusted == 6);
  CHECK_FALSE(sc.early_stop);
  for (size_t k = 0; k < sc.entries.size(); ++k) {
    CHECK(sc.entries[k].r == doctest::Approx(0.4 * std::pow(0.5, k)));
    CHECK(sc.entries[k].excess <= sc.sup_excess);
  }
  // Circle excess decays like r^2.
  CHECK(sc.entries[1].excess / sc.entries[0].excess == doctest::Approx(0.25).epsilon(0.02));

  const double h = 1.0 / 32;
  const DiscreteSet vox = DiscreteSet::from_voxels(rasterize(make_ball(Vec::Zero(), 1.0), h, 16), 2 * h);
  const Vec x = vox.boundary().facets().front().centroid;
  const ScaleScan sv = multiscale_scan(vox, x, 0.5, 0.4, 8);
  CHECK(sv.early_stop);
  CHECK((sv.entries.back().flags & kEarlyStop) != 0);
  CHECK(sv.trusted == static_cast<int>(sv.entries.size()) - 1);

  std::ostringstream os;
  write_scan_csv(os, {sc}, 2);
  CHECK(os.str().rfind("x,y,k,r,excess,nu_x,nu_y,flatness,cyl_excess,flags\n", 0) == 0);
}

TEST_CASE("voxel measurements refuse balls leaving the grid") {
  const double h = 1.0 / 32;
  const DiscreteSet vox = DiscreteSet::from_voxels(rasterize(make_ball(Vec::Zero(), 1.0), h, 2), h);
  CHECK_THROWS_AS(spherical_excess(vox, Vec(1, 0, 0), 0.5), DomainError);
}
