#include "doctest.h"

#include "../oracles.hpp"

#include "gmt/generate.hpp"
#include "gmt/regularity.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace gmt;

namespace {

// A boundary point of the 2048-gon: the midpoint of an edge.
Vec circle_point(double angle) {
  return Vec(std::cos(angle), std::sin(angle), 0) * std::cos(std::numbers::pi / 2048);
}

DiscreteSet unit_circle() { return DiscreteSet::from_poly(make_ball(Vec::Zero(), 1.0, 2048)); }

}  // namespace

TEST_CASE("reifenberg flatness of the circle grows like the sagitta") {
  const DiscreteSet circ = unit_circle();
  const Vec x = circle_point(0.3);
  for (double r : {0.2, 0.4}) {
    const ReifenbergReport rep = reifenberg_check(circ, x, r, 0.3, 16, 1);
    CHECK(rep.separation_ok);
    CHECK(rep.passed());
    // The best line sits halfway down the sagitta of the largest sub-ball.
    CHECK(rep.delta_measured == doctest::Approx(0.5 * oracle::sagitta_ratio(1.0, r)).epsilon(0.1));
  }
  const ReifenbergReport tight = reifenberg_check(circ, x, 0.4, 0.05, 16, 1);
  CHECK_FALSE(tight.passed());
}

TEST_CASE("reifenberg check on half-space and cross corner") {
  const DiscreteSet half = DiscreteSet::from_poly(make_half_space(Vec::UnitY(), 0.0));
  const ReifenbergReport flat = reifenberg_check(half, Vec::Zero(), 0.5, 0.01, 8, 2);
  CHECK(flat.delta_measured < 1e-12);
  CHECK(flat.passed());
  const ReifenbergReport corner =
      reifenberg_check(DiscreteSet::from_poly(make_cross(0.4)), Vec(0.2, 0.2, 0), 0.2, 0.1, 8, 2);
  CHECK_FALSE(corner.passed());
  CHECK(corner.delta_measured > 0.5);
  std::ostringstream os;
  write_reifenberg_csv(os, {flat}, 2);
  CHECK(os.str().rfind("point,y_x,y_y,r,nu_x,nu_y,distance,separated,skipped\n", 0) == 0);
}

TEST_CASE("epsilon table is monotone and interpolates") {
  CHECK(epsilon_for_delta(0.1) == doctest::Approx(0.025));
  CHECK(epsilon_for_delta(0.05) < epsilon_for_delta(0.1));
  CHECK(epsilon_for_delta(0.07) > epsilon_for_delta(0.05));
  CHECK(epsilon_for_delta(0.07) < epsilon_for_delta(0.1));
}

TEST_CASE("height bound on the circle equals the sagitta") {
  const DiscreteSet circ = unit_circle();
  const Vec x = circle_point(1.0);
  const HeightBound hb = height_bound_check(circ, x, 0.2, x.normalized(), 0.1);
  CHECK_FALSE(hb.empty);
  CHECK(hb.sup_height == doctest::Approx(oracle::sagitta_ratio(1.0, 0.2)).epsilon(0.05));
}

TEST_CASE("lipschitz approximation of a tilted line is the line itself") {
  const double s = 0.2;
  const DiscreteSet line = DiscreteSet::from_poly(make_half_space(Vec(-s, 1, 0).normalized(), 0.0));
  const LipschitzApprox la = lipschitz_approx(line, Vec::Zero(), 1.0, Vec::UnitY());
  CHECK(la.ok);
  CHECK(la.good_count == la.nodes.size());
  CHECK(la.coverage_defect == doctest::Approx(0.0));
  CHECK(la.lip_const == doctest::Approx(s).epsilon(1e-9));
  // int |u'|^2 over [-1, 1] divided by r.
  CHECK(la.dirichlet == doctest::Approx(s * s * 2.0).epsilon(0.05));
  for (size_t i = 0; i < la.nodes.size(); ++i) CHECK(la.u[i] == doctest::Approx(s * la.nodes[i][0]).epsilon(1e-9));
  CHECK(std::abs(harmonicity_residual(la, Anisotropy::euclidean(2), Vec::Zero())) < 1e-12);
  const AffineFit fit = fit_affine(la);
  CHECK(fit.slope[0] == doctest::Approx(s));
  CHECK(fit.residual < 1e-12);
}

TEST_CASE("lipschitz approximation follows a smooth graph") {
  const DiscreteSet g = DiscreteSet::from_poly(make_graph("sine", 0.3));
  const LipschitzApprox la = lipschitz_approx(g, Vec::Zero(), 0.5, Vec::UnitY());
  double worst = 0.0;
  for (size_t i = 0; i < la.nodes.size(); ++i) {
    const double t = la.nodes[i][0];
    worst = std::max(worst, std::abs(la.u[i] - (0.3 / std::numbers::pi) * std::sin(std::numbers::pi * t)));
  }
  CHECK(worst < 1e-5);
  std::ostringstream os;
  write_lipschitz_csv(os, la);
  CHECK(os.str().rfind("t1,x,y,u,good\n", 0) == 0);
}

TEST_CASE("caccioppoli ratio is finite and moderate on the circle") {
  const DiscreteSet circ = unit_circle();
  const Vec x = circle_point(0.3);
  for (double r : {0.4, 0.2, 0.1}) {
    const CaccioppoliRatio c = caccioppoli_ratio(circ, x, r, x.normalized(), 0.0, 0.0);
    CHECK_FALSE(c.infinite);
    CHECK(c.ratio > 0.5);
    CHECK(c.ratio < 5.0);
  }
  const DiscreteSet half = DiscreteSet::from_poly(make_half_space(Vec::UnitY(), 0.0));
  const CaccioppoliRatio flat = caccioppoli_ratio(half, Vec::Zero(), 0.3, Vec::UnitY(), 0.0, 0.0);
  CHECK(flat.excess == doctest::Approx(0.0));
}

TEST_CASE("tilt step on circle and tilted half-space") {
  const DiscreteSet circ = unit_circle();
  const Anisotropy a = Anisotropy::euclidean(2);
  for (double r : {0.4, 0.2}) {
    const TiltReport t = tilt_step(circ, circle_point(0.3), r, 0.5, a, 0.0);
    CHECK(t.excess_after / t.excess_before == doctest::Approx(0.25).epsilon(0.05));
    CHECK((t.nu_new - t.nu_old).squaredNorm() <= 4.0 * t.dirichlet + 1e-12);
  }
  const Vec nrm = Vec(-0.1, 1, 0).normalized();
  const TiltReport h = tilt_step(DiscreteSet::from_poly(make_half_space(nrm, 0.0)), Vec::Zero(), 0.5, 0.5, a, 0.0);
  CHECK(h.nu_new.isApprox(nrm, 1e-9));
  CHECK(h.excess_after < 1e-12);
  CHECK(directional_excess(circ.boundary(), Vec(1, 0, 0), 0.3, Vec::UnitX()) ==
        doctest::Approx(oracle::circle_excess(1.0, 0.3)).epsilon(1e-3));
}

TEST_CASE("three-dimensional regularity on the voxel sphere") {
  const double h = 1.0 / 16;
  const VoxelSet v = std::get<VoxelSet>(generate("ball:R=1", {3, h, nullptr})).padded(10);
  const DiscreteSet e = DiscreteSet::from_voxels(v, 2 * h);
  const Vec x = e.boundary().facets()[e.boundary().size() / 3].centroid;
  const ReifenbergReport rep = reifenberg_check(e, x, 0.5, 0.3, 4, 1);
  CHECK(rep.separation_ok);
  CHECK(rep.delta_measured < 0.3);
  const LipschitzApprox la = lipschitz_approx(e, x, 0.4, x.normalized());
  CHECK(la.good_count > la.nodes.size() / 2);
  const TiltReport t = tilt_step(e, x, 0.5, 0.5, Anisotropy::euclidean(3), 0.0);
  CHECK(t.excess_after < t.excess_before);
}
