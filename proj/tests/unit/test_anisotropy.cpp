#include "doctest.h"

#include "gmt/anisotropy.hpp"

#include <cmath>
#include <random>

using namespace gmt;

namespace {

Anisotropy diag(double a, double b) {
  Eigen::MatrixXd m(2, 2);
  m << a, 0, 0, b;
  return Anisotropy::quadratic(m);
}

}  // namespace

TEST_CASE("euclidean integrand is the norm with unit-sphere derivatives") {
  const Anisotropy a = Anisotropy::euclidean(2);
  const Vec nu(0.6, 0.8, 0);
  CHECK(a.phi(Vec::Zero(), nu) == doctest::Approx(1.0));
  CHECK(a.phi(Vec::Zero(), 3.0 * nu) == doctest::Approx(3.0));
  CHECK((a.grad(Vec::Zero(), nu) - nu).norm() < 1e-14);
  // Hessian of |v| at a unit vector is the tangential projector.
  const Mat hess = a.hess(Vec::Zero(), nu);
  CHECK((hess * nu).norm() < 1e-14);
  const Vec t(0.8, -0.6, 0);
  CHECK(t.dot(hess * t) == doctest::Approx(1.0));
}

TEST_CASE("quadratic integrand matches sqrt(nu^T A nu) and its derivatives") {
  const Anisotropy a = diag(1, 4);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Vec nu = random_unit(rng, 2);
    const double want = std::sqrt(nu.x() * nu.x() + 4 * nu.y() * nu.y());
    CHECK(a.phi(Vec::Zero(), nu) == doctest::Approx(want).epsilon(1e-13));
    // Central differences for the gradient.
    const double step = 1e-6;
    for (int k = 0; k < 2; ++k) {
      Vec e = Vec::Zero();
      e[k] = step;
      const double fd = (a.phi(Vec::Zero(), nu + e) - a.phi(Vec::Zero(), nu - e)) / (2 * step);
      CHECK(a.grad(Vec::Zero(), nu)[k] == doctest::Approx(fd).epsilon(1e-7));
    }
    // One-homogeneity: grad . nu = phi.
    CHECK(a.grad(Vec::Zero(), nu).dot(nu) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("modulated integrand scales by 1 + beta g with a compact bump") {
  Modulation m;
  m.beta = 0.5;
  m.center = Vec(0.1, 0, 0);
  m.radius = 0.4;
  const Anisotropy a = Anisotropy::modulated(Anisotropy::euclidean(2), m);
  CHECK(a.factor(m.center) == doctest::Approx(1.5));
  CHECK(a.factor(Vec(2, 0, 0)) == doctest::Approx(1.0));
  const Vec y(0.3, 0, 0);
  const double g = std::pow(1 - std::pow(0.2 / 0.4, 2), 2);
  CHECK(a.bump(y) == doctest::Approx(g));
  CHECK(a.phi(y, Vec::UnitY()) == doctest::Approx(1 + 0.5 * g));
}

TEST_CASE("parse understands the registry grammar and rejects garbage") {
  CHECK(Anisotropy::parse("euclidean", 3).is_euclidean());
  const Anisotropy q = Anisotropy::parse("quadratic:1,0,0,4", 2);
  CHECK(q.kind() == AnisotropyKind::quadratic);
  CHECK(q.phi(Vec::Zero(), Vec::UnitY()) == doctest::Approx(2.0));
  const Anisotropy w = Anisotropy::parse("euclidean;lambda=3;ell=0.5", 2);
  CHECK(w.lambda() == 3.0);
  CHECK(w.ell() == 0.5);
  const Anisotropy mod = Anisotropy::parse("modulated:euclidean;beta=0.2;center=0,0;radius=1", 2);
  CHECK(mod.kind() == AnisotropyKind::modulated);
  CHECK(mod.factor(Vec::Zero()) == doctest::Approx(1.2));
  CHECK_THROWS_AS(Anisotropy::parse("bogus", 2), InputError);
  CHECK_THROWS_AS(Anisotropy::parse("quadratic:1,2,3", 2), InputError);
  CHECK_THROWS_AS(Anisotropy::parse("quadratic:1,0,0,-1", 2), Error);
}

TEST_CASE("ellipticity validation finds the euclidean constants") {
  for (int n : {2, 3}) {
    const ValidationReport r = validate_ellipticity(Anisotropy::euclidean(n), 2000, 4);
    CHECK(r.passed);
    CHECK(r.lambda_min == doctest::Approx(1.0));
    CHECK(r.ell_min == doctest::Approx(0.0));
    CHECK(r.gradient_ok);
  }
}

TEST_CASE("ellipticity validation is deterministic and flags understated constants") {
  const Anisotropy q = diag(1, 4);
  const ValidationReport a = validate_ellipticity(q, 3000, 9);
  const ValidationReport b = validate_ellipticity(q, 3000, 9);
  CHECK(a.lambda_min == b.lambda_min);
  CHECK(a.binding == b.binding);
  // Phi ranges over [1, 2], so lambda >= 2 from the bounds line alone.
  CHECK(a.lambda_min >= 2.0);
  CHECK_FALSE(a.passed);
  CHECK_FALSE(a.violations.empty());
  const ValidationReport c = validate_ellipticity(q.with_constants(a.lambda_min * 1.01, 0.0), 3000, 9);
  CHECK(c.passed);
}

TEST_CASE("modulated integrand reports a positive x-Lipschitz constant") {
  Modulation m;
  m.beta = 0.3;
  m.radius = 0.5;
  const ValidationReport r = validate_ellipticity(Anisotropy::modulated(Anisotropy::euclidean(2), m), 3000, 2);
  CHECK(r.ell_min > 0.0);
  CHECK(r.ell_phi > 0.0);
  CHECK(r.ell_phi <= r.ell_min + 1e-12);
}
