#pragma once

#include "gmt/anisotropy.hpp"
#include "gmt/discrete_set.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace gmt {

// ---------------------------------------------------------------------------
// Reifenberg flatness

struct SubBallResult {
  Vec y = Vec::Zero();
  double r = 0.0;
  Vec normal = Vec::Zero();  // the plane H_{y,r} passes through y
  double distance = 0.0;     // two-sided Hausdorff estimate divided by r
  bool separated = true;
  bool skipped = false;  // no boundary near the chosen centre
};

struct ReifenbergReport {
  double delta = 0.0;
  double delta_measured = 0.0;
  Vec worst_y = Vec::Zero();
  double worst_r = 0.0;
  bool separation_ok = true;
  size_t skipped = 0;
  std::vector<SubBallResult> balls;

  bool passed() const { return separation_ok && delta_measured <= delta; }
};

/// Samples sub-balls B_{r'}(y) inside B_r(x) with y on the boundary and r' in
/// {r/2, r/4, r/8} (never below 4h on voxel sets). The first sub-ball is
/// centred at x itself. Each sub-ball is compared against the plane through y
/// orthogonal to the spherical-excess direction: boundary points against the
/// plane, and 1000 plane-disk points against the boundary. Separation requires
/// every sampled point at distance >= 2 delta r' from the plane to lie in E on
/// the inner side and in the complement on the outer side.
ReifenbergReport reifenberg_check(const DiscreteSet& e, const Vec& x, double r, double delta, int subball_count,
                                  std::uint64_t seed, int threads = 1);

/// Columns `point,y_x,y_y[,y_z],r,nu_x,nu_y[,nu_z],distance,separated,skipped`,
/// one row per sub-ball; `point` indexes the reports.
void write_reifenberg_csv(std::ostream& out, const std::vector<ReifenbergReport>& reports, int n);

/// Calibrated threshold eps(delta): sets whose excess, Lambda and ell r stay
/// below it at scale r are expected to be (delta, r/2)-Reifenberg flat.
/// Monotone, interpolated log-log between calibration nodes.
double epsilon_for_delta(double delta);

// ---------------------------------------------------------------------------
// Height bound

struct HeightBound {
  double sup_height = 0.0;        // sup |(y - x).nu| / r over the boundary in C_nu(x, r)
  double misplaced_volume = 0.0;  // |E above delta r| + |E^c below -delta r| inside the cylinder
  double misplaced_fraction = 0.0;  // misplaced_volume / r^n
  bool empty = false;
};

HeightBound height_bound_check(const DiscreteSet& e, const Vec& x, double r, const Vec& nu, double delta);

// ---------------------------------------------------------------------------
// Lipschitz approximation

struct LipschitzApprox {
  int n = 2;
  Vec x = Vec::Zero();
  Vec nu = Vec::UnitY();
  double r = 0.0;
  double pitch = 0.0;
  int side = 0;  // nodes per axis
  std::vector<Eigen::Vector2d> nodes;  // tangential coordinates
  std::vector<double> u;               // heights along nu
  std::vector<char> good;
  std::vector<char> inside;  // node lies in the closed disk B'_r
  double coverage_defect = 0.0;
  double sup_u = 0.0;
  double lip_const = 0.0;
  double dirichlet = 0.0;
  double sigma = 0.0;
  size_t good_count = 0;
  bool ok = false;  // false when no node was good

  Frame frame() const { return make_frame(nu, n); }
};

/// Graph approximation of the boundary over the disk B'_r orthogonal to nu.
/// A column is good when the boundary crosses it exactly once at height in
/// (-r/2, r/2) and the cylindrical excess around the crossing stays below
/// sigma at every dyadic scale from r down to 4h. Other nodes are filled by
/// the McShane extension of the good values, then slopes are limited to 1.
/// `sigma` defaults to 16 Exc_nu(E, x, 2r); `pitch` defaults to r/64 in the
/// plane and r/16 in space, and is never below h/2.
LipschitzApprox lipschitz_approx(const DiscreteSet& e, const Vec& x, double r, const Vec& nu,
                                 std::optional<double> sigma = std::nullopt,
                                 std::optional<double> pitch = std::nullopt);

/// Node table `t1[,t2],x,y[,z],u,good`.
void write_lipschitz_csv(std::ostream& out, const LipschitzApprox& la);

/// max over the fixed 12-function test dictionary of
/// |(1/r^{n-1}) int A grad u . grad phi| / sup |grad phi|,
/// with A the tangential block of the Hessian of Phi(x, .) at nu.
double harmonicity_residual(const LipschitzApprox& la, const Anisotropy& a, const Vec& x);

// ---------------------------------------------------------------------------
// Caccioppoli ratio and tilt step

struct CaccioppoliRatio {
  double ratio = 0.0;
  double excess = 0.0;      // cylindrical excess at r
  double flatness = 0.0;    // flatness at 2r
  double denominator = 0.0;
  bool infinite = false;
};

CaccioppoliRatio caccioppoli_ratio(const DiscreteSet& e, const Vec& x, double r, const Vec& nu, double lambda,
                                   double ell);

struct TiltOptions {
  double eta = 1.0;       // weight of Lambda inside chi
  double chi_constant = 1.0;
  std::optional<double> sigma;
};

struct TiltReport {
  Vec nu_old = Vec::Zero();
  Vec nu_new = Vec::Zero();
  Eigen::Vector2d slope = Eigen::Vector2d::Zero();
  double excess_before = 0.0;
  double excess_after = 0.0;
  double chi = 0.0;
  double decay_ratio = 0.0;
  double dirichlet = 0.0;  // of the Lipschitz approximation on the r/sqrt(2) cylinder
  double fit_residual = 0.0;
};

/// Excess of the boundary in B_r(x) measured against a fixed direction:
/// (1/r^{n-1}) int (1 - nu . nu_E).
double directional_excess(const BoundaryPatch& b, const Vec& x, double r, const Vec& nu);

/// Least-squares affine fit on the good nodes, weighted by the trapezoid
/// quadrature of the grid. Returns (offset, slope, weighted residual).
struct AffineFit {
  double offset = 0.0;
  Eigen::Vector2d slope = Eigen::Vector2d::Zero();
  double residual = 0.0;
};
AffineFit fit_affine(const LipschitzApprox& la);
double affine_residual(const LipschitzApprox& la, double offset, const Eigen::Vector2d& slope);

/// Throws DomainError when lipschitz_approx finds no good node.
TiltReport tilt_step(const DiscreteSet& e, const Vec& x, double r, double theta, const Anisotropy& a, double lambda,
                     const TiltOptions& options = {});

}  // namespace gmt
