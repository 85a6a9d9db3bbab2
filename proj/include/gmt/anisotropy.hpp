#pragma once

#include "gmt/geometry.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gmt {

enum class AnisotropyKind { euclidean, quadratic, modulated };

/// Bump modulation Phi(x, nu) = (1 + beta g(x)) Phi_0(nu) with
/// g(x) = (1 - (|x - c| / rho)^2)^2 inside B_rho(c) and 0 outside.
struct Modulation {
  double beta = 0.0;
  Vec center = Vec::Zero();
  double radius = 1.0;
};

/// A uniformly elliptic, regular integrand Phi(x, nu) drawn from a closed-form
/// registry: the Euclidean norm, a constant quadratic form sqrt(nu^T A nu), or a
/// quadratic form modulated in space by a C^{1,1} bump.
///
/// The declared constants (lambda, ell) are carried with the integrand; they are
/// claims that validate_ellipticity() checks by sampling.
class Anisotropy {
 public:
  static Anisotropy euclidean(int n);
  /// `a` is the n x n coefficient matrix; must be symmetric positive definite.
  static Anisotropy quadratic(const Eigen::MatrixXd& a);
  static Anisotropy modulated(const Anisotropy& base, const Modulation& mod);

  /// Parses `euclidean`, `quadratic:a11,a12,...` (n*n row-major entries) or
  /// `modulated:<base>;beta=<b>;center=<x,y[,z]>;radius=<r>`. Optional
  /// `;lambda=<v>` and `;ell=<v>` suffixes override the declared constants.
  static Anisotropy parse(std::string_view spec, int n);

  Anisotropy with_constants(double lambda, double ell) const;

  double phi(const Vec& x, const Vec& nu) const;
  Vec grad(const Vec& x, const Vec& nu) const;
  Mat hess(const Vec& x, const Vec& nu) const;

  /// Modulation factor 1 + beta g(x); 1 for unmodulated kinds.
  double factor(const Vec& x) const;
  double bump(const Vec& x) const;

  int dim() const { return n_; }
  AnisotropyKind kind() const { return kind_; }
  const Mat& matrix() const { return a_; }
  const Modulation& modulation() const { return mod_; }
  double lambda() const { return lambda_; }
  double ell() const { return ell_; }
  bool is_euclidean() const { return kind_ == AnisotropyKind::euclidean; }
  std::string describe() const;

 private:
  Anisotropy() = default;

  double base_phi(const Vec& nu) const;

  AnisotropyKind kind_ = AnisotropyKind::euclidean;
  int n_ = 2;
  Mat a_ = Mat::Zero();
  Modulation mod_;
  double lambda_ = 1.0;
  double ell_ = 0.0;
  // Eigenvalue extremes of the coefficient block.
  double mu_min_ = 1.0;
  double mu_max_ = 1.0;
};

/// One line of the ellipticity conditions, with the tightest constant observed
/// on the sample and the tuple that attained it.
struct EllipticityTerm {
  std::string name;
  double required = 0.0;
  bool ok = true;
  Vec x = Vec::Zero();
  Vec y = Vec::Zero();
  Vec nu = Vec::Zero();
  Vec nu2 = Vec::Zero();
  Vec e = Vec::Zero();
};

struct ValidationReport {
  std::vector<EllipticityTerm> lambda_terms;  // bounds, gradient, hessian, hessian_lipschitz, convexity
  EllipticityTerm ell_term;                   // |dPhi| + |d grad Phi| <= ell |x - y|
  double ell_phi = 0.0;                       // Lipschitz constant of Phi alone in x
  double lambda_min = 1.0;
  double ell_min = 0.0;
  std::string binding;                        // term attaining lambda_min
  double gradient_fd_error = 0.0;             // max relative error vs central differences
  bool gradient_ok = true;
  bool passed = true;
  std::vector<std::string> violations;
};

/// Samples (x, y, nu, nu', e) deterministically and reports the smallest
/// constants satisfying each ellipticity line, and whether the declared
/// (lambda, ell) hold. Each summand of the derivative line is compared to
/// lambda separately.
ValidationReport validate_ellipticity(const Anisotropy& a, int sample_count = 10000,
                                      std::uint64_t seed = 1);

}  // namespace gmt
