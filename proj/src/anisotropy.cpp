#include "gmt/anisotropy.hpp"

#include "gmt/text.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace gmt {

namespace {

// Lipschitz bound of the bump profile (1 - s^2)^2 in units of 1/radius,
// attained at s = 1/sqrt(3). Only used for the default declared ell.
constexpr double kBumpSlope = 1.5396007178390020;

double block_norm(const Mat& m, int n) {
  if (n == 2) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m.topLeftCorner<2, 2>(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Vec restrict(const Vec& v, int n) {
  Vec w = v;
  if (n == 2) w[2] = 0.0;
  return w;
}

}  // namespace

Anisotropy Anisotropy::euclidean(int n) {
  if (n != 2 && n != 3) throw InputError("anisotropy dimension must be 2 or 3");
  Anisotropy a;
  a.kind_ = AnisotropyKind::euclidean;
  a.n_ = n;
  a.a_.topLeftCorner(n, n).setIdentity();
  a.lambda_ = 1.0;
  a.ell_ = 0.0;
  return a;
}

Anisotropy Anisotropy::quadratic(const Eigen::MatrixXd& m) {
  const auto n = static_cast<int>(m.rows());
  if ((n != 2 && n != 3) || m.cols() != m.rows())
    throw InputError("quadratic anisotropy needs a 2x2 or 3x3 matrix");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw InputError("quadratic anisotropy matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double mu_min = es.eigenvalues().minCoeff();
  const double mu_max = es.eigenvalues().maxCoeff();
  if (!(mu_min > 0.0)) throw InputError("quadratic anisotropy matrix must be positive definite");
  Anisotropy a;
  a.kind_ = AnisotropyKind::quadratic;
  a.n_ = n;
  a.a_.topLeftCorner(n, n) = m;
  a.mu_min_ = mu_min;
  a.mu_max_ = mu_max;
  a.lambda_ = std::max(std::sqrt(mu_max), 1.0 / std::sqrt(mu_min));
  a.ell_ = 0.0;
  return a;
}

Anisotropy Anisotropy::modulated(const Anisotropy& base, const Modulation& mod) {
  if (base.kind_ == AnisotropyKind::modulated) throw InputError("modulated base must be unmodulated");
  if (!(mod.beta >= 0.0)) throw InputError("modulation amplitude beta must be >= 0");
  if (!(mod.radius > 0.0)) throw InputError("modulation radius must be > 0");
  Anisotropy a = base;
  a.kind_ = AnisotropyKind::modulated;
  a.mod_ = mod;
  a.mod_.center = restrict(mod.center, a.n_);
  a.lambda_ = std::max((1.0 + mod.beta) * std::sqrt(a.mu_max_), 1.0 / std::sqrt(a.mu_min_));
  const double max_phi = std::sqrt(a.mu_max_);
  const double max_grad = a.mu_max_ / std::sqrt(a.mu_min_);
  a.ell_ = mod.beta * kBumpSlope / mod.radius * (max_phi + max_grad);
  return a;
}

Anisotropy Anisotropy::with_constants(double lambda, double ell) const {
  if (!(lambda >= 1.0)) throw InputError("declared lambda must be >= 1");
  if (!(ell >= 0.0)) throw InputError("declared ell must be >= 0");
  const double l2 = lambda * lambda;
  if (mu_min_ < 1.0 / l2 * (1.0 - 1e-12) || mu_max_ > l2 * (1.0 + 1e-12))
    throw DomainError("matrix eigenvalues outside [1/lambda^2, lambda^2]");
  Anisotropy a = *this;
  a.lambda_ = lambda;
  a.ell_ = ell;
  return a;
}

Anisotropy Anisotropy::parse(std::string_view spec, int n) {
  auto parts = text::split(spec, ';');
  const std::string head = parts.front();
  parts.erase(parts.begin());

  Anisotropy a = euclidean(n);
  if (head == "euclidean") {
    // default constructed above
  } else if (head.rfind("quadratic:", 0) == 0) {
    const auto vals = text::to_doubles(head.substr(10), "quadratic coefficients");
    const int m = vals.size() == 4 ? 2 : vals.size() == 9 ? 3 : 0;
    if (m == 0) throw InputError("quadratic anisotropy needs 4 or 9 coefficients");
    if (m != n) throw InputError("quadratic anisotropy dimension does not match the set dimension");
    Eigen::MatrixXd mat(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) mat(i, j) = vals[static_cast<size_t>(i * m + j)];
    a = quadratic(mat);
  } else if (head.rfind("modulated:", 0) == 0) {
    const Anisotropy base = parse(head.substr(10), n);
    auto kv = text::key_values(parts);
    Modulation mod;
    if (!kv.count("beta") || !kv.count("center") || !kv.count("radius"))
      throw InputError("modulated anisotropy needs beta, center and radius");
    mod.beta = text::to_double(kv["beta"], "beta");
    mod.center = text::to_vec(kv["center"], "center");
    mod.radius = text::to_double(kv["radius"], "radius");
    a = modulated(base, mod);
  } else {
    throw InputError("unknown anisotropy '" + head + "'");
  }

  const auto kv = text::key_values(parts);
  double lambda = a.lambda_;
  double ell = a.ell_;
  if (auto it = kv.find("lambda"); it != kv.end()) lambda = text::to_double(it->second, "lambda");
  if (auto it = kv.find("ell"); it != kv.end()) ell = text::to_double(it->second, "ell");
  for (const auto& [k, v] : kv) {
    if (k != "lambda" && k != "ell" && !(a.kind_ == AnisotropyKind::modulated &&
                                         (k == "beta" || k == "center" || k == "radius")))
      throw InputError("unknown anisotropy key '" + k + "'");
  }
  return a.with_constants(lambda, ell);
}

double Anisotropy::bump(const Vec& x) const {
  if (kind_ != AnisotropyKind::modulated) return 0.0;
  const double s2 = (restrict(x, n_) - mod_.center).squaredNorm() / (mod_.radius * mod_.radius);
  if (s2 >= 1.0) return 0.0;
  const double t = 1.0 - s2;
  return t * t;
}

double Anisotropy::factor(const Vec& x) const { return 1.0 + mod_.beta * bump(x); }

double Anisotropy::base_phi(const Vec& nu) const {
  const Vec v = restrict(nu, n_);
  const double q = v.dot(a_ * v);
  if (!(q > 0.0)) throw DomainError("anisotropy evaluated at a zero normal");
  return std::sqrt(q);
}

double Anisotropy::phi(const Vec& x, const Vec& nu) const { return factor(x) * base_phi(nu); }

Vec Anisotropy::grad(const Vec& x, const Vec& nu) const {
  const Vec v = restrict(nu, n_);
  return factor(x) * (a_ * v) / base_phi(v);
}

Mat Anisotropy::hess(const Vec& x, const Vec& nu) const {
  const Vec v = unit(nu, n_);
  const double p = base_phi(v);
  const Vec av = a_ * v;
  return factor(x) * (a_ - av * av.transpose() / (p * p)) / p;
}

std::string Anisotropy::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case AnisotropyKind::euclidean: os << "euclidean"; break;
    case AnisotropyKind::quadratic: os << "quadratic"; break;
    case AnisotropyKind::modulated: os << "modulated(beta=" << mod_.beta << ")"; break;
  }
  os << " n=" << n_ << " lambda=" << lambda_ << " ell=" << ell_;
  return os.str();
}

ValidationReport validate_ellipticity(const Anisotropy& a, int sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw InputError("sample_count must be >= 1");
  const int n = a.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Vec box_center = Vec::Zero();
  double box_half = 1.0;
  if (a.kind() == AnisotropyKind::modulated) {
    box_center = a.modulation().center;
    box_half = 1.5 * a.modulation().radius;
  }
  auto random_point = [&] {
    Vec p = box_center;
    for (int i = 0; i < n; ++i) p[i] += box_half * (2.0 * uni(rng) - 1.0);
    return p;
  };

  ValidationReport rep;
  enum { kBounds, kGrad, kHess, kHessLip, kConvex, kTerms };
  const char* names[kTerms] = {"bounds", "gradient", "hessian", "hessian_lipschitz", "convexity"};
  rep.lambda_terms.resize(kTerms);
  for (int t = 0; t < kTerms; ++t) rep.lambda_terms[t].name = names[t];
  rep.ell_term.name = "spatial_lipschitz";

  auto raise = [](EllipticityTerm& term, double value, const Vec& x, const Vec& y, const Vec& nu,
                  const Vec& nu2, const Vec& e) {
    if (value > term.required) {
      term.required = value;
      term.x = x;
      term.y = y;
      term.nu = nu;
      term.nu2 = nu2;
      term.e = e;
    }
  };

  constexpr double kFdStep = 1e-5;
  constexpr double kFdTol = 1e-4;
  for (int s = 0; s < sample_count; ++s) {
    const Vec x = random_point();
    Vec y;
    if (s % 2 == 0) {
      const double step = box_half * std::pow(10.0, -4.0 + 3.0 * uni(rng));
      y = x + step * random_unit(rng, n);
    } else {
      y = random_point();
    }
    const Vec nu = random_unit(rng, n);
    Vec nu2 = nu + std::pow(10.0, -3.0 + 3.0 * uni(rng)) * random_unit(rng, n);
    nu2 = unit(nu2, n);
    Vec e = Vec::Zero();
    for (int i = 0; i < n; ++i) e[i] = gauss(rng);

    const double p = a.phi(x, nu);
    raise(rep.lambda_terms[kBounds], std::max(p, 1.0 / p), x, x, nu, nu, Vec::Zero());

    const Vec g = a.grad(x, nu);
    raise(rep.lambda_terms[kGrad], g.norm(), x, x, nu, nu, Vec::Zero());

    const Mat h = a.hess(x, nu);
    raise(rep.lambda_terms[kHess], block_norm(h, n), x, x, nu, nu, Vec::Zero());

    const double dnu = (nu - nu2).norm();
    if (dnu > 0.0) {
      const Mat h2 = a.hess(x, nu2);
      raise(rep.lambda_terms[kHessLip], block_norm(h - h2, n) / dnu, x, x, nu, nu2, Vec::Zero());
    }

    const Vec e_perp = e - e.dot(nu) * nu;
    const double perp2 = e_perp.squaredNorm();
    if (perp2 > 1e-8 * e.squaredNorm()) {
      const double curv = e.dot(h * e);
      const double ratio = curv > 0.0 ? perp2 / curv : std::numeric_limits<double>::infinity();
      raise(rep.lambda_terms[kConvex], ratio, x, x, nu, nu, e);
    }

    const double dx = (x - y).norm();
    if (dx > 0.0) {
      const double dphi = std::abs(p - a.phi(y, nu));
      const double dgrad = (g - a.grad(y, nu)).norm();
      raise(rep.ell_term, (dphi + dgrad) / dx, x, y, nu, nu, Vec::Zero());
      rep.ell_phi = std::max(rep.ell_phi, dphi / dx);
    }

    for (int i = 0; i < n; ++i) {
      Vec up = nu, dn = nu;
      up[i] += kFdStep;
      dn[i] -= kFdStep;
      const double fd = (a.phi(x, up) - a.phi(x, dn)) / (2.0 * kFdStep);
      const double err = std::abs(fd - g[i]) / std::max(g.norm(), 1e-12);
      rep.gradient_fd_error = std::max(rep.gradient_fd_error, err);
    }
  }

  rep.gradient_ok = rep.gradient_fd_error <= kFdTol;
  rep.ell_min = rep.ell_term.required;
  rep.lambda_min = 1.0;
  rep.binding = rep.lambda_terms[kBounds].name;
  for (auto& term : rep.lambda_terms) {
    if (term.required > rep.lambda_min) {
      rep.lambda_min = term.required;
      rep.binding = term.name;
    }
    term.ok = term.required <= a.lambda() * (1.0 + 1e-9);
  }
  rep.ell_term.ok = rep.ell_min <= a.ell() * (1.0 + 1e-9) + 1e-12;

  auto witness = [n](const EllipticityTerm& t) {
    std::ostringstream os;
    os << t.name << " requires " << t.required << " at x=(" << t.x.head(n).transpose() << ") nu=("
       << t.nu.head(n).transpose() << ")";
    return os.str();
  };
  for (const auto& term : rep.lambda_terms)
    if (!term.ok) rep.violations.push_back(witness(term) + " > lambda");
  if (!rep.ell_term.ok) rep.violations.push_back(witness(rep.ell_term) + " > ell");
  if (!rep.gradient_ok) rep.violations.push_back("gradient disagrees with central differences");
  rep.passed = rep.violations.empty();
  return rep;
}

}  // namespace gmt
