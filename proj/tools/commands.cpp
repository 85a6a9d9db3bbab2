#include "commands.hpp"

#include "gmt/almostmin.hpp"
#include "gmt/anisotropy.hpp"
#include "gmt/excess.hpp"
#include "gmt/generate.hpp"
#include "gmt/io.hpp"
#include "gmt/measures.hpp"
#include "gmt/parallel.hpp"
#include "gmt/regularity.hpp"
#include "gmt/text.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace gmt::cli {

namespace {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Shared setup

struct Session {
  const Config& cfg;
  const RunOptions& opt;
  std::ostream& log;
  std::string command;
  int n = 2;
  double h = 0.0;
  std::optional<Generated> source;
  std::optional<Anisotropy> anisotropy;

  std::string hash() const { return cfg.hash_hex(command); }

  void write(const std::string& name, const std::string& body) const {
    fs::create_directories(opt.out_dir);
    const fs::path path = fs::path(opt.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << body;
    log << "wrote " << path.string() << "\n";
  }

  /// A CSV body: the config-hash comment, then whatever `fill` prints.
  void write_csv(const std::string& name, const std::function<void(std::ostream&)>& fill) const {
    std::ostringstream os;
    os << "# config_hash=" << hash() << "\n";
    fill(os);
    write(name, os.str());
  }
};

bool looks_like_file(const std::string& s) { return fs::exists(s) && fs::is_regular_file(s); }

bool is_voxel_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string first;
  std::getline(in, first);
  return text::trim(first) == "GMTVOX1";
}

void load_source(Session& s) {
  const std::string& set = s.cfg.get("set");
  s.n = static_cast<int>(s.cfg.integer("n"));
  if (s.n != 2 && s.n != 3) throw InputError("n must be 2 or 3");
  s.h = s.cfg.number("h");
  if (!(s.h > 0.0)) throw InputError("h must be positive");
  if (looks_like_file(set)) {
    if (is_voxel_file(set)) {
      VoxelSet v = read_voxels_file(set);
      s.n = v.dim();
      s.h = v.spacing();
      s.source = std::move(v);
    } else {
      s.n = 2;
      s.source = read_poly_file(set);
    }
    s.anisotropy = Anisotropy::parse(s.cfg.get("anisotropy"), s.n);
    return;
  }
  s.anisotropy = Anisotropy::parse(s.cfg.get("anisotropy"), s.n);
  s.source = generate(set, GenerateContext{s.n, s.h, &*s.anisotropy});
}

double radius(const Session& s) { return s.cfg.is_auto("r") ? s.cfg.number("r0") : s.cfg.number("r"); }

double theta(const Session& s) {
  const double t = s.cfg.number("theta");
  if (!(t > 0.0 && t < 1.0)) throw InputError("theta must lie in (0, 1)");
  return t;
}

int order(const Session& s) {
  if (s.cfg.is_auto("order")) return s.n == 2 ? 16 : 26;
  return static_cast<int>(s.cfg.integer("order"));
}

double smoothing_for(const Session& s, double h) {
  return s.cfg.is_auto("smoothing") ? 2.0 * h : s.cfg.number("smoothing");
}

VoxelSet to_voxels(const Session& s, const Generated& g) {
  if (const auto* v = std::get_if<VoxelSet>(&g)) return *v;
  return rasterize(std::get<PolyCurveSet>(g), s.h, 2);
}

/// Empty cells added around voxel sets so that the balls and cylinders
/// (up to radius 2r for flatness, tilted) stay inside the grid.
int padding_cells(const Session& s, double h) {
  const double reach = 3.0 * std::max(s.cfg.number("r0"), radius(s));
  return static_cast<int>(std::ceil(reach / h)) + 4;
}

DiscreteSet build_set(const Session& s, const Generated& g, bool need_voxels) {
  const std::string& rep = s.cfg.get("representation");
  if (rep != "auto" && rep != "exact" && rep != "voxel") throw InputError("representation must be auto, exact or voxel");
  if (const auto* p = std::get_if<PolyCurveSet>(&g); p && !need_voxels && rep != "voxel") return DiscreteSet::from_poly(*p);
  if (rep == "exact") throw InputError("an exact representation is only available for polygons and not for this command");
  VoxelSet v = to_voxels(s, g);
  v = v.padded(padding_cells(s, v.spacing()));
  const double smoothing = smoothing_for(s, v.spacing());
  return DiscreteSet::from_voxels(std::move(v), smoothing);
}

std::vector<Vec> points(const Session& s, const DiscreteSet& e) {
  if (e.boundary().empty()) throw DomainError("the set has no boundary (empty or full)");
  const std::string& spec = s.cfg.get("points");
  if (spec == "auto") {
    const long count = s.cfg.integer("point_count");
    if (count < 1) throw InputError("point_count must be >= 1");
    return sample_boundary_points(e.boundary(), static_cast<size_t>(count), static_cast<std::uint64_t>(s.cfg.integer("seed")));
  }
  std::vector<Vec> out;
  for (const std::string& part : text::split(spec, ';')) {
    const std::string p = text::trim(part);
    if (!p.empty()) out.push_back(text::to_vec(p, "points"));
  }
  if (out.empty()) throw InputError("points list is empty");
  return out;
}

std::vector<double> radii(const Session& s, const DiscreteSet& e) {
  const double r0 = s.cfg.number("r0");
  if (!s.cfg.is_auto("radii")) return text::to_doubles(s.cfg.get("radii"), "radii");
  const double floor = e.is_exact() ? r0 / 16.0 : 4.0 * e.resolution();
  return dyadic_radii(r0, floor);
}

std::optional<Vec> fixed_direction(const Session& s, int n) {
  if (s.cfg.is_auto("nu")) return std::nullopt;
  return unit(text::to_vec(s.cfg.get("nu"), "nu"), n);
}

std::optional<double> sigma(const Session& s) {
  if (s.cfg.is_auto("sigma")) return std::nullopt;
  return s.cfg.number("sigma");
}

void coords(std::ostream& os, const Vec& v, int n) {
  for (int a = 0; a < n; ++a) os << text::fmt(v[a]) << ",";
}

std::string axis_names(const std::string& prefix, int n) {
  std::string out = prefix + "x," + prefix + "y";
  if (n == 3) out += "," + prefix + "z";
  return out;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_validate(Session& s) {
  const int samples = static_cast<int>(s.cfg.integer("samples"));
  if (samples < 1) throw InputError("samples must be >= 1");
  s.n = static_cast<int>(s.cfg.integer("n"));
  const Anisotropy a = Anisotropy::parse(s.cfg.get("anisotropy"), s.n);
  const ValidationReport rep = validate_ellipticity(a, samples, static_cast<std::uint64_t>(s.cfg.integer("seed")));
  s.write_csv("anisotropy.csv", [&](std::ostream& os) {
    os << "term,constant,ok\n";
    for (const EllipticityTerm& t : rep.lambda_terms) os << t.name << "," << text::fmt(t.required) << "," << int(t.ok) << "\n";
    os << rep.ell_term.name << "," << text::fmt(rep.ell_term.required) << "," << int(rep.ell_term.ok) << "\n";
    os << "ell_phi," << text::fmt(rep.ell_phi) << ",1\n";
    os << "gradient_fd_error," << text::fmt(rep.gradient_fd_error) << "," << int(rep.gradient_ok) << "\n";
    os << "lambda_min," << text::fmt(rep.lambda_min) << "," << int(rep.passed) << "\n";
    os << "ell_min," << text::fmt(rep.ell_min) << "," << int(rep.passed) << "\n";
  });
  s.log << a.describe() << "\nlambda_min = " << text::fmt(rep.lambda_min) << " (" << rep.binding << ")\nell_min = "
        << text::fmt(rep.ell_min) << "\n";
  for (const std::string& v : rep.violations) s.log << "violated: " << v << "\n";
  return rep.passed ? kPass : kViolated;
}

int cmd_measure(Session& s) {
  load_source(s);
  const DiscreteSet e = build_set(s, *s.source, false);
  const double r = radius(s);
  const auto pts = points(s, e);
  const auto nu_fixed = fixed_direction(s, s.n);
  struct Row {
    double per = 0, per_phi = 0;
    DirectionFit fit;
    Vec nu;
    double cyl = 0;
    Flatness flat;
  };
  std::vector<Row> rows(pts.size());
  parallel_for(pts.size(), s.opt.threads, [&](size_t i) {
    Row& row = rows[i];
    const Ball ball{pts[i], r};
    e.require_inside_domain(ball);
    row.per = perimeter(e.boundary(), Region{ball});
    row.per_phi = perimeter_phi(e.boundary(), *s.anisotropy, Region{ball});
    row.fit = spherical_excess(e, pts[i], r);
    row.nu = nu_fixed ? *nu_fixed : row.fit.nu_opt;
    row.cyl = cylindrical_excess(e, pts[i], r, row.nu).value;
    row.flat = flatness(e, pts[i], r, row.nu);
  });
  s.write_csv("measure.csv", [&](std::ostream& os) {
    os << axis_names("", s.n) << ",r,perimeter,perimeter_phi,excess," << axis_names("nu_", s.n)
       << ",cyl_excess,flatness,flatness_offset,flags\n";
    for (size_t i = 0; i < pts.size(); ++i) {
      const Row& row = rows[i];
      coords(os, pts[i], s.n);
      os << text::fmt(r) << "," << text::fmt(row.per) << "," << text::fmt(row.per_phi) << "," << text::fmt(row.fit.excess)
         << ",";
      coords(os, row.nu, s.n);
      os << text::fmt(row.cyl) << "," << text::fmt(row.flat.value) << "," << text::fmt(row.flat.h_opt) << ","
         << (row.fit.flags | row.flat.flags) << "\n";
    }
  });
  s.log << "perimeter = " << text::fmt(perimeter(e.boundary())) << "\nperimeter_phi = "
        << text::fmt(perimeter_phi(e.boundary(), *s.anisotropy)) << "\n";
  return kPass;
}

int cmd_density(Session& s) {
  load_source(s);
  const DiscreteSet e = build_set(s, *s.source, false);
  const DensityReport rep = density_check(e, points(s, e), radii(s, e), DensityThresholds::defaults(e.dim()), s.opt.threads);
  s.write_csv("density.csv", [&](std::ostream& os) { write_density_csv(os, rep); });
  s.log << "c_vol_min = " << text::fmt(rep.c_vol_min) << "\nc_per_min = " << text::fmt(rep.c_per_min)
        << "\nc_per_max = " << text::fmt(rep.c_per_max) << "\n";
  if (!rep.passed) s.log << "violated: density thresholds\n";
  return rep.passed ? kPass : kViolated;
}

std::vector<ScaleScan> run_scans(const Session& s, const DiscreteSet& e, const std::vector<Vec>& pts) {
  const double t = theta(s);
  const double r0 = s.cfg.number("r0");
  const int k_max = static_cast<int>(s.cfg.integer("k_max"));
  std::vector<ScaleScan> scans(pts.size());
  parallel_for(pts.size(), s.opt.threads, [&](size_t i) { scans[i] = multiscale_scan(e, pts[i], t, r0, k_max); });
  return scans;
}

void write_scan_outputs(const Session& s, const std::vector<ScaleScan>& scans) {
  s.write_csv("scan.csv", [&](std::ostream& os) { write_scan_csv(os, scans, s.n); });
  std::vector<std::vector<std::pair<double, double>>> series;
  for (const ScaleScan& sc : scans) {
    std::vector<std::pair<double, double>> pts;
    for (const ScaleEntry& en : sc.entries)
      if (en.trusted()) pts.emplace_back(en.r, en.excess);
    series.push_back(std::move(pts));
  }
  s.write("scan.svg", excess_svg(series));
}

int cmd_scan(Session& s) {
  load_source(s);
  const DiscreteSet e = build_set(s, *s.source, false);
  const auto scans = run_scans(s, e, points(s, e));
  write_scan_outputs(s, scans);
  const double eps = s.cfg.number("epsilon");
  double sup = 0.0;
  for (const ScaleScan& sc : scans) sup = std::max(sup, sc.sup_excess);
  s.log << "sup_excess = " << text::fmt(sup) << "\n";
  if (sup > eps) {
    s.log << "violated: sup excess " << text::fmt(sup) << " > epsilon " << text::fmt(eps) << "\n";
    return kViolated;
  }
  return kPass;
}

std::vector<ReifenbergReport> run_reifenberg(const Session& s, const DiscreteSet& e, const std::vector<Vec>& pts,
                                             double r) {
  const double delta = s.cfg.number("delta");
  const int count = static_cast<int>(s.cfg.integer("subballs"));
  const auto seed = static_cast<std::uint64_t>(s.cfg.integer("seed"));
  std::vector<ReifenbergReport> reps(pts.size());
  parallel_for(pts.size(), s.opt.threads,
               [&](size_t i) { reps[i] = reifenberg_check(e, pts[i], r, delta, count, seed + i, 1); });
  return reps;
}

bool summarize_reifenberg(const Session& s, const std::vector<ReifenbergReport>& reps) {
  double worst = 0.0;
  bool sep = true;
  for (const auto& r : reps) {
    worst = std::max(worst, r.delta_measured);
    sep = sep && r.separation_ok;
  }
  const double delta = s.cfg.number("delta");
  s.log << "delta_measured = " << text::fmt(worst) << "\nseparation_ok = " << (sep ? "true" : "false") << "\n";
  if (worst > delta) s.log << "violated: delta_measured " << text::fmt(worst) << " > delta " << text::fmt(delta) << "\n";
  if (!sep) s.log << "violated: separation\n";
  return worst <= delta && sep;
}

int cmd_reifenberg(Session& s) {
  load_source(s);
  const DiscreteSet e = build_set(s, *s.source, false);
  const auto reps = run_reifenberg(s, e, points(s, e), radius(s));
  s.write_csv("reifenberg.csv", [&](std::ostream& os) { write_reifenberg_csv(os, reps, s.n); });
  return summarize_reifenberg(s, reps) ? kPass : kViolated;
}

Vec direction_at(const Session& s, const DiscreteSet& e, const Vec& x, double r) {
  if (auto nu = fixed_direction(s, e.dim())) return *nu;
  const DirectionFit fit = spherical_excess(e, x, r);
  if (fit.flags & kNoBoundary) throw DomainError("no boundary inside B_r(x)");
  return fit.nu_opt;
}

int cmd_lipapprox(Session& s) {
  load_source(s);
  const DiscreteSet e = build_set(s, *s.source, false);
  const double r = radius(s);
  const auto pts = points(s, e);
  std::vector<LipschitzApprox> las(pts.size());
  std::vector<double> residual(pts.size());
  parallel_for(pts.size(), s.opt.threads, [&](size_t i) {
    e.require_inside_domain(Cylinder{pts[i], 2.0 * r, direction_at(s, e, pts[i], r)});
    las[i] = lipschitz_approx(e, pts[i], r, direction_at(s, e, pts[i], r), sigma(s));
    residual[i] = las[i].ok ? harmonicity_residual(las[i], *s.anisotropy, pts[i]) : 0.0;
  });
  bool ok = true;
  s.write_csv("lipapprox.csv", [&](std::ostream& os) {
    os << axis_names("", s.n) << ",r,pitch,sigma,good,coverage_defect,sup_u,lip_const,dirichlet,harmonicity,ok\n";
    for (size_t i = 0; i < las.size(); ++i) {
      const LipschitzApprox& la = las[i];
      const bool pass = la.ok && la.lip_const <= 1.0 + 2.0 * la.pitch / r;
      ok = ok && pass;
      coords(os, pts[i], s.n);
      os << text::fmt(r) << "," << text::fmt(la.pitch) << "," << text::fmt(la.sigma) << "," << la.good_count << ","
         << text::fmt(la.coverage_defect) << "," << text::fmt(la.sup_u) << "," << text::fmt(la.lip_const) << ","
         << text::fmt(la.dirichlet) << "," << text::fmt(residual[i]) << "," << int(pass) << "\n";
    }
  });
  std::ostringstream grid;
  grid << "# config_hash=" << s.hash() << "\n";
  write_lipschitz_csv(grid, las.front());
  s.write("u.csv", grid.str());
  if (!ok) s.log << "violated: no good column or Lipschitz bound exceeded\n";
  return ok ? kPass : kViolated;
}

int cmd_caccioppoli(Session& s) {
  load_source(s);
  const DiscreteSet e = build_set(s, *s.source, false);
  const double r = radius(s);
  const double lambda = s.cfg.number("lambda");
  const double ell = s.anisotropy->ell();
  const auto pts = points(s, e);
  std::vector<CaccioppoliRatio> rows(pts.size());
  parallel_for(pts.size(), s.opt.threads,
               [&](size_t i) { rows[i] = caccioppoli_ratio(e, pts[i], r, direction_at(s, e, pts[i], r), lambda, ell); });
  const double bound = s.cfg.number("c_cacc");
  double worst = 0.0;
  s.write_csv("caccioppoli.csv", [&](std::ostream& os) {
    os << axis_names("", s.n) << ",r,excess,flatness_2r,denominator,ratio,infinite\n";
    for (size_t i = 0; i < rows.size(); ++i) {
      coords(os, pts[i], s.n);
      os << text::fmt(r) << "," << text::fmt(rows[i].excess) << "," << text::fmt(rows[i].flatness) << ","
         << text::fmt(rows[i].denominator) << "," << (rows[i].infinite ? "inf" : text::fmt(rows[i].ratio)) << ","
         << int(rows[i].infinite) << "\n";
      worst = std::max(worst, rows[i].ratio);
    }
  });
  s.log << "max_ratio = " << (std::isfinite(worst) ? text::fmt(worst) : "inf") << "\n";
  if (!(worst <= bound)) {
    s.log << "violated: Caccioppoli ratio above " << text::fmt(bound) << "\n";
    return kViolated;
  }
  return kPass;
}

int cmd_tilt(Session& s) {
  load_source(s);
  const DiscreteSet e = build_set(s, *s.source, false);
  const double r = radius(s);
  const double t = theta(s);
  const double lambda = s.cfg.number("lambda");
  TiltOptions options;
  options.eta = s.cfg.number("eta");
  options.chi_constant = s.cfg.number("chi_constant");
  options.sigma = sigma(s);
  const auto pts = points(s, e);
  std::vector<TiltReport> reps(pts.size());
  parallel_for(pts.size(), s.opt.threads,
               [&](size_t i) { reps[i] = tilt_step(e, pts[i], r, t, *s.anisotropy, lambda, options); });
  const double decay_max = s.cfg.number("decay_max");
  bool ok = true;
  s.write_csv("tilt.csv", [&](std::ostream& os) {
    os << axis_names("", s.n) << ",r,theta,excess_before,excess_after,decay_ratio,chi,slope_1"
       << (s.n == 3 ? ",slope_2," : ",") << axis_names("nu_old_", s.n) << "," << axis_names("nu_new_", s.n)
       << ",dirichlet,ok\n";
    for (size_t i = 0; i < reps.size(); ++i) {
      const TiltReport& rp = reps[i];
      const bool tilt_ok = (rp.nu_new - rp.nu_old).squaredNorm() <= 4.0 * rp.dirichlet + 1e-12;
      const bool pass = rp.decay_ratio <= decay_max && tilt_ok;
      ok = ok && pass;
      coords(os, pts[i], s.n);
      os << text::fmt(r) << "," << text::fmt(t) << "," << text::fmt(rp.excess_before) << ","
         << text::fmt(rp.excess_after) << "," << text::fmt(rp.decay_ratio) << "," << text::fmt(rp.chi) << ","
         << text::fmt(rp.slope[0]) << ",";
      if (s.n == 3) os << text::fmt(rp.slope[1]) << ",";
      coords(os, rp.nu_old, s.n);
      coords(os, rp.nu_new, s.n);
      os << text::fmt(rp.dirichlet) << "," << int(pass) << "\n";
    }
  });
  if (!ok) s.log << "violated: decay ratio above " << text::fmt(decay_max) << " or tilt bound exceeded\n";
  return ok ? kPass : kViolated;
}

LambdaCertificate certify(const Session& s, const DiscreteSet& e, const std::vector<Vec>& pts) {
  const CutGraphSpec spec = cut_weights(*s.anisotropy, e.resolution(), order(s));
  return certify_lambda(e, spec, s.cfg.number("r0"), pts, radii(s, e), s.opt.threads);
}

int cmd_certify(Session& s) {
  load_source(s);
  const DiscreteSet e = build_set(s, *s.source, true);
  const LambdaCertificate cert = certify(s, e, points(s, e));
  s.write_csv("certificate.csv", [&](std::ostream& os) { write_certificate_csv(os, cert); });
  const double bound = s.cfg.number("lambda_max");
  s.log << "lambda_hat = " << text::fmt(cert.lambda_hat) << "\nmetrication_bound = " << text::fmt(cert.metrication_bound)
        << "\n";
  if (cert.lambda_hat > bound) {
    s.log << "violated: lambda_hat " << text::fmt(cert.lambda_hat) << " > lambda_max " << text::fmt(bound) << "\n";
    return kViolated;
  }
  return kPass;
}

VoxelSet polished(const Session& s) {
  const VoxelSet v0 = to_voxels(s, *s.source);
  const double kappa = s.cfg.number("kappa");
  if (!(kappa > 0.0)) throw InputError("kappa must be positive");
  return polish(v0, kappa, cut_weights(*s.anisotropy, v0.spacing(), order(s)));
}

int cmd_polish(Session& s) {
  load_source(s);
  const VoxelSet p = polished(s);
  std::ostringstream os;
  write_voxels(os, p);
  s.write("polished.vox", os.str());
  s.log << "volume = " << text::fmt(p.volume()) << "\n";
  return kPass;
}

int cmd_singular(Session& s) {
  load_source(s);
  const DiscreteSet e = build_set(s, *s.source, false);
  const long max_points = s.cfg.integer("max_points");
  if (max_points < 1) throw InputError("max_points must be >= 1");
  const SingularScanReport rep = singular_scan(e, s.cfg.number("epsilon"), theta(s), s.cfg.number("r0"),
                                               static_cast<int>(s.cfg.integer("k_max")),
                                               static_cast<size_t>(max_points), s.opt.threads);
  s.write_csv("singular.csv", [&](std::ostream& os) { write_singular_csv(os, rep); });
  const long allowed = s.cfg.integer("singular_max");
  s.log << "scanned = " << rep.scanned << "\ncandidates = " << rep.candidates.size() << "\n";
  if (static_cast<long>(rep.candidates.size()) > allowed) {
    s.log << "violated: " << rep.candidates.size() << " singular candidates > singular_max " << allowed << "\n";
    return kViolated;
  }
  return kPass;
}

int cmd_e2e(Session& s) {
  load_source(s);
  const VoxelSet p = polished(s);
  {
    std::ostringstream os;
    write_voxels(os, p);
    s.write("polished.vox", os.str());
  }
  const DiscreteSet e = build_set(s, Generated{p}, true);
  const auto pts = points(s, e);
  const LambdaCertificate cert = certify(s, e, pts);
  s.write_csv("certificate.csv", [&](std::ostream& os) { write_certificate_csv(os, cert); });
  const auto scans = run_scans(s, e, pts);
  write_scan_outputs(s, scans);

  const double r0 = s.cfg.number("r0");
  const double delta = s.cfg.number("delta");
  const double eps = epsilon_for_delta(delta);
  double exc = 0.0;
  for (const ScaleScan& sc : scans)
    if (!sc.entries.empty()) exc = std::max(exc, sc.entries.front().excess);
  const double ell_r = s.anisotropy->ell() * r0;
  const bool hypotheses = cert.lambda_hat <= eps && exc <= eps && ell_r <= eps;

  const auto reps = run_reifenberg(s, e, pts, r0);
  s.write_csv("reifenberg.csv", [&](std::ostream& os) { write_reifenberg_csv(os, reps, s.n); });
  const bool flat = summarize_reifenberg(s, reps);

  s.write_csv("e2e.csv", [&](std::ostream& os) {
    os << "quantity,value\n";
    os << "lambda_hat," << text::fmt(cert.lambda_hat) << "\n";
    os << "excess_r0," << text::fmt(exc) << "\n";
    os << "ell_r0," << text::fmt(ell_r) << "\n";
    os << "epsilon_delta," << text::fmt(eps) << "\n";
    os << "hypotheses," << int(hypotheses) << "\n";
    os << "reifenberg," << int(flat) << "\n";
  });
  s.log << "lambda_hat = " << text::fmt(cert.lambda_hat) << "\nexcess_r0 = " << text::fmt(exc) << "\nell_r0 = "
        << text::fmt(ell_r) << "\nepsilon(delta) = " << text::fmt(eps) << "\n";
  if (!hypotheses) s.log << "violated: hypotheses (lambda_hat, excess, ell r0 <= epsilon(delta)) do not hold\n";
  return hypotheses && flat ? kPass : kViolated;
}

using Handler = int (*)(Session&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"validate-anisotropy", cmd_validate},
      {"measure", cmd_measure},
      {"density", cmd_density},
      {"scan", cmd_scan},
      {"reifenberg", cmd_reifenberg},
      {"lipapprox", cmd_lipapprox},
      {"caccioppoli", cmd_caccioppoli},
      {"tilt", cmd_tilt},
      {"certify", cmd_certify},
      {"polish", cmd_polish},
      {"singular", cmd_singular},
      {"e2e", cmd_e2e},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"validate-anisotropy", "measure", "density", "scan",
                                                 "reifenberg",          "lipapprox", "caccioppoli", "tilt",
                                                 "certify",             "polish",  "singular", "e2e"};
  return names;
}

int run(const std::string& command, const Config& config, const RunOptions& options, std::ostream& log) {
  const auto it = handlers().find(command);
  if (it == handlers().end()) throw InputError("unknown command '" + command + "'");
  if (options.threads < 1) throw InputError("threads must be >= 1");
  Session s{config, options, log, command, 2, 0.0, std::nullopt, std::nullopt};
  return it->second(s);
}

std::string excess_svg(const std::vector<std::vector<std::pair<double, double>>>& series) {
  constexpr double kW = 640, kH = 420, kL = 70, kR = 20, kT = 20, kB = 50;
  constexpr double kFloor = 1e-6;
  double rmin = 1e300, rmax = -1e300, emax = kFloor * 10;
  for (const auto& s : series)
    for (const auto& [r, e] : s) {
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
      emax = std::max(emax, e);
    }
  if (rmin > rmax) rmin = 0.01, rmax = 1.0;
  const double lx0 = std::floor(std::log10(rmin)), lx1 = std::max(lx0 + 1, std::ceil(std::log10(rmax)));
  const double ly0 = std::log10(kFloor), ly1 = std::max(ly0 + 1, std::ceil(std::log10(emax)));
  auto px = [&](double r) { return kL + (std::log10(r) - lx0) / (lx1 - lx0) * (kW - kL - kR); };
  auto py = [&](double e) { return kH - kB - (std::log10(std::max(e, kFloor)) - ly0) / (ly1 - ly0) * (kH - kT - kB); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<g stroke=\"#888\" stroke-width=\"1\" font-size=\"11\" font-family=\"sans-serif\">\n";
  for (double d = lx0; d <= lx1 + 1e-9; d += 1.0) {
    const double x = px(std::pow(10.0, d));
    os << "<line x1=\"" << x << "\" y1=\"" << kT << "\" x2=\"" << x << "\" y2=\"" << kH - kB << "\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << kH - kB + 16 << "\" text-anchor=\"middle\" stroke=\"none\">1e" << d
       << "</text>\n";
  }
  for (double d = ly0; d <= ly1 + 1e-9; d += 1.0) {
    const double y = py(std::pow(10.0, d));
    os << "<line x1=\"" << kL << "\" y1=\"" << y << "\" x2=\"" << kW - kR << "\" y2=\"" << y << "\"/>\n";
    os << "<text x=\"" << kL - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" stroke=\"none\">1e" << d << "</text>\n";
  }
  os << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\" stroke=\"none\">r</text>\n";
  os << "<text x=\"16\" y=\"" << (kT + kH - kB) / 2 << "\" text-anchor=\"middle\" stroke=\"none\" transform=\"rotate(-90 16 "
     << (kT + kH - kB) / 2 << ")\">excess</text>\n";
  os << "</g>\n";
  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  for (size_t i = 0; i < series.size(); ++i) {
    if (series[i].empty()) continue;
    os << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << colours[i % 6] << "\" points=\"";
    for (const auto& [r, e] : series[i]) os << px(r) << "," << py(e) << " ";
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace gmt::cli
