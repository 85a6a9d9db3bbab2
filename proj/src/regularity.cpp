#include "gmt/regularity.hpp"

#include "gmt/excess.hpp"
#include "gmt/parallel.hpp"
#include "gmt/text.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <random>

namespace gmt {

namespace {

constexpr int kPlaneSamples = 1000;

/// Points on a clipped boundary patch: segments are subdivided to `spacing`,
/// surface facets contribute their centroid and the vertices inside `keep`.
std::vector<Vec> boundary_samples(const BoundaryPatch& clipped, double spacing, const Region* keep) {
  std::vector<Vec> pts;
  for (const Facet& f : clipped.facets()) {
    if (f.nv == 2) {
      const int m = std::max(1, static_cast<int>(std::ceil((f.v[1] - f.v[0]).norm() / spacing)));
      for (int i = 0; i <= m; ++i) pts.push_back(f.v[0] + (f.v[1] - f.v[0]) * (static_cast<double>(i) / m));
      continue;
    }
    pts.push_back(f.centroid);
    for (int i = 0; i < f.nv; ++i)
      if (!keep || region_contains(*keep, f.v[static_cast<size_t>(i)])) pts.push_back(f.v[static_cast<size_t>(i)]);
  }
  return pts;
}

SubBallResult examine_sub_ball(const DiscreteSet& e, const Vec& y, double rr, double delta) {
  SubBallResult out;
  out.y = y;
  out.r = rr;
  const int n = e.dim();
  const DirectionFit fit = spherical_excess(e.boundary(), y, rr);
  if (fit.flags & kNoBoundary) {
    out.skipped = true;
    return out;
  }
  const Vec nu = fit.nu_opt;
  out.normal = nu;
  const Frame frame = make_frame(nu, n);

  const Region ball = Ball{y, rr};
  const BoundaryPatch clipped = clip_to_region(e.boundary(), ball);
  double far = 0.0;
  for (const Vec& p : boundary_samples(clipped, rr / kPlaneSamples, &ball)) far = std::max(far, std::abs((p - y).dot(nu)));

  for (const auto& t : unit_disk_samples(n, kPlaneSamples)) {
    const Vec q = y + frame.to_world(t * rr, 0.0);
    const double d = distance_to_facets(clipped, q, 2.0 * rr);
    far = std::max(far, std::isfinite(d) ? d : 2.0 * rr);
  }
  out.distance = far / rr;

  const double band = 2.0 * delta * rr;
  for (const Vec& s : unit_ball_samples(n, n == 2 ? 2000 : 4000)) {
    const Vec p = y + rr * s;
    const double height = (p - y).dot(nu);
    if (height >= band && e.contains(p)) out.separated = false;
    if (height <= -band && !e.contains(p)) out.separated = false;
    if (!out.separated) break;
  }
  return out;
}

}  // namespace

ReifenbergReport reifenberg_check(const DiscreteSet& e, const Vec& x, double r, double delta, int subball_count,
                                  std::uint64_t seed, int threads) {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  if (!(delta > 0.0)) throw InputError("delta must be positive");
  if (subball_count < 1) throw InputError("subball_count must be >= 1");
  e.require_inside_domain(Ball{x, r});

  const BoundaryPatch inside = clip_to_region(e.boundary(), Ball{x, r});
  if (inside.empty()) throw DomainError("no boundary inside B_r(x)");
  std::vector<Vec> centres;
  for (const Facet& f : inside.facets()) centres.push_back(f.centroid);

  const double h = e.resolution();
  std::vector<double> levels;
  for (int j = 1; j <= 3; ++j) {
    const double rr = r / std::pow(2.0, j);
    if (j == 1 || rr >= 4.0 * h) levels.push_back(rr);
  }

  // The first sub-ball sits at x when x is on the boundary, otherwise at the
  // nearest sampled boundary point.
  Vec first = x;
  if (!(e.distance_to_boundary(x, 2.0 * e.boundary_tolerance() + 1e-12) <= e.boundary_tolerance())) {
    first = *std::min_element(centres.begin(), centres.end(),
                              [&](const Vec& a, const Vec& b) { return (a - x).norm() < (b - x).norm(); });
  }

  struct Job {
    Vec y;
    double r;
    bool valid;
  };
  std::vector<Job> jobs;
  jobs.push_back({first, levels.front(), (first - x).norm() + levels.front() <= r});
  std::mt19937_64 rng(seed);
  for (int i = 1; i < subball_count; ++i) {
    const double rr = levels[static_cast<size_t>(i) % levels.size()];
    std::vector<size_t> eligible;
    for (size_t c = 0; c < centres.size(); ++c)
      if ((centres[c] - x).norm() + rr <= r) eligible.push_back(c);
    if (eligible.empty()) {
      jobs.push_back({x, rr, false});
      continue;
    }
    std::uniform_int_distribution<size_t> pick(0, eligible.size() - 1);
    jobs.push_back({centres[eligible[pick(rng)]], rr, true});
  }

  ReifenbergReport rep;
  rep.delta = delta;
  rep.balls.resize(jobs.size());
  parallel_for(jobs.size(), threads, [&](size_t i) {
    if (!jobs[i].valid) {
      rep.balls[i].y = jobs[i].y;
      rep.balls[i].r = jobs[i].r;
      rep.balls[i].skipped = true;
      return;
    }
    rep.balls[i] = examine_sub_ball(e, jobs[i].y, jobs[i].r, delta);
  });
  bool any = false;
  for (const SubBallResult& b : rep.balls) {
    if (b.skipped) {
      ++rep.skipped;
      continue;
    }
    if (!any || b.distance > rep.delta_measured) {
      rep.delta_measured = b.distance;
      rep.worst_y = b.y;
      rep.worst_r = b.r;
    }
    any = true;
    rep.separation_ok = rep.separation_ok && b.separated;
  }
  if (!any) throw DomainError("every sampled sub-ball was skipped");
  return rep;
}

void write_reifenberg_csv(std::ostream& out, const std::vector<ReifenbergReport>& reports, int n) {
  out << "point,y_x,y_y" << (n == 3 ? ",y_z" : "") << ",r,nu_x,nu_y" << (n == 3 ? ",nu_z" : "")
      << ",distance,separated,skipped\n";
  for (size_t p = 0; p < reports.size(); ++p) {
    for (const SubBallResult& b : reports[p].balls) {
      out << p << ",";
      for (int a = 0; a < n; ++a) out << text::fmt(b.y[a]) << ",";
      out << text::fmt(b.r) << ",";
      for (int a = 0; a < n; ++a) out << text::fmt(b.normal[a]) << ",";
      out << text::fmt(b.distance) << "," << int(b.separated) << "," << int(b.skipped) << "\n";
    }
  }
}

double epsilon_for_delta(double delta) {
  if (!(delta > 0.0)) throw InputError("delta must be positive");
  // Nodes (delta, eps). On circles of radius R the excess at r is about
  // r^2 / (3 R^2), and the sub-balls of radius r' <= r/2 used by
  // reifenberg_check deviate from their planes by r' / (2R) <= r / (4R).
  // Circles therefore allow eps = 16 delta^2 / 3; the table uses 5 delta^2 / 2,
  // about half of that.
  static constexpr std::array<std::array<double, 2>, 6> kTable{{
      {0.01, 2.5e-4}, {0.02, 1e-3}, {0.05, 6.25e-3}, {0.1, 2.5e-2}, {0.2, 0.1}, {0.5, 0.625},
  }};
  if (delta <= kTable.front()[0]) return kTable.front()[1] * (delta / kTable.front()[0]) * (delta / kTable.front()[0]);
  if (delta >= kTable.back()[0]) return kTable.back()[1];
  for (size_t i = 1; i < kTable.size(); ++i) {
    if (delta <= kTable[i][0]) {
      const double s = std::log(delta / kTable[i - 1][0]) / std::log(kTable[i][0] / kTable[i - 1][0]);
      return std::exp(std::log(kTable[i - 1][1]) + s * std::log(kTable[i][1] / kTable[i - 1][1]));
    }
  }
  return kTable.back()[1];
}

HeightBound height_bound_check(const DiscreteSet& e, const Vec& x, double r, const Vec& nu, double delta) {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  const int n = e.dim();
  const Vec axis = unit(nu, n);
  const Cylinder cyl{x, r, axis};
  e.require_inside_domain(cyl);
  HeightBound out;
  const Region region = cyl;
  const BoundaryPatch clipped = clip_to_region(e.boundary(), region);
  out.empty = clipped.empty();
  for (const Vec& p : boundary_samples(clipped, r, &region))
    out.sup_height = std::max(out.sup_height, std::abs((p - x).dot(axis)) / r);

  const Frame frame = make_frame(axis, n);
  const int cells = n == 2 ? 128 : 40;
  const double q = 2.0 * r / cells;
  const int kmax = n == 3 ? cells : 1;
  size_t misplaced = 0;
  for (int k = 0; k < kmax; ++k) {
    for (int j = 0; j < cells; ++j) {
      Eigen::Vector2d t(-r + (j + 0.5) * q, n == 3 ? -r + (k + 0.5) * q : 0.0);
      if (t.squaredNorm() >= r * r) continue;
      for (int i = 0; i < cells; ++i) {
        const double s = -r + (i + 0.5) * q;
        if (std::abs(s) <= delta * r) continue;
        const bool in = e.contains(x + frame.to_world(t, s));
        if ((s > 0.0 && in) || (s < 0.0 && !in)) ++misplaced;
      }
    }
  }
  out.misplaced_volume = static_cast<double>(misplaced) * std::pow(q, n);
  out.misplaced_fraction = out.misplaced_volume / std::pow(r, n);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

/// Heights at which the line x + t + s nu meets the facets, within |s| < window.
std::vector<double> column_crossings(const BoundaryPatch& b, const Vec& x, const Frame& frame,
                                     const Eigen::Vector2d& t, double window) {
  const int n = frame.n;
  Box box;
  box.extend(x + frame.to_world(t, -window));
  box.extend(x + frame.to_world(t, window));
  const double pad = 1e-9 * window;
  box.lo.array() -= pad;
  box.hi.array() += pad;
  std::vector<double> hits;
  auto local = [&](const Vec& p) {
    const Vec d = p - x;
    const Eigen::Vector2d tt = frame.tangential(d);
    return Eigen::Vector3d(tt[0], tt[1], d.dot(frame.normal));
  };
  for (size_t id : b.candidates(box)) {
    const Facet& f = b.facets()[id];
    if (n == 2) {
      const Eigen::Vector3d a = local(f.v[0]), c = local(f.v[1]);
      const double dt = c[0] - a[0];
      if (std::abs(dt) < 1e-15) continue;
      const double lam = (t[0] - a[0]) / dt;
      if (lam < -1e-12 || lam > 1.0 + 1e-12) continue;
      hits.push_back(a[2] + lam * (c[2] - a[2]));
      continue;
    }
    const int tri_count = f.nv == 4 ? 2 : 1;
    for (int tri = 0; tri < tri_count; ++tri) {
      const Eigen::Vector3d p0 = local(f.v[0]);
      const Eigen::Vector3d p1 = local(f.v[static_cast<size_t>(1 + tri)]);
      const Eigen::Vector3d p2 = local(f.v[static_cast<size_t>(2 + tri)]);
      const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
      if (std::abs(det) < 1e-18) continue;
      const double l1 = ((t[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (t[1] - p0[1])) / det;
      const double l2 = ((p1[0] - p0[0]) * (t[1] - p0[1]) - (t[0] - p0[0]) * (p1[1] - p0[1])) / det;
      const double tol = 1e-12;
      if (l1 < -tol || l2 < -tol || l1 + l2 > 1.0 + tol) continue;
      hits.push_back(p0[2] + l1 * (p1[2] - p0[2]) + l2 * (p2[2] - p0[2]));
    }
  }
  std::vector<double> kept;
  for (double s : hits)
    if (std::abs(s) < window) kept.push_back(s);
  std::sort(kept.begin(), kept.end());
  std::vector<double> unique;
  for (double s : kept)
    if (unique.empty() || s - unique.back() > 1e-9 * window) unique.push_back(s);
  return unique;
}

double interpolate(const LipschitzApprox& la, const Eigen::Vector2d& t) {
  const double p = la.pitch;
  const int last = la.side - 1;
  auto coord = [&](double v, int& i, double& f) {
    const double g = std::clamp((v + la.r) / p, 0.0, static_cast<double>(last));
    i = std::min(static_cast<int>(std::floor(g)), last - 1);
    f = g - i;
  };
  int i = 0, j = 0;
  double fx = 0.0, fy = 0.0;
  coord(t[0], i, fx);
  if (la.n == 2) return (1.0 - fx) * la.u[static_cast<size_t>(i)] + fx * la.u[static_cast<size_t>(i + 1)];
  coord(t[1], j, fy);
  auto at = [&](int a, int b) { return la.u[static_cast<size_t>(b * la.side + a)]; };
  return (1 - fx) * (1 - fy) * at(i, j) + fx * (1 - fy) * at(i + 1, j) + (1 - fx) * fy * at(i, j + 1) +
         fx * fy * at(i + 1, j + 1);
}

/// Gradient of u on the grid cell with lower corner (i, j); intervals in 2D.
Eigen::Vector2d cell_gradient(const LipschitzApprox& la, int i, int j) {
  const double p = la.pitch;
  if (la.n == 2) return {(la.u[static_cast<size_t>(i + 1)] - la.u[static_cast<size_t>(i)]) / p, 0.0};
  auto at = [&](int a, int b) { return la.u[static_cast<size_t>(b * la.side + a)]; };
  return {(at(i + 1, j) - at(i, j) + at(i + 1, j + 1) - at(i, j + 1)) / (2.0 * p),
          (at(i, j + 1) - at(i, j) + at(i + 1, j + 1) - at(i + 1, j)) / (2.0 * p)};
}

Eigen::Vector2d cell_centre(const LipschitzApprox& la, int i, int j) {
  return {-la.r + (i + 0.5) * la.pitch, la.n == 3 ? -la.r + (j + 0.5) * la.pitch : 0.0};
}

int cells_per_axis(const LipschitzApprox& la) { return la.side - 1; }

struct NodePair {
  size_t a, b;
  double dist;
};

std::vector<NodePair> neighbour_pairs(const LipschitzApprox& la) {
  std::vector<NodePair> pairs;
  const int s = la.side;
  const double p = la.pitch;
  if (la.n == 2) {
    for (int i = 0; i + 1 < s; ++i) pairs.push_back({size_t(i), size_t(i + 1), p});
    return pairs;
  }
  auto id = [&](int i, int j) { return static_cast<size_t>(j * s + i); };
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i) {
      if (i + 1 < s) pairs.push_back({id(i, j), id(i + 1, j), p});
      if (j + 1 < s) pairs.push_back({id(i, j), id(i, j + 1), p});
      if (i + 1 < s && j + 1 < s) pairs.push_back({id(i, j), id(i + 1, j + 1), std::sqrt(2.0) * p});
      if (i > 0 && j + 1 < s) pairs.push_back({id(i, j), id(i - 1, j + 1), std::sqrt(2.0) * p});
    }
  return pairs;
}

}  // namespace

LipschitzApprox lipschitz_approx(const DiscreteSet& e, const Vec& x, double r, const Vec& nu,
                                 std::optional<double> sigma, std::optional<double> pitch) {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  const int n = e.dim();
  const BoundaryPatch& b = e.boundary();
  LipschitzApprox la;
  la.n = n;
  la.x = x;
  la.nu = unit(nu, n);
  la.r = r;
  const Frame frame = make_frame(la.nu, n);

  if (sigma && !(*sigma >= 0.0)) throw InputError("sigma must be non-negative");
  la.sigma = sigma ? *sigma : 16.0 * cylindrical_excess(b, x, 2.0 * r, la.nu).value;

  const double h = e.resolution();
  double want = pitch ? *pitch : r / (n == 2 ? 64.0 : 16.0);
  if (!(want > 0.0)) throw InputError("pitch must be positive");
  want = std::max(want, 0.5 * h);
  const int cells = std::max(2, static_cast<int>(std::lround(2.0 * r / want)));
  la.pitch = 2.0 * r / cells;
  la.side = cells + 1;

  const int rows = n == 3 ? la.side : 1;
  for (int j = 0; j < rows; ++j)
    for (int i = 0; i < la.side; ++i) {
      const Eigen::Vector2d t(-r + i * la.pitch, n == 3 ? -r + j * la.pitch : 0.0);
      la.nodes.push_back(t);
      la.inside.push_back(t.norm() <= r * (1.0 + 1e-12));
    }
  const size_t count = la.nodes.size();
  la.u.assign(count, 0.0);
  la.good.assign(count, 0);

  const double finest = 4.0 * (h > 0.0 ? h : la.pitch);
  const double limit = la.sigma * (1.0 + 1e-9) + 1e-12;
  // Corner nodes outside B'_r only support the rim cells: they keep a single
  // crossing when there is one and are never good.
  std::vector<char> known(count, 0);
  for (size_t id = 0; id < count; ++id) {
    const auto hits = column_crossings(b, x, frame, la.nodes[id], 0.5 * r);
    if (hits.size() != 1) continue;
    la.u[id] = hits.front();
    if (!la.inside[id]) {
      known[id] = 1;
      continue;
    }
    const Vec y = x + frame.to_world(la.nodes[id], hits.front());
    bool good = true;
    for (double rho = r; good && rho >= finest * (1.0 - 1e-12); rho *= 0.5)
      good = cylindrical_excess(b, y, rho, la.nu).value <= limit;
    la.good[id] = good;
    la.good_count += good;
  }
  la.ok = la.good_count > 0;
  if (!la.ok) return la;

  for (size_t id = 0; id < count; ++id) {
    if (la.good[id] || known[id]) continue;
    double best = std::numeric_limits<double>::infinity();
    for (size_t g = 0; g < count; ++g)
      if (la.good[g]) best = std::min(best, la.u[g] + (la.nodes[id] - la.nodes[g]).norm());
    la.u[id] = best;
  }

  const auto pairs = neighbour_pairs(la);
  for (int sweep = 0; sweep < 100000; ++sweep) {
    double worst = 0.0;
    for (const NodePair& pr : pairs) {
      double& ua = la.u[pr.a];
      double& ub = la.u[pr.b];
      const double excess = std::abs(ua - ub) - pr.dist;
      if (excess <= 0.0) continue;
      worst = std::max(worst, excess);
      const double shift = 0.5 * excess * (ua > ub ? 1.0 : -1.0);
      ua -= shift;
      ub += shift;
    }
    if (worst <= 1e-13 * r) break;
  }

  for (const NodePair& pr : pairs) la.lip_const = std::max(la.lip_const, std::abs(la.u[pr.a] - la.u[pr.b]) / pr.dist);
  for (size_t id = 0; id < count; ++id)
    if (la.inside[id]) la.sup_u = std::max(la.sup_u, std::abs(la.u[id]) / r);

  const int cpa = cells_per_axis(la);
  const double cell_measure = std::pow(la.pitch, n - 1);
  const double norm = std::pow(r, n - 1);
  double dirichlet = 0.0, gamma_miss = 0.0;
  const double tol = 2.0 * la.pitch;
  for (int j = 0; j < (n == 3 ? cpa : 1); ++j)
    for (int i = 0; i < cpa; ++i) {
      const Eigen::Vector2d c = cell_centre(la, i, j);
      if (c.norm() > r) continue;
      const Eigen::Vector2d g = cell_gradient(la, i, j);
      if (n == 3) la.lip_const = std::max(la.lip_const, g.norm());
      dirichlet += g.squaredNorm() * cell_measure;
      const Vec q = x + frame.to_world(c, interpolate(la, c));
      if (!(distance_to_facets(b, q, 2.0 * tol) <= tol)) gamma_miss += std::sqrt(1.0 + g.squaredNorm()) * cell_measure;
    }
  la.dirichlet = dirichlet / norm;

  double m_miss = 0.0;
  const BoundaryPatch inside = clip_to_region(b, Cylinder{x, r, la.nu});
  for (const Facet& f : inside.facets()) {
    std::vector<std::pair<Vec, double>> pieces;
    if (f.nv == 2) {
      const double len = (f.v[1] - f.v[0]).norm();
      const int m = std::max(1, static_cast<int>(std::ceil(len / (0.5 * la.pitch))));
      for (int k = 0; k < m; ++k)
        pieces.emplace_back(f.v[0] + (f.v[1] - f.v[0]) * ((k + 0.5) / m), f.measure / m);
    } else {
      pieces.emplace_back(f.centroid, f.measure);
    }
    for (const auto& [p, w] : pieces) {
      const Vec d = p - x;
      if (std::abs(d.dot(la.nu) - interpolate(la, frame.tangential(d))) > tol) m_miss += w;
    }
  }
  la.coverage_defect = (m_miss + gamma_miss) / norm;
  return la;
}

void write_lipschitz_csv(std::ostream& out, const LipschitzApprox& la) {
  const int n = la.n;
  const Frame frame = la.frame();
  out << "t1" << (n == 3 ? ",t2" : "") << ",x,y" << (n == 3 ? ",z" : "") << ",u,good\n";
  for (size_t id = 0; id < la.nodes.size(); ++id) {
    if (!la.inside[id]) continue;
    const Eigen::Vector2d& t = la.nodes[id];
    const Vec p = la.x + frame.to_world(t, la.u[id]);
    out << text::fmt(t[0]) << ",";
    if (n == 3) out << text::fmt(t[1]) << ",";
    for (int a = 0; a < n; ++a) out << text::fmt(p[a]) << ",";
    out << text::fmt(la.u[id]) << "," << int(la.good[id]) << "\n";
  }
}

// ---------------------------------------------------------------------------

namespace {

double bump(double s) { return std::abs(s) >= 1.0 ? 0.0 : (1.0 - s * s) * (1.0 - s * s); }

/// Antiderivative of bump, constant outside [-1, 1].
double bump_integral(double s) {
  s = std::clamp(s, -1.0, 1.0);
  return s - 2.0 * s * s * s / 3.0 + s * s * s * s * s / 5.0;
}

double bump_slope(double s) { return std::abs(s) >= 1.0 ? 0.0 : -4.0 * s * (1.0 - s * s); }

struct TestFunction {
  Eigen::Vector2d centre;
  double rho;
};

std::vector<TestFunction> test_dictionary(int n, double r) {
  std::vector<TestFunction> out;
  if (n == 2) {
    for (double div : {2.0, 3.0, 4.0}) {
      const double rho = r / div;
      for (double c : {-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0}) out.push_back({{(r - rho) * c, 0.0}, rho});
    }
    return out;
  }
  for (double div : {3.0, 4.0, 5.0}) {
    const double rho = r / div;
    const double d = 0.5 * (r - std::sqrt(2.0) * rho);
    for (const Eigen::Vector2d& c : {Eigen::Vector2d(d, 0), Eigen::Vector2d(-d, 0), Eigen::Vector2d(0, d),
                                    Eigen::Vector2d(0, -d)})
      out.push_back({c, rho});
  }
  return out;
}

}  // namespace

double harmonicity_residual(const LipschitzApprox& la, const Anisotropy& a, const Vec& x) {
  const int n = la.n;
  const Frame frame = la.frame();
  const Mat hess = a.hess(x, la.nu);
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n - 1; ++j)
      A(i, j) = frame.tangents[static_cast<size_t>(i)].dot(hess * frame.tangents[static_cast<size_t>(j)]);

  const double p = la.pitch;
  const int cpa = cells_per_axis(la);
  double worst = 0.0;
  for (const TestFunction& tf : test_dictionary(n, la.r)) {
    const double rho = tf.rho;
    double integral = 0.0;
    double grad_max = 0.0;
    if (n == 2) {
      for (int i = 0; i < cpa; ++i) {
        const double t0 = -la.r + i * p, t1 = t0 + p;
        const double dphi = bump((t1 - tf.centre[0]) / rho) - bump((t0 - tf.centre[0]) / rho);
        integral += A(0, 0) * cell_gradient(la, i, 0)[0] * dphi;
      }
      grad_max = 8.0 / (3.0 * std::sqrt(3.0) * rho);
    } else {
      // Exact cell integrals of grad phi for the tensor-product bump.
      for (int j = 0; j < cpa; ++j)
        for (int i = 0; i < cpa; ++i) {
          const double x0 = (-la.r + i * p - tf.centre[0]) / rho, x1 = x0 + p / rho;
          const double y0 = (-la.r + j * p - tf.centre[1]) / rho, y1 = y0 + p / rho;
          const Eigen::Vector2d int_grad((bump(x1) - bump(x0)) * rho * (bump_integral(y1) - bump_integral(y0)),
                                         (bump(y1) - bump(y0)) * rho * (bump_integral(x1) - bump_integral(x0)));
          integral += (A * cell_gradient(la, i, j)).dot(int_grad);
        }
      for (int j = 0; j <= 200; ++j)
        for (int i = 0; i <= 200; ++i) {
          const double s = -1.0 + i / 100.0, t = -1.0 + j / 100.0;
          grad_max = std::max(grad_max, std::hypot(bump_slope(s) * bump(t), bump(s) * bump_slope(t)) / rho);
        }
    }
    worst = std::max(worst, std::abs(integral) / std::pow(la.r, n - 1) / grad_max);
  }
  return worst;
}

CaccioppoliRatio caccioppoli_ratio(const DiscreteSet& e, const Vec& x, double r, const Vec& nu, double lambda,
                                   double ell) {
  if (lambda < 0.0 || ell < 0.0) throw InputError("Lambda and ell must be non-negative");
  CaccioppoliRatio out;
  out.excess = cylindrical_excess(e, x, r, nu).value;
  out.flatness = flatness(e, x, 2.0 * r, nu).value;
  out.denominator = out.flatness + lambda + ell * r;
  if (out.denominator > 0.0) {
    out.ratio = out.excess / out.denominator;
  } else if (out.excess > 1e-15) {
    out.infinite = true;
    out.ratio = std::numeric_limits<double>::infinity();
  }
  return out;
}

double directional_excess(const BoundaryPatch& b, const Vec& x, double r, const Vec& nu) {
  const int n = b.dim();
  const Vec axis = unit(nu, n);
  const BoundaryPatch clipped = clip_to_region(b, Ball{x, r});
  double s = 0.0;
  for (const Facet& f : clipped.facets()) s += (1.0 - axis.dot(f.normal)) * f.measure;
  return std::max(0.0, s) / std::pow(r, n - 1);
}

namespace {

std::vector<double> quadrature_weights(const LipschitzApprox& la) {
  std::vector<double> w(la.nodes.size(), 0.0);
  for (size_t id = 0; id < la.nodes.size(); ++id) {
    if (!la.good[id] || !la.inside[id]) continue;
    if (la.n == 2) {
      const bool end = id == 0 || id + 1 == la.nodes.size();
      w[id] = end ? 0.5 * la.pitch : la.pitch;
    } else {
      w[id] = la.pitch * la.pitch;
    }
  }
  return w;
}

}  // namespace

double affine_residual(const LipschitzApprox& la, double offset, const Eigen::Vector2d& slope) {
  const auto w = quadrature_weights(la);
  double s = 0.0;
  for (size_t id = 0; id < la.nodes.size(); ++id) {
    const double d = la.u[id] - offset - slope.dot(la.nodes[id]);
    s += w[id] * d * d;
  }
  return s;
}

AffineFit fit_affine(const LipschitzApprox& la) {
  const int unknowns = la.n;  // offset plus n-1 slopes
  const auto w = quadrature_weights(la);
  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  size_t used = 0;
  for (size_t id = 0; id < la.nodes.size(); ++id) {
    if (w[id] <= 0.0) continue;
    ++used;
    const Eigen::Vector3d phi(1.0, la.nodes[id][0], la.nodes[id][1]);
    normal += w[id] * phi * phi.transpose();
    rhs += w[id] * la.u[id] * phi;
  }
  AffineFit fit;
  if (used == 0) return fit;
  if (static_cast<int>(used) < unknowns) {
    fit.offset = rhs[0] / normal(0, 0);
  } else {
    const auto block = normal.topLeftCorner(unknowns, unknowns);
    const Eigen::VectorXd sol = block.ldlt().solve(rhs.head(unknowns));
    fit.offset = sol[0];
    fit.slope[0] = sol[1];
    if (unknowns == 3) fit.slope[1] = sol[2];
  }
  fit.residual = affine_residual(la, fit.offset, fit.slope);
  return fit;
}

TiltReport tilt_step(const DiscreteSet& e, const Vec& x, double r, double theta, const Anisotropy& a, double lambda,
                     const TiltOptions& options) {
  if (!(theta > 0.0 && theta < 1.0)) throw InputError("theta must lie in (0, 1)");
  if (!(options.eta > 0.0)) throw InputError("eta must be positive");
  const int n = e.dim();
  const DirectionFit fit = spherical_excess(e, x, r);
  if (fit.flags & kNoBoundary) throw DomainError("no boundary inside B_r(x)");

  TiltReport rep;
  rep.nu_old = fit.nu_opt;
  rep.excess_before = fit.excess;
  const LipschitzApprox la = lipschitz_approx(e, x, r / std::sqrt(2.0), rep.nu_old, options.sigma);
  if (!la.ok) throw DomainError("Lipschitz approximation found no good column");
  const AffineFit af = fit_affine(la);
  rep.slope = af.slope;
  rep.fit_residual = af.residual;
  rep.dirichlet = la.dirichlet;

  const Frame frame = la.frame();
  Vec tilted = rep.nu_old - af.slope[0] * frame.tangents[0];
  if (n == 3) tilted -= af.slope[1] * frame.tangents[1];
  rep.nu_new = tilted / std::sqrt(1.0 + af.slope.squaredNorm());

  const double ell = a.ell();
  rep.excess_after = directional_excess(e.boundary(), x, theta * r, rep.nu_new);
  rep.chi = options.chi_constant * (rep.excess_before + lambda / options.eta + ell * r);
  const double denom = theta * theta * rep.excess_before + lambda + ell * theta * r;
  if (denom > 0.0) rep.decay_ratio = rep.excess_after / denom;
  else rep.decay_ratio = rep.excess_after > 1e-15 ? std::numeric_limits<double>::infinity() : 0.0;
  return rep;
}

}  // namespace gmt
