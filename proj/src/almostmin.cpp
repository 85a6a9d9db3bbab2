#include "gmt/almostmin.hpp"

#include "gmt/extract.hpp"
#include "gmt/maxflow.hpp"
#include "gmt/measures.hpp"
#include "gmt/parallel.hpp"
#include "gmt/text.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>

namespace gmt {

namespace {

// The cut problem restricted to the free cells in B_r(x): labels x_p = 1 for
// cells in F, unary costs from fixed neighbors, pairwise costs between free cells.
struct LocalProblem {
  std::vector<size_t> cells;
  std::vector<std::int64_t> cost_if_in;   // edges to fixed empty neighbors
  std::vector<std::int64_t> cost_if_out;  // edges to fixed set neighbors
  struct Pair {
    int p, q;
    std::int64_t w;
  };
  std::vector<Pair> pairs;

  std::int64_t cost(const std::vector<char>& labels) const {
    std::int64_t s = 0;
    for (size_t i = 0; i < cells.size(); ++i) s += labels[i] ? cost_if_in[i] : cost_if_out[i];
    for (const Pair& pr : pairs)
      if (labels[static_cast<size_t>(pr.p)] != labels[static_cast<size_t>(pr.q)]) s += pr.w;
    return s;
  }
};

bool is_border(const VoxelSet& v, const std::array<int, 3>& c) {
  for (int a = 0; a < v.dim(); ++a)
    if (c[static_cast<size_t>(a)] == 0 || c[static_cast<size_t>(a)] == v.dims()[static_cast<size_t>(a)] - 1) return true;
  return false;
}

void require_window(const VoxelSet& e, const Vec& x, double r) {
  const Box g = e.bounds();
  for (int a = 0; a < e.dim(); ++a)
    if (x[a] - r < g.lo[a] || x[a] + r > g.hi[a]) throw DomainError("competitor window leaves the voxel domain");
}

LocalProblem build_local(const VoxelSet& e, const Vec& x, double r, const CutGraphSpec& spec) {
  if (spec.n != e.dim() || std::abs(spec.h - e.spacing()) > 1e-12 * e.spacing())
    throw InputError("cut graph spec does not match the voxel grid");
  require_window(e, x, r);
  LocalProblem lp;
  const Ball ball{x, r};
  const auto lo = e.cell_of(x - Vec::Constant(r));
  const auto hi = e.cell_of(x + Vec::Constant(r));
  const int n = e.dim();
  std::unordered_map<size_t, int> id;
  for (int k = n == 3 ? std::max(lo[2], 0) : 0; k <= (n == 3 ? std::min(hi[2], e.dims()[2] - 1) : 0); ++k)
    for (int j = std::max(lo[1], 0); j <= std::min(hi[1], e.dims()[1] - 1); ++j)
      for (int i = std::max(lo[0], 0); i <= std::min(hi[0], e.dims()[0] - 1); ++i) {
        if (!ball.contains(e.center(i, j, k)) || is_border(e, {i, j, k})) continue;
        id.emplace(e.index(i, j, k), static_cast<int>(lp.cells.size()));
        lp.cells.push_back(e.index(i, j, k));
      }
  lp.cost_if_in.assign(lp.cells.size(), 0);
  lp.cost_if_out.assign(lp.cells.size(), 0);
  for (size_t p = 0; p < lp.cells.size(); ++p) {
    const auto c = e.coords(lp.cells[p]);
    const Vec cp = e.center(c[0], c[1], c[2]);
    for (size_t fam = 0; fam < spec.offsets.size(); ++fam) {
      const auto& o = spec.offsets[fam];
      for (int sgn : {1, -1}) {
        const int i = c[0] + sgn * o[0], j = c[1] + sgn * o[1], k = c[2] + sgn * o[2];
        const Vec mid = cp + 0.5 * sgn * e.spacing() * Vec(o[0], o[1], n == 3 ? o[2] : 0);
        const std::int64_t w = spec.quantized(fam, mid);
        if (e.in_grid(i, j, k)) {
          auto it = id.find(e.index(i, j, k));
          if (it != id.end()) {
            if (it->second > static_cast<int>(p)) lp.pairs.push_back({static_cast<int>(p), it->second, w});
            continue;
          }
        }
        if (e.get(i, j, k)) lp.cost_if_out[p] += w;
        else lp.cost_if_in[p] += w;
      }
    }
  }
  return lp;
}

std::vector<char> current_labels(const VoxelSet& e, const LocalProblem& lp) {
  std::vector<char> labels(lp.cells.size());
  for (size_t i = 0; i < lp.cells.size(); ++i) labels[i] = e.cells()[lp.cells[i]] ? 1 : 0;
  return labels;
}

std::vector<char> solve_local(const LocalProblem& lp) {
  const int m = static_cast<int>(lp.cells.size());
  MaxFlow g(m + 2);
  const int s = m, t = m + 1;
  for (int p = 0; p < m; ++p) {
    if (lp.cost_if_out[static_cast<size_t>(p)] > 0) g.add_edge(s, p, lp.cost_if_out[static_cast<size_t>(p)]);
    if (lp.cost_if_in[static_cast<size_t>(p)] > 0) g.add_edge(p, t, lp.cost_if_in[static_cast<size_t>(p)]);
  }
  for (const auto& pr : lp.pairs) g.add_edge(pr.p, pr.q, pr.w, pr.w);
  g.solve(s, t);
  const auto side = g.source_side(s);
  return std::vector<char>(side.begin(), side.begin() + m);
}

// Mesh Phi-perimeter of the smoothed extraction of v inside W = B_w(x),
// computed on a crop large enough that the crop edges cannot influence W.
double mesh_perimeter(const VoxelSet& v, const Vec& x, double w, double smoothing, const CutGraphSpec& spec) {
  const double h = v.spacing();
  const int n = v.dim();
  const double half = w + 3.0 * smoothing + 2.0 * h;
  const int m = static_cast<int>(std::ceil(half / h)) + 1;
  const auto c = v.cell_of(x);
  std::array<int, 3> dims{1, 1, 1};
  Vec origin = Vec::Zero();
  for (int a = 0; a < n; ++a) {
    dims[static_cast<size_t>(a)] = 2 * m + 1;
    origin[a] = v.origin()[a] + (c[static_cast<size_t>(a)] - m) * h;
  }
  VoxelSet crop(n, dims, origin, h);
  for (int k = 0; k < dims[2]; ++k)
    for (int j = 0; j < dims[1]; ++j)
      for (int i = 0; i < dims[0]; ++i) {
        const bool inner = i > 0 && j > 0 && i < dims[0] - 1 && j < dims[1] - 1 && (n == 2 || (k > 0 && k < dims[2] - 1));
        if (inner && v.get(c[0] - m + i, c[1] - m + j, n == 3 ? c[2] - m + k : 0)) crop.set(i, j, k, true);
      }
  const BoundaryPatch b = extract_boundary(crop, smoothing);
  return perimeter_phi(b, *spec.anisotropy, Region{Ball{x, w}});
}

Competitor finish(const VoxelSet& e, const Vec& x, double r, const CutGraphSpec& spec, double smoothing,
                  const LocalProblem& lp, const std::vector<char>& labels) {
  Competitor out;
  out.f = e;
  out.free_cells = lp.cells.size();
  out.cost_e = lp.cost(current_labels(e, lp));
  out.cost_f = lp.cost(labels);
  bool changed = false;
  for (size_t i = 0; i < lp.cells.size(); ++i) {
    changed = changed || (e.cells()[lp.cells[i]] != 0) != (labels[i] != 0);
    out.f.cells()[lp.cells[i]] = labels[i] ? 1 : 0;
  }
  const double norm = std::pow(r, e.dim() - 1);
  out.gap_cut = std::max<double>(0.0, static_cast<double>(out.cost_e - out.cost_f)) / spec.scale / norm;
  if (changed) {
    const double w = r + 2.0 * e.spacing() + 3.0 * smoothing;
    const double pe = mesh_perimeter(e, x, w, smoothing, spec);
    const double pf = mesh_perimeter(out.f, x, w, smoothing, spec);
    out.gap = std::max(0.0, pe - pf) / norm;
  }
  return out;
}

}  // namespace

Competitor local_optimal_competitor(const VoxelSet& e, const Vec& x, double r, const CutGraphSpec& spec,
                                    double smoothing) {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  const LocalProblem lp = build_local(e, x, r, spec);
  const auto labels = lp.cells.empty() ? std::vector<char>{} : solve_local(lp);
  return finish(e, x, r, spec, smoothing, lp, labels);
}

Competitor brute_force_competitor(const VoxelSet& e, const Vec& x, double r, const CutGraphSpec& spec,
                                  double smoothing) {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  const LocalProblem lp = build_local(e, x, r, spec);
  const size_t m = lp.cells.size();
  if (m > 22) throw InputError("brute force needs at most 22 free cells, got " + std::to_string(m));
  // Gray-code walk from the empty assignment with incremental costs.
  std::vector<std::vector<std::pair<int, std::int64_t>>> nbrs(m);
  for (const auto& pr : lp.pairs) {
    nbrs[static_cast<size_t>(pr.p)].push_back({pr.q, pr.w});
    nbrs[static_cast<size_t>(pr.q)].push_back({pr.p, pr.w});
  }
  std::vector<char> labels(m, 0);
  std::int64_t cost = lp.cost(labels);
  int pop = 0;
  std::int64_t best_cost = cost;
  int best_pop = 0;
  std::uint32_t best_code = 0, code = 0;
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int bit = __builtin_ctzll(step);
    const auto b = static_cast<size_t>(bit);
    const char old = labels[b];
    std::int64_t delta = old ? lp.cost_if_out[b] - lp.cost_if_in[b] : lp.cost_if_in[b] - lp.cost_if_out[b];
    for (const auto& [q, w] : nbrs[b]) delta += labels[static_cast<size_t>(q)] == old ? w : -w;
    labels[b] = old ? 0 : 1;
    cost += delta;
    pop += old ? -1 : 1;
    code ^= std::uint32_t{1} << bit;
    if (cost < best_cost || (cost == best_cost && pop < best_pop)) {
      best_cost = cost;
      best_pop = pop;
      best_code = code;
    }
  }
  std::vector<char> best(m);
  for (size_t i = 0; i < m; ++i) best[i] = (best_code >> i) & 1u;
  return finish(e, x, r, spec, smoothing, lp, best);
}

std::vector<double> dyadic_radii(double r0, double r_min) {
  if (!(r0 > 0.0)) throw InputError("r0 must be positive");
  std::vector<double> out;
  const double j0 = std::ceil(-std::log2(r0) - 1e-12);
  for (double r = std::exp2(-j0); r >= r_min; r *= 0.5) {
    if (r <= r0 * (1.0 + 1e-12)) out.push_back(r);
    if (out.size() > 60) break;
  }
  return out;
}

LambdaCertificate certify_lambda(const DiscreteSet& e, const CutGraphSpec& spec, double r0,
                                 const std::vector<Vec>& points, const std::vector<double>& radii, int threads) {
  const VoxelSet* v = e.voxels();
  if (!v) throw InputError("certification needs a voxel set");
  for (double r : radii)
    if (!(r > 0.0) || r > r0 * (1.0 + 1e-12)) throw InputError("certification radii must lie in (0, r0]");
  LambdaCertificate cert;
  cert.n = e.dim();
  cert.r0 = r0;
  cert.order = spec.order;
  cert.metrication_bound = spec.metrication_bound;
  cert.samples.resize(points.size() * radii.size());
  parallel_for(cert.samples.size(), threads, [&](size_t i) {
    LambdaSample& s = cert.samples[i];
    s.x = points[i / radii.size()];
    s.r = radii[i % radii.size()];
    const Competitor c = local_optimal_competitor(*v, s.x, s.r, spec, e.smoothing());
    s.gap = c.gap;
    s.gap_cut = c.gap_cut;
  });
  for (const auto& s : cert.samples) cert.lambda_hat = std::max(cert.lambda_hat, s.gap);
  cert.note = "one-sided estimate: sampled boundary centers only; balls missing the boundary have zero gap up to "
              "metrication, balls meeting it are covered by a sampled center at twice the radius; competitors "
              "optimized in the " +
              std::to_string(spec.order) + "-neighbor cut metric (relative metrication bound " +
              text::fmt(spec.metrication_bound) + "), gaps measured on the smoothed mesh";
  return cert;
}

void write_certificate_csv(std::ostream& out, const LambdaCertificate& c) {
  out << "x,y" << (c.n == 3 ? ",z" : "") << ",r,gap\n";
  for (const auto& s : c.samples) {
    for (int a = 0; a < c.n; ++a) out << text::fmt(s.x[a]) << ",";
    out << text::fmt(s.r) << "," << text::fmt(s.gap) << "\n";
  }
  out << "LAMBDA_HAT," << text::fmt(c.lambda_hat) << ",R0," << text::fmt(c.r0) << "\n";
}

VoxelSet polish(const VoxelSet& e0_in, double kappa, const CutGraphSpec& spec) {
  if (!(kappa > 0.0)) throw InputError("kappa must be positive");
  const VoxelSet e0 = e0_in.has_margin() ? e0_in : e0_in.padded(1);
  if (spec.n != e0.dim() || std::abs(spec.h - e0.spacing()) > 1e-12 * e0.spacing())
    throw InputError("cut graph spec does not match the voxel grid");
  const int n = e0.dim();
  std::vector<int> node(e0.size(), -1);
  std::vector<size_t> cells;
  for (size_t idx = 0; idx < e0.size(); ++idx) {
    if (is_border(e0, e0.coords(idx))) continue;
    node[idx] = static_cast<int>(cells.size());
    cells.push_back(idx);
  }
  const int m = static_cast<int>(cells.size());
  MaxFlow g(m + 2);
  const int s = m, t = m + 1;
  const double unary_real = e0.cell_volume() / kappa;
  const double unary_scaled = unary_real * spec.scale;
  std::vector<std::int64_t> to_s(cells.size(), 0), to_t(cells.size(), 0), incident(cells.size(), 0);
  for (size_t p = 0; p < cells.size(); ++p) {
    const auto c = e0.coords(cells[p]);
    const Vec cp = e0.center(c[0], c[1], c[2]);
    for (size_t fam = 0; fam < spec.offsets.size(); ++fam) {
      const auto& o = spec.offsets[fam];
      for (int sgn : {1, -1}) {
        const int i = c[0] + sgn * o[0], j = c[1] + sgn * o[1], k = c[2] + sgn * o[2];
        const Vec mid = cp + 0.5 * sgn * e0.spacing() * Vec(o[0], o[1], n == 3 ? o[2] : 0);
        const std::int64_t w = spec.quantized(fam, mid);
        incident[p] += w;
        const int q = e0.in_grid(i, j, k) ? node[e0.index(i, j, k)] : -1;
        if (q >= 0) {
          if (sgn == 1) g.add_edge(static_cast<int>(p), q, w, w);
        } else {
          to_t[p] += w;  // border and outside cells are fixed empty
        }
      }
    }
  }
  for (size_t p = 0; p < cells.size(); ++p) {
    // A unary weight above all incident edges already pins the label, so the
    // cap keeps the optimum while bounding the integers.
    const double capped = std::min(unary_scaled, static_cast<double>(incident[p] + 1));
    const auto u = std::max<std::int64_t>(1, std::llround(capped));
    if (e0.cells()[cells[p]]) to_s[p] += u;
    else to_t[p] += u;
    if (to_s[p] > 0) g.add_edge(s, static_cast<int>(p), to_s[p]);
    if (to_t[p] > 0) g.add_edge(static_cast<int>(p), t, to_t[p]);
  }
  g.solve(s, t);
  const auto side = g.source_side(s);
  VoxelSet out(n, e0.dims(), e0.origin(), e0.spacing());
  for (size_t p = 0; p < cells.size(); ++p) out.cells()[cells[p]] = side[p] ? 1 : 0;
  return out;
}

SingularScanReport singular_scan(const DiscreteSet& e, double epsilon, double theta, double r0, int k_max,
                                 size_t max_points, int threads) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  std::vector<Vec> points = sample_boundary_points(e.boundary(), max_points, 0);
  if (const auto* p = e.poly())
    for (const Loop& lp : p->loops())
      for (const auto& q : lp) points.emplace_back(q.x(), q.y(), 0.0);
  std::vector<char> flagged(points.size(), 0);
  std::vector<double> deepest(points.size(), 0.0);
  parallel_for(points.size(), threads, [&](size_t i) {
    ScaleScan scan;
    try {
      scan = multiscale_scan(e, points[i], theta, r0, k_max);
    } catch (const DomainError&) {
      return;  // ball leaves the domain; point not scanned
    }
    if (scan.trusted == 0) return;
    bool all = true;
    for (const auto& entry : scan.entries)
      if (entry.trusted()) all = all && entry.excess > epsilon;
    flagged[i] = all;
    deepest[i] = scan.entries[static_cast<size_t>(scan.trusted - 1)].r;
  });
  SingularScanReport rep;
  rep.n = e.dim();
  rep.epsilon = epsilon;
  rep.scanned = points.size();
  for (size_t i = 0; i < points.size(); ++i)
    if (flagged[i]) {
      rep.candidates.push_back(points[i]);
      rep.deepest_radius.push_back(deepest[i]);
    }
  return rep;
}

void write_singular_csv(std::ostream& out, const SingularScanReport& r) {
  out << "x,y" << (r.n == 3 ? ",z" : "") << ",deepest_r\n";
  for (size_t i = 0; i < r.candidates.size(); ++i) {
    for (int a = 0; a < r.n; ++a) out << text::fmt(r.candidates[i][a]) << ",";
    out << text::fmt(r.deepest_radius[i]) << "\n";
  }
}

}  // namespace gmt
