#include "gmt/generate.hpp"

#include "gmt/text.hpp"

#include <map>
#include <random>

namespace gmt {

namespace {

using P2 = Eigen::Vector2d;

}  // namespace

PolyCurveSet make_half_space(const Vec& normal, double offset, double L) {
  const Vec nu = unit(normal, 2);
  if (!(L > std::abs(offset))) throw InputError("half-space offset must lie inside the box");
  const std::array<P2, 4> box{P2(-L, -L), P2(L, -L), P2(L, L), P2(-L, L)};
  Loop out;
  auto side = [&](const P2& p) { return p.x() * nu.x() + p.y() * nu.y() - offset; };
  for (size_t i = 0; i < 4; ++i) {
    const P2& a = box[i];
    const P2& b = box[(i + 1) % 4];
    const double sa = side(a), sb = side(b);
    if (sa <= 0.0) out.push_back(a);
    if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0)) out.push_back(a + sa / (sa - sb) * (b - a));
  }
  return PolyCurveSet({out});
}

PolyCurveSet make_ball(const Vec& center, double R, int segments) {
  if (!(R > 0.0)) throw InputError("ball radius must be positive");
  if (segments < 3) throw InputError("ball needs at least 3 segments");
  Loop lp;
  for (int k = 0; k < segments; ++k) {
    const double t = 2.0 * std::numbers::pi * k / segments;
    lp.emplace_back(center.x() + R * std::cos(t), center.y() + R * std::sin(t));
  }
  return PolyCurveSet({lp});
}

PolyCurveSet make_wulff(const Anisotropy& a, int directions) {
  if (a.dim() != 2) throw InputError("wulff shapes are two-dimensional");
  if (directions < 3) throw InputError("wulff needs at least 3 directions");
  std::vector<Vec> nus;
  std::vector<double> support;
  for (int k = 0; k < directions; ++k) {
    const double t = 2.0 * std::numbers::pi * k / directions;
    nus.emplace_back(std::cos(t), std::sin(t), 0.0);
    support.push_back(a.phi(Vec::Zero(), nus.back()));
  }
  Loop lp;
  for (int k = 0; k < directions; ++k) {
    const auto j = static_cast<size_t>((k + 1) % directions);
    const auto i = static_cast<size_t>(k);
    Eigen::Matrix2d m;
    m << nus[i].x(), nus[i].y(), nus[j].x(), nus[j].y();
    lp.push_back(m.partialPivLu().solve(Eigen::Vector2d(support[i], support[j])));
  }
  return PolyCurveSet({lp});
}

PolyCurveSet make_cross(double w, double L, int arc_segments) {
  const double a = 0.5 * w;
  const double c = L - a;
  if (!(w > 0.0) || !(c > a)) throw InputError("cross needs 0 < w < L");
  if (arc_segments < 2) throw InputError("cross needs at least 2 arc segments");
  Loop lp;
  // Arm k points along angle k * pi / 2; its cap is centered at distance c.
  for (int k = 0; k < 4; ++k) {
    const double phi = k * std::numbers::pi / 2.0;
    const P2 dir(std::cos(phi), std::sin(phi));
    const P2 perp(-dir.y(), dir.x());
    lp.push_back(a * dir - a * perp);  // reflex corner before the arm
    for (int s = 0; s <= arc_segments; ++s) {
      const double t = phi - std::numbers::pi / 2.0 + std::numbers::pi * s / arc_segments;
      lp.push_back(c * dir + a * P2(std::cos(t), std::sin(t)));
    }
  }
  return PolyCurveSet({lp});
}

double graph_function(const std::string& name, double a, double x) {
  if (name == "line") return a * x;
  if (name == "sine") return a / std::numbers::pi * std::sin(std::numbers::pi * x);
  if (name == "tent") return -a * std::abs(x);
  if (name == "parabola") return 0.5 * a * x * x;
  throw InputError("unknown graph function '" + name + "'");
}

PolyCurveSet make_graph(const std::string& name, double a, double L, int segments) {
  if (!(L > 0.0)) throw InputError("graph half-width must be positive");
  if (segments < 2 || segments % 2) throw InputError("graph needs an even number of segments >= 2");
  Loop lp;
  const double bottom = -L - 1.0 - std::abs(graph_function(name, a, L)) - std::abs(graph_function(name, a, -L));
  lp.emplace_back(-L, bottom);
  lp.emplace_back(L, bottom);
  for (int k = segments; k >= 0; --k) {
    const double x = -L + 2.0 * L * k / segments;
    lp.emplace_back(x, graph_function(name, a, x));
  }
  return PolyCurveSet({lp});
}

VoxelSet make_noisy(const VoxelSet& base, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("flip rate must lie in [0, 1]");
  VoxelSet out = base.has_margin() ? base : base.padded(1);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (size_t idx = 0; idx < out.size(); ++idx) {
    const double draw = uni(rng);
    const auto c = out.coords(idx);
    bool border = false;
    for (int a = 0; a < out.dim(); ++a)
      border = border || c[static_cast<size_t>(a)] == 0 || c[static_cast<size_t>(a)] == out.dims()[static_cast<size_t>(a)] - 1;
    if (!border && draw < p) out.cells()[idx] ^= 1;
  }
  return out;
}

namespace {

struct ParsedSpec {
  std::string name;
  std::map<std::string, std::string> kv;
};

ParsedSpec parse_spec(std::string_view spec) {
  ParsedSpec out;
  const std::string s = text::trim(spec);
  const size_t colon = s.find(':');
  out.name = text::trim(s.substr(0, colon));
  if (colon == std::string::npos) return out;
  const auto parts = text::split(s.substr(colon + 1), ';');
  if (out.name == "noisy") {
    // Everything that is not a noisy option belongs to the base spec.
    std::string base;
    for (const auto& part : parts) {
      const size_t eq = part.find('=');
      const std::string key = text::trim(part.substr(0, eq));
      if (key == "p" || key == "seed") {
        out.kv[key] = text::trim(part.substr(eq + 1));
      } else if (key == "base" && base.empty()) {
        base = text::trim(part.substr(eq + 1));
      } else {
        base += ";" + part;
      }
    }
    out.kv["base"] = base;
    return out;
  }
  std::vector<std::string> nonempty;
  for (const auto& part : parts)
    if (!part.empty()) nonempty.push_back(part);
  out.kv = text::key_values(nonempty);
  return out;
}

class Keys {
 public:
  explicit Keys(const ParsedSpec& p) : p_(p) {}
  double num(const std::string& key, double fallback) {
    used_.push_back(key);
    auto it = p_.kv.find(key);
    return it == p_.kv.end() ? fallback : text::to_double(it->second, key);
  }
  double required(const std::string& key) {
    if (!p_.kv.count(key)) throw InputError(p_.name + " needs '" + key + "'");
    return num(key, 0.0);
  }
  Vec vec(const std::string& key, const Vec& fallback) {
    used_.push_back(key);
    auto it = p_.kv.find(key);
    return it == p_.kv.end() ? fallback : text::to_vec(it->second, key);
  }
  std::string str(const std::string& key, const std::string& fallback) {
    used_.push_back(key);
    auto it = p_.kv.find(key);
    return it == p_.kv.end() ? fallback : it->second;
  }
  void finish() const {
    for (const auto& [k, v] : p_.kv)
      if (std::find(used_.begin(), used_.end(), k) == used_.end())
        throw InputError("unknown key '" + k + "' for generator " + p_.name);
  }

 private:
  const ParsedSpec& p_;
  std::vector<std::string> used_;
};

int as_count(double v, const char* what) {
  if (v != std::floor(v) || v < 1 || v > 1e7) throw InputError(std::string(what) + " must be a positive integer");
  return static_cast<int>(v);
}

}  // namespace

Generated generate(std::string_view spec, const GenerateContext& ctx) {
  if (ctx.n != 2 && ctx.n != 3) throw InputError("dimension must be 2 or 3");
  const ParsedSpec p = parse_spec(spec);
  Keys keys(p);
  const int n = ctx.n;
  if (p.name == "half" || p.name == "halfspace" || p.name == "half-space") {
    const Vec nu = unit(keys.vec("normal", n == 2 ? Vec::UnitY() : Vec::UnitZ()), n);
    const double offset = keys.num("offset", 0.0);
    const double L = keys.num("L", 4.0);
    keys.finish();
    if (n == 2) return make_half_space(nu, offset, L);
    Box box;
    box.extend(Vec::Constant(-L));
    box.extend(Vec::Constant(L));
    return rasterize_implicit([&](const Vec& q) { return q.dot(nu) < offset; }, box, 3, ctx.h);
  }
  if (p.name == "ball") {
    const double R = keys.required("R");
    const Vec c = keys.vec("center", Vec::Zero());
    const int segs = as_count(keys.num("segments", 2048), "segments");
    keys.finish();
    if (n == 2) return make_ball(c, R, segs);
    Box box;
    box.extend(c - Vec::Constant(R));
    box.extend(c + Vec::Constant(R));
    return rasterize_implicit([&](const Vec& q) { return (q - c).squaredNorm() < R * R; }, box, 3, ctx.h);
  }
  if (n == 3 && p.name != "noisy") throw InputError("generator '" + p.name + "' is two-dimensional");
  if (p.name == "wulff") {
    const int dirs = as_count(keys.num("directions", 720), "directions");
    keys.finish();
    if (!ctx.anisotropy) throw InputError("wulff needs an anisotropy");
    return make_wulff(*ctx.anisotropy, dirs);
  }
  if (p.name == "cross") {
    const double w = keys.required("w");
    const double L = keys.num("L", 1.0);
    const int arc = as_count(keys.num("arc", 128), "arc");
    keys.finish();
    return make_cross(w, L, arc);
  }
  if (p.name == "graph") {
    const std::string f = keys.str("f", "line");
    const double a = keys.num("a", 0.3);
    const double L = keys.num("L", 1.0);
    const int segs = as_count(keys.num("segments", 2000), "segments");
    keys.finish();
    return make_graph(f, a, L, segs);
  }
  if (p.name == "noisy") {
    const std::string base_spec = keys.str("base", "");
    const double prob = keys.num("p", 0.05);
    const double seed = keys.num("seed", 1);
    keys.finish();
    if (base_spec.empty()) throw InputError("noisy needs base=<spec>");
    if (seed < 0 || seed != std::floor(seed)) throw InputError("seed must be a nonnegative integer");
    const Generated base = generate(base_spec, ctx);
    const VoxelSet vox = std::holds_alternative<VoxelSet>(base) ? std::get<VoxelSet>(base)
                                                                : rasterize(std::get<PolyCurveSet>(base), ctx.h);
    return make_noisy(vox, prob, static_cast<std::uint64_t>(seed));
  }
  throw InputError("unknown generator '" + p.name + "'");
}

}  // namespace gmt
