#include "gmt/io.hpp"

#include "gmt/text.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace gmt {

VoxelSet read_voxels(std::istream& in) {
  std::string magic;
  if (!std::getline(in, magic) || text::trim(magic) != "GMTVOX1") throw InputError("voxel file must start with GMTVOX1");
  std::string header;
  if (!std::getline(in, header)) throw InputError("voxel file is missing its header line");
  std::vector<std::string> fields;
  std::istringstream hs(header);
  for (std::string tok; hs >> tok;) fields.push_back(tok);
  const auto kv = text::key_values(fields);
  for (const char* key : {"n", "dims", "origin", "spacing"})
    if (!kv.count(key)) throw InputError(std::string("voxel header is missing '") + key + "'");
  const long n = text::to_long(kv.at("n"), "n");
  if (n != 2 && n != 3) throw InputError("voxel dimension must be 2 or 3");
  const auto dims = text::to_doubles(kv.at("dims"), "dims");
  const auto origin = text::to_doubles(kv.at("origin"), "origin");
  if (dims.size() != static_cast<size_t>(n) || origin.size() != static_cast<size_t>(n))
    throw InputError("voxel dims and origin need n entries");
  std::array<int, 3> d{1, 1, 1};
  Vec o = Vec::Zero();
  for (long a = 0; a < n; ++a) {
    const double da = dims[static_cast<size_t>(a)];
    if (da != std::floor(da) || da < 2 || da > 1e5) throw InputError("voxel dims must be integers >= 2");
    d[static_cast<size_t>(a)] = static_cast<int>(da);
    o[a] = origin[static_cast<size_t>(a)];
  }
  VoxelSet v(static_cast<int>(n), d, o, text::to_double(kv.at("spacing"), "spacing"));
  in.read(reinterpret_cast<char*>(v.cells().data()), static_cast<std::streamsize>(v.size()));
  if (static_cast<size_t>(in.gcount()) != v.size()) throw InputError("voxel file is truncated");
  for (auto c : v.cells())
    if (c > 1) throw InputError("voxel bytes must be 0 or 1");
  if (!v.has_margin()) throw InputError("voxel set must keep a one-cell empty margin");
  return v;
}

VoxelSet read_voxels_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open voxel file '" + path + "'");
  return read_voxels(in);
}

void write_voxels(std::ostream& out, const VoxelSet& v) {
  const int n = v.dim();
  out << "GMTVOX1\n";
  out << "n=" << n << " dims=";
  for (int a = 0; a < n; ++a) out << (a ? "," : "") << v.dims()[static_cast<size_t>(a)];
  out << " origin=";
  for (int a = 0; a < n; ++a) out << (a ? "," : "") << text::fmt(v.origin()[a]);
  out << " spacing=" << text::fmt(v.spacing()) << "\n";
  out.write(reinterpret_cast<const char*>(v.cells().data()), static_cast<std::streamsize>(v.size()));
}

void write_voxels_file(const std::string& path, const VoxelSet& v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write voxel file '" + path + "'");
  write_voxels(out, v);
}

PolyCurveSet read_poly(std::istream& in) {
  std::vector<Loop> loops;
  Loop current;
  std::string line;
  int lineno = 0;
  auto close = [&] {
    if (!current.empty()) loops.push_back(std::move(current));
    current.clear();
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      // A comment-only line is not a loop separator.
      if (text::trim(line.substr(0, hash)).empty()) continue;
      line = line.substr(0, hash);
    }
    const std::string t = text::trim(line);
    if (t.empty()) {
      close();
      continue;
    }
    const auto xy = text::to_doubles(t, "vertex on line " + std::to_string(lineno));
    if (xy.size() != 2) throw InputError("line " + std::to_string(lineno) + ": expected x,y");
    current.emplace_back(xy[0], xy[1]);
  }
  close();
  return PolyCurveSet(std::move(loops));
}

PolyCurveSet read_poly_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open polygon file '" + path + "'");
  return read_poly(in);
}

void write_poly(std::ostream& out, const PolyCurveSet& s) {
  bool first = true;
  for (const Loop& lp : s.loops()) {
    if (!first) out << "\n";
    first = false;
    for (const auto& p : lp) out << text::fmt(p.x()) << "," << text::fmt(p.y()) << "\n";
  }
}

}  // namespace gmt
