#include "gmt/text.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace gmt::text {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    const size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view s, std::string_view what) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw InputError("invalid number for " + std::string(what) + ": '" + t + "'");
  return v;
}

long to_long(std::string_view s, std::string_view what) {
  const std::string t = trim(s);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw InputError("invalid integer for " + std::string(what) + ": '" + t + "'");
  return v;
}

std::vector<double> to_doubles(std::string_view s, std::string_view what) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(to_double(part, what));
  return out;
}

Vec to_vec(std::string_view s, std::string_view what) {
  const auto vals = to_doubles(s, what);
  if (vals.empty() || vals.size() > 3)
    throw InputError("expected 2 or 3 coordinates for " + std::string(what));
  Vec v = Vec::Zero();
  for (size_t i = 0; i < vals.size(); ++i) v[static_cast<Eigen::Index>(i)] = vals[i];
  return v;
}

std::map<std::string, std::string> key_values(const std::vector<std::string>& parts) {
  std::map<std::string, std::string> out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    const size_t eq = p.find('=');
    if (eq == std::string::npos) throw InputError("expected key=value, got '" + p + "'");
    out[trim(p.substr(0, eq))] = trim(p.substr(eq + 1));
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace gmt::text
