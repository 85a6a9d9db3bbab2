#include "config.hpp"

#include "gmt/geometry.hpp"
#include "gmt/text.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gmt::cli {

namespace {

const std::vector<std::pair<std::string, std::string>>& defaults() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"anisotropy", "euclidean"},
      {"n", "2"},
      {"set", "ball:R=1"},
      {"representation", "auto"},
      {"h", "0.0078125"},
      {"smoothing", "auto"},
      {"order", "auto"},
      {"theta", "0.5"},
      {"r0", "0.25"},
      {"r", "auto"},
      {"radii", "auto"},
      {"k_max", "6"},
      {"epsilon", "0.05"},
      {"delta", "0.1"},
      {"sigma", "auto"},
      {"kappa", "0.5"},
      {"seed", "1"},
      {"points", "auto"},
      {"point_count", "16"},
      {"nu", "auto"},
      {"lambda", "0"},
      {"eta", "1"},
      {"chi_constant", "1"},
      {"subballs", "16"},
      {"samples", "10000"},
      {"lambda_max", "0.05"},
      {"c_cacc", "20"},
      {"decay_max", "1.7"},
      {"singular_max", "0"},
      {"max_points", "4096"},
  };
  return table;
}

}  // namespace

Config::Config() {
  for (const auto& [k, v] : defaults()) values_[k] = v;
}

const std::vector<std::string>& Config::keys() {
  static const std::vector<std::string> list = [] {
    std::vector<std::string> out;
    for (const auto& kv : defaults()) out.push_back(kv.first);
    return out;
  }();
  return list;
}

bool Config::known(std::string_view key) {
  const auto& k = keys();
  return std::find(k.begin(), k.end(), key) != k.end();
}

void Config::load_text(std::string_view text, std::string_view origin) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = text::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw InputError(std::string(origin) + ":" + std::to_string(lineno) + ": expected 'key = value'");
    set(text::trim(body.substr(0, eq)), text::trim(body.substr(eq + 1)));
  }
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  load_text(buf.str(), path);
}

void Config::set(const std::string& key, const std::string& value) {
  if (!known(key)) throw InputError("unknown config key '" + key + "'");
  if (value.empty()) throw InputError("empty value for config key '" + key + "'");
  values_[key] = value;
}

const std::string& Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InputError("unknown config key '" + key + "'");
  return it->second;
}

double Config::number(const std::string& key) const { return text::to_double(get(key), key); }

long Config::integer(const std::string& key) const { return text::to_long(get(key), key); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t Config::hash(std::string_view command) const {
  std::string canon = std::string(command) + "\n";
  for (const auto& [k, v] : values_) canon += k + "=" + v + "\n";
  return fnv1a64(canon);
}

std::string Config::hash_hex(std::string_view command) const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash(command)));
  return buf;
}

}  // namespace gmt::cli
