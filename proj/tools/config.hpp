#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace gmt::cli {

/// Flat `key = value` experiment configuration. Every key has a default and
/// unknown keys raise InputError.
class Config {
 public:
  Config();

  static const std::vector<std::string>& keys();
  static bool known(std::string_view key);

  /// Reads `key = value` lines; `#` starts a comment, blank lines are skipped.
  void load_text(std::string_view text, std::string_view origin);
  void load_file(const std::string& path);
  void set(const std::string& key, const std::string& value);

  const std::string& get(const std::string& key) const;
  bool is_auto(const std::string& key) const { return get(key) == "auto"; }
  double number(const std::string& key) const;
  long integer(const std::string& key) const;

  /// FNV-1a 64 over the command and the sorted `key=value` lines.
  std::uint64_t hash(std::string_view command) const;
  std::string hash_hex(std::string_view command) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace gmt::cli
