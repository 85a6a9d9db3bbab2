#pragma once

#include "gmt/geometry.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace gmt::text {

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
double to_double(std::string_view s, std::string_view what);
long to_long(std::string_view s, std::string_view what);
std::vector<double> to_doubles(std::string_view s, std::string_view what);
/// Comma-separated coordinates padded with zeros to a Vec.
Vec to_vec(std::string_view s, std::string_view what);
/// `key=value` pairs separated by `sep`; throws on a missing '='.
std::map<std::string, std::string> key_values(const std::vector<std::string>& parts);
/// Shortest round-trip representation, stable across runs.
std::string fmt(double v);

}  // namespace gmt::text
