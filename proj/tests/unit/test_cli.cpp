#include "doctest.h"

#include "commands.hpp"
#include "config.hpp"

#include "gmt/geometry.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace gmt::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gmtlab_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(GMTLAB_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_in(const fs::path& dir, const std::string& command, const Config& cfg) {
  std::ostringstream log;
  return run(command, cfg, RunOptions{dir.string(), 1}, log);
}

}  // namespace

TEST_CASE("config files: comments, overrides and unknown keys") {
  Config cfg;
  cfg.load_text("# header\nset = cross:w=0.4   # trailing\n\nh = 0.0625\n", "inline");
  CHECK(cfg.get("set") == "cross:w=0.4");
  CHECK(cfg.number("h") == 0.0625);
  CHECK(cfg.is_auto("radii"));
  CHECK(cfg.integer("k_max") == 6);
  CHECK_THROWS_AS(cfg.load_text("nonsense = 1\n", "inline"), gmt::InputError);
  CHECK_THROWS_AS(cfg.load_text("just words\n", "inline"), gmt::InputError);
  CHECK_THROWS_AS(cfg.set("h", ""), gmt::InputError);
  cfg.set("h", "abc");
  CHECK_THROWS_AS(cfg.number("h"), gmt::InputError);
  CHECK_THROWS_AS(cfg.load_file("/nonexistent/gmtlab.cfg"), gmt::InputError);
}

TEST_CASE("config hash depends on content, not on assignment order") {
  Config a, b;
  a.set("h", "0.1");
  a.set("seed", "4");
  b.set("seed", "4");
  b.set("h", "0.1");
  CHECK(a.hash("scan") == b.hash("scan"));
  CHECK(a.hash("scan") != a.hash("measure"));
  b.set("seed", "5");
  CHECK(a.hash("scan") != b.hash("scan"));
  CHECK(a.hash_hex("scan").size() == 16);
  // FNV-1a 64 reference values.
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("commands write csv files stamped with the config hash") {
  const fs::path dir = scratch_dir("scan");
  Config cfg;
  cfg.set("set", "half:normal=0,1;offset=0");
  cfg.set("points", "0,0;0.3,0");
  CHECK(run_in(dir, "scan", cfg) == kPass);
  const std::string csv = slurp(dir / "scan.csv");
  CHECK(csv.rfind("# config_hash=" + cfg.hash_hex("scan") + "\n", 0) == 0);
  CHECK(csv.find("x,y,k,r,excess") != std::string::npos);
  CHECK(fs::exists(dir / "scan.svg"));
  CHECK(slurp(dir / "scan.svg").find("<svg") != std::string::npos);
}

TEST_CASE("violations are reported through the exit code") {
  const fs::path dir = scratch_dir("singular");
  Config cfg;
  cfg.set("set", "cross:w=0.4");
  cfg.set("k_max", "8");
  CHECK(run_in(dir, "singular", cfg) == kViolated);
  const std::string csv = slurp(dir / "singular.csv");
  size_t rows = 0;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#' && line[0] != 'x') ++rows;
  CHECK(rows == 4);

  cfg.set("singular_max", "4");
  CHECK(run_in(dir, "singular", cfg) == kPass);
}

TEST_CASE("anisotropy validation and measurement commands") {
  const fs::path dir = scratch_dir("measure");
  Config cfg;
  cfg.set("samples", "500");
  CHECK(run_in(dir, "validate-anisotropy", cfg) == kPass);
  CHECK(slurp(dir / "anisotropy.csv").find("lambda_min") != std::string::npos);
  CHECK(run_in(dir, "measure", cfg) == kPass);
  CHECK(fs::exists(dir / "measure.csv"));
  CHECK(run_in(dir, "density", cfg) == kPass);
  cfg.set("anisotropy", "quadratic:1,0,0,4");
  CHECK(run_in(dir, "validate-anisotropy", cfg) == kViolated);
}

TEST_CASE("input problems throw before any output") {
  const fs::path dir = scratch_dir("errors");
  Config cfg;
  CHECK_THROWS_AS(run_in(dir, "frobnicate", cfg), gmt::InputError);
  cfg.set("set", "/nonexistent/file.vox");
  CHECK_THROWS_AS(run_in(dir, "scan", cfg), gmt::Error);
}

TEST_CASE("binary exit codes") {
  const fs::path dir = scratch_dir("binary");
  const std::string out = " --out " + dir.string();
  CHECK(run_binary("no-such-command" + out) == 2);
  CHECK(run_binary("scan --no_such_key 1" + out) == 2);
  CHECK(run_binary("scan --h" + out) == 2);
  CHECK(run_binary("scan --set 'half:normal=0,1;offset=0' --points 0,0" + out) == 0);
  CHECK(run_binary("reifenberg --set cross:w=0.4 --points 0.2,0.2 --r 0.2" + out) == 1);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "set = cross:w=0.4\nk_max = 8\nsingular_max = 4\n";
  }
  CHECK(run_binary("singular --config " + (dir / "run.cfg").string() + out) == 0);
  CHECK(run_binary("singular --config " + (dir / "missing.cfg").string() + out) == 2);
}
