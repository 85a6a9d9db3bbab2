#include "commands.hpp"
#include "config.hpp"

#include "gmt/geometry.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

std::string usage_text() {
  std::string out = "usage: gmtlab <command> [--config FILE] [--out DIR] [--threads K] [--<key> VALUE ...]\ncommands:";
  for (const auto& c : gmt::cli::command_names()) out += " " + c;
  out += "\nkeys:";
  for (const auto& k : gmt::cli::Config::keys()) out += " " + k;
  return out + "\n";
}

/// Turns the leftover `--key value` and `--key=value` arguments into config overrides.
void apply_overrides(gmt::cli::Config& cfg, const std::vector<std::string>& rest) {
  for (size_t i = 0; i < rest.size(); ++i) {
    const std::string& arg = rest[i];
    if (arg.rfind("--", 0) != 0) throw gmt::InputError("unexpected argument '" + arg + "'");
    std::string key = arg.substr(2), value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.erase(eq);
    } else {
      if (i + 1 >= rest.size()) throw gmt::InputError("missing value for --" + key);
      value = rest[++i];
    }
    cfg.set(key, value);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for almost-minimizers of anisotropic perimeters"};
  std::string command, config_path;
  gmt::cli::RunOptions options;
  app.add_option("command", command, "command to run")->required();
  app.add_option("--config", config_path, "flat key = value configuration file");
  app.add_option("--out", options.out_dir, "output directory");
  app.add_option("--threads", options.threads, "worker threads");
  app.allow_extras();
  app.footer(usage_text());
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << usage_text();
    return gmt::cli::kInputError;
  }
  try {
    gmt::cli::Config cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    apply_overrides(cfg, app.remaining());
    const auto& names = gmt::cli::command_names();
    if (std::find(names.begin(), names.end(), command) == names.end()) {
      std::cerr << "unknown command '" << command << "'\n" << usage_text();
      return gmt::cli::kInputError;
    }
    const int code = gmt::cli::run(command, cfg, options, std::cout);
    std::cout << (code == gmt::cli::kPass ? "PASS" : "FAIL") << "\n";
    return code;
  } catch (const gmt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gmt::cli::kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gmt::cli::kInputError;
  }
}
