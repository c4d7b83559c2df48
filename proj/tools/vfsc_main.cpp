// Command-line front end: rd | simulate | sweep | tunstall | bounds.

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "vfsc/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Variable-to-fixed length lossy source coding laboratory"};
  std::string command;
  std::optional<std::string> config_path;
  std::optional<std::string> seed;
  std::optional<std::string> out;
  std::optional<std::string> wrapped_out;
  std::optional<std::string> eta;
  std::optional<std::string> slack;
  bool exact_only = false;
  std::vector<std::string> sets;

  app.add_option("command", command, "rd | simulate | sweep | tunstall | bounds")
      ->required()
      ->check(CLI::IsMember({"rd", "simulate", "sweep", "tunstall", "bounds"}));
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--seed", seed, "master seed (u64), required by stochastic commands");
  app.add_option("--out", out, "write CSV here instead of stdout");
  app.add_option("--wrapped-out", wrapped_out, "simulate: CSV of the randomised wrapper");
  app.add_option("--eta", eta, "iota grid width in nats for exact analysis");
  app.add_option("--slack", slack, "override slack pair SHIFT,CLAUSE_B");
  app.add_flag("--exact-only", exact_only, "simulate: exact no-hit analysis only");
  app.add_option("--set", sets, "override any config key, KEY=VALUE (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : vfsc::cli::kExitConfig;
  }

  std::vector<std::pair<std::string, std::string>> overrides;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects KEY=VALUE, got '" << s << "'\n";
      return vfsc::cli::kExitConfig;
    }
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  // Named flags win over --set and the file.
  if (seed) overrides.emplace_back("seed", *seed);
  if (out) overrides.emplace_back("out", *out);
  if (wrapped_out) overrides.emplace_back("wrapped_out", *wrapped_out);
  if (eta) overrides.emplace_back("eta", *eta);
  if (slack) overrides.emplace_back("slack", *slack);
  if (exact_only) overrides.emplace_back("exact_only", "true");

  try {
    const auto cfg = vfsc::cli::load_run_config(command, config_path, overrides);
    return vfsc::cli::run_command(cfg, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return vfsc::cli::kExitConfig;
  }
}
