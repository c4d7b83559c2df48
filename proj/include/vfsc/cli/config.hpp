#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vfsc::cli {

/// Bad or missing configuration. Exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested run is outside what Monte Carlo can materialise. Exit code 3.
class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` file, `#` starts a comment. Later keys win.
std::map<std::string, std::string> parse_config_text(std::string_view text);

/// Command plus merged key/value settings (file first, then flag overrides).
class RunConfig {
 public:
  std::string command;
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::optional<std::pair<double, double>> slack() const;

  /// Seed for stochastic commands; throws ConfigError when absent.
  std::uint64_t seed() const;
};

/// Reads `config_path` (if given) and applies `overrides` on top.
RunConfig load_run_config(std::string command, const std::optional<std::string>& config_path,
                          const std::vector<std::pair<std::string, std::string>>& overrides);

}  // namespace vfsc::cli
