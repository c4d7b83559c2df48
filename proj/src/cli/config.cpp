#include "vfsc/cli/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace vfsc::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& key, std::string_view text) {
  double x = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("key '" + key + "': not a number: '" + std::string(text) + "'");
  }
  return x;
}

}  // namespace

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    out[key] = trim(std::string_view(body).substr(eq + 1));
  }
  return out;
}

const std::string& RunConfig::get(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw ConfigError("missing required key '" + key + "'");
  return it->second;
}

double RunConfig::get_double(const std::string& key) const {
  const auto xs = get_doubles(key);
  if (xs.size() != 1) throw ConfigError("key '" + key + "' must hold a single value");
  return xs.front();
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::vector<double> RunConfig::get_doubles(const std::string& key) const {
  const std::string& text = get(key);
  std::vector<double> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ',')) ++i;
    if (i == text.size()) break;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != ',') ++j;
    out.push_back(to_double(key, std::string_view(text).substr(i, j - i)));
    i = j;
  }
  if (out.empty()) throw ConfigError("key '" + key + "' is empty");
  return out;
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
  const std::string& text = get(key);
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    // Accept integral reals such as 1e5.
    const double d = to_double(key, text);
    if (d < 0 || d != static_cast<double>(static_cast<std::uint64_t>(d))) {
      throw ConfigError("key '" + key + "' must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(d);
  }
  return x;
}

std::uint64_t RunConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? get_u64(key) : fallback;
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "' must be true or false");
}

std::optional<std::pair<double, double>> RunConfig::slack() const {
  if (!has("slack")) return std::nullopt;
  const auto xs = get_doubles("slack");
  if (xs.size() != 2) throw ConfigError("slack must be a pair 'shift,clause_b_slack'");
  return std::make_pair(xs[0], xs[1]);
}

std::uint64_t RunConfig::seed() const {
  if (!has("seed")) throw ConfigError("command '" + command + "' is stochastic: --seed is required");
  return get_u64("seed");
}

RunConfig load_run_config(std::string command, const std::optional<std::string>& config_path,
                          const std::vector<std::pair<std::string, std::string>>& overrides) {
  RunConfig cfg;
  cfg.command = std::move(command);
  if (config_path) {
    if (!std::filesystem::exists(*config_path)) {
      throw ConfigError("config file not found: " + *config_path);
    }
    std::ifstream in(*config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    cfg.values = parse_config_text(buf.str());
  }
  for (const auto& [k, v] : overrides) cfg.values[k] = v;
  return cfg;
}

}  // namespace vfsc::cli
