// Environment configuration: flat key=value file, strict key set, with
// FRESHEDGE_<KEY> environment-variable overrides.
#pragma once

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace freshedge {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All sizes in bytes, rates in bytes/s or cycles/s, bandwidth in Hz.
// Spectral efficiencies are given in bits/s/Hz in the config file and
// converted to bytes/s/Hz once at load (see spectral_eff_*).
struct EnvConfig {
  int num_users = 5;
  int num_services = 10;
  int horizon = 1152;          // slots
  double slot_length = 900.0;  // seconds

  double storage_capacity = 16e9;   // bytes
  double compute_capacity = 5.4e9;  // cycles/s
  double uplink_bw = 4e8;           // Hz
  double downlink_bw = 2e8;         // Hz
  double es_cs_rate = 25e6;         // bytes/s
  double cloud_rate_per_task = 2e9; // cycles/s

  // Per-user; a scalar in the file is broadcast to all users. Stored in
  // bytes/s/Hz after the bits->bytes conversion at load.
  std::vector<double> spectral_eff_up;
  std::vector<double> spectral_eff_down;

  double lambda_d = 0.1;
  double lambda_c = 1.0;
  double lambda_p = 1.0;
  double lambda_s = 10.0;
  double lyapunov_v = 1.0;

  double aoi_threshold_min = 5.0;  // A_max drawn once per run from U[min,max]
  double aoi_threshold_max = 10.0;

  double service_size_min = 2e9;
  double service_size_max = 6e9;
  double purchase_price_min = 1.0;
  double purchase_price_max = 50.0;
  double refresh_price_ratio = 0.1;

  double task_size_min = 5e8;
  double task_size_max = 2e9;
  double task_size_mean = 1.25e9;
  double task_size_std = 3.75e8;
  double cycles_per_byte = 330.0;

  double cs_update_prob = 0.25;
  uint64_t rng_seed = 1;

  static constexpr double kBitsPerByte = 8.0;

  double eta_up(int user) const { return spectral_eff_up.at(static_cast<size_t>(user)); }
  double eta_down(int user) const { return spectral_eff_down.at(static_cast<size_t>(user)); }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0)) throw ConfigError(std::string("config: ") + name + " must be > 0");
    };
    if (num_users < 1) throw ConfigError("config: num_users must be >= 1");
    if (num_services < 1) throw ConfigError("config: num_services must be >= 1");
    if (horizon < 1) throw ConfigError("config: horizon must be >= 1");
    positive(slot_length, "slot_length");
    positive(storage_capacity, "storage_capacity");
    positive(compute_capacity, "compute_capacity");
    positive(uplink_bw, "uplink_bw");
    positive(downlink_bw, "downlink_bw");
    positive(es_cs_rate, "es_cs_rate");
    positive(cloud_rate_per_task, "cloud_rate_per_task");
    positive(service_size_min, "service_size_min");
    positive(purchase_price_min, "purchase_price_min");
    positive(task_size_min, "task_size_min");
    positive(task_size_std, "task_size_std");
    positive(cycles_per_byte, "cycles_per_byte");
    positive(refresh_price_ratio, "refresh_price_ratio");
    if (service_size_max < service_size_min) throw ConfigError("config: service size range inverted");
    if (purchase_price_max < purchase_price_min) throw ConfigError("config: purchase price range inverted");
    if (task_size_max < task_size_min) throw ConfigError("config: task size range inverted");
    if (aoi_threshold_min < 1.0) throw ConfigError("config: aoi_threshold_min must be >= 1");
    if (aoi_threshold_max < aoi_threshold_min) throw ConfigError("config: aoi threshold range inverted");
    if (cs_update_prob < 0.0 || cs_update_prob > 1.0)
      throw ConfigError("config: cs_update_prob must be in [0,1]");
    if (lambda_d < 0 || lambda_c < 0 || lambda_p < 0 || lambda_s < 0 || lyapunov_v < 0)
      throw ConfigError("config: weights must be nonnegative");
    if (static_cast<int>(spectral_eff_up.size()) != num_users ||
        static_cast<int>(spectral_eff_down.size()) != num_users)
      throw ConfigError("config: spectral efficiency list length must equal num_users");
    for (double e : spectral_eff_up) positive(e, "spectral_eff_up");
    for (double e : spectral_eff_down) positive(e, "spectral_eff_down");
  }
};

namespace detail {

inline std::vector<double> parse_double_list(const std::string& value, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
    } catch (const std::exception&) {
      throw ConfigError("config: bad numeric value for " + key + ": '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("config: empty value for " + key);
  return out;
}

inline double parse_double(const std::string& value, const std::string& key) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": '" + value + "'");
  }
}

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

// Applies one key=value pair onto cfg. Spectral efficiencies arrive in
// bits/s/Hz and are converted here; everything downstream sees bytes/s/Hz.
inline void apply_config_entry(EnvConfig& cfg, const std::string& key, const std::string& value) {
  using detail::parse_double;
  using detail::parse_double_list;
  if (key == "num_users") cfg.num_users = static_cast<int>(parse_double(value, key));
  else if (key == "num_services") cfg.num_services = static_cast<int>(parse_double(value, key));
  else if (key == "horizon") cfg.horizon = static_cast<int>(parse_double(value, key));
  else if (key == "slot_length") cfg.slot_length = parse_double(value, key);
  else if (key == "storage_capacity") cfg.storage_capacity = parse_double(value, key);
  else if (key == "compute_capacity") cfg.compute_capacity = parse_double(value, key);
  else if (key == "uplink_bw") cfg.uplink_bw = parse_double(value, key);
  else if (key == "downlink_bw") cfg.downlink_bw = parse_double(value, key);
  else if (key == "es_cs_rate") cfg.es_cs_rate = parse_double(value, key);
  else if (key == "cloud_rate_per_task") cfg.cloud_rate_per_task = parse_double(value, key);
  else if (key == "spectral_eff_up") {
    cfg.spectral_eff_up = parse_double_list(value, key);
    for (double& e : cfg.spectral_eff_up) e /= EnvConfig::kBitsPerByte;
  } else if (key == "spectral_eff_down") {
    cfg.spectral_eff_down = parse_double_list(value, key);
    for (double& e : cfg.spectral_eff_down) e /= EnvConfig::kBitsPerByte;
  }
  else if (key == "lambda_d") cfg.lambda_d = parse_double(value, key);
  else if (key == "lambda_c") cfg.lambda_c = parse_double(value, key);
  else if (key == "lambda_p") cfg.lambda_p = parse_double(value, key);
  else if (key == "lambda_s") cfg.lambda_s = parse_double(value, key);
  else if (key == "lyapunov_v") cfg.lyapunov_v = parse_double(value, key);
  else if (key == "aoi_threshold_min") cfg.aoi_threshold_min = parse_double(value, key);
  else if (key == "aoi_threshold_max") cfg.aoi_threshold_max = parse_double(value, key);
  else if (key == "service_size_min") cfg.service_size_min = parse_double(value, key);
  else if (key == "service_size_max") cfg.service_size_max = parse_double(value, key);
  else if (key == "purchase_price_min") cfg.purchase_price_min = parse_double(value, key);
  else if (key == "purchase_price_max") cfg.purchase_price_max = parse_double(value, key);
  else if (key == "refresh_price_ratio") cfg.refresh_price_ratio = parse_double(value, key);
  else if (key == "task_size_min") cfg.task_size_min = parse_double(value, key);
  else if (key == "task_size_max") cfg.task_size_max = parse_double(value, key);
  else if (key == "task_size_mean") cfg.task_size_mean = parse_double(value, key);
  else if (key == "task_size_std") cfg.task_size_std = parse_double(value, key);
  else if (key == "cycles_per_byte") cfg.cycles_per_byte = parse_double(value, key);
  else if (key == "cs_update_prob") cfg.cs_update_prob = parse_double(value, key);
  else if (key == "rng_seed") cfg.rng_seed = static_cast<uint64_t>(parse_double(value, key));
  else throw ConfigError("config: unknown key '" + key + "'");
}

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "num_users", "num_services", "horizon", "slot_length",
      "storage_capacity", "compute_capacity", "uplink_bw", "downlink_bw",
      "es_cs_rate", "cloud_rate_per_task", "spectral_eff_up", "spectral_eff_down",
      "lambda_d", "lambda_c", "lambda_p", "lambda_s", "lyapunov_v",
      "aoi_threshold_min", "aoi_threshold_max",
      "service_size_min", "service_size_max",
      "purchase_price_min", "purchase_price_max", "refresh_price_ratio",
      "task_size_min", "task_size_max", "task_size_mean", "task_size_std",
      "cycles_per_byte", "cs_update_prob", "rng_seed"};
  return keys;
}

// Broadcast scalar spectral efficiencies and fill defaults when the file
// did not set them (defaults: 3 bits/s/Hz up, 4 down).
inline void finalize_config(EnvConfig& cfg) {
  auto fill = [&](std::vector<double>& v, double default_bits) {
    if (v.empty()) v.assign(static_cast<size_t>(cfg.num_users), default_bits / EnvConfig::kBitsPerByte);
    else if (v.size() == 1) v.assign(static_cast<size_t>(cfg.num_users), v[0]);
  };
  fill(cfg.spectral_eff_up, 3.0);
  fill(cfg.spectral_eff_down, 4.0);
  cfg.validate();
}

// FRESHEDGE_<KEY> environment variables override file values for any key.
inline void apply_env_overrides(EnvConfig& cfg, const char* prefix = "FRESHEDGE_") {
  for (const std::string& key : config_keys()) {
    std::string var = prefix;
    for (char c : key) var += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char* v = std::getenv(var.c_str())) apply_config_entry(cfg, key, v);
  }
}

inline EnvConfig load_env_config(const std::string& path, bool env_overrides = true) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  EnvConfig cfg;
  cfg.spectral_eff_up.clear();
  cfg.spectral_eff_down.clear();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not key=value");
    std::string key = detail::trim(t.substr(0, eq));
    std::string value = detail::trim(t.substr(eq + 1));
    apply_config_entry(cfg, key, value);
  }
  if (env_overrides) apply_env_overrides(cfg);
  finalize_config(cfg);
  return cfg;
}

inline EnvConfig default_config() {
  EnvConfig cfg;
  cfg.spectral_eff_up.clear();
  cfg.spectral_eff_down.clear();
  finalize_config(cfg);
  return cfg;
}

}  // namespace freshedge
