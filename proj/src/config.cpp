#include "vsn/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace vsn {

namespace {

double parse_double(const std::string& key, const std::string& v, int line) {
  double out = 0.0;
  const char* b = v.data();
  const char* e = v.data() + v.size();
  auto [p, ec] = std::from_chars(b, e, out);
  if (ec != std::errc() || p != e || !std::isfinite(out)) {
    throw ConfigError(key, line, "invalid value for '" + key + "': '" + v + "'");
  }
  return out;
}

long long parse_int(const std::string& key, const std::string& v, int line) {
  long long out = 0;
  const char* b = v.data();
  const char* e = v.data() + v.size();
  auto [p, ec] = std::from_chars(b, e, out);
  if (ec != std::errc() || p != e) {
    throw ConfigError(key, line, "invalid integer for '" + key + "': '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key, line, "invalid boolean for '" + key + "': '" + v + "'");
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, int)>;

#define FIELD_D(name) \
  {#name, [](ScenarioConfig& c, const std::string& v, int ln) { c.name = parse_double(#name, v, ln); }}
#define FIELD_I(name) \
  {#name, [](ScenarioConfig& c, const std::string& v, int ln) { c.name = static_cast<int>(parse_int(#name, v, ln)); }}
#define FIELD_B(name) \
  {#name, [](ScenarioConfig& c, const std::string& v, int ln) { c.name = parse_bool(#name, v, ln); }}

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = {
      FIELD_D(area_width_m),
      FIELD_D(area_length_m),
      FIELD_I(n_vehicles),
      FIELD_I(n_base_stations),
      FIELD_I(n_rsus),
      FIELD_D(v_min_mps),
      FIELD_D(v_max_mps),
      FIELD_D(p_edge),
      FIELD_D(p_malicious),
      FIELD_D(time_slot_ms),
      FIELD_D(sim_duration_s),
      FIELD_D(hello_period_ms),
      FIELD_D(comm_range_m),
      FIELD_D(interference_range_m),
      FIELD_D(bandwidth_hz),
      FIELD_D(tx_power_w),
      FIELD_D(channel_fading),
      FIELD_D(noise_power_w),
      FIELD_D(path_loss_exp),
      FIELD_D(p_obstacle),
      FIELD_D(d_min_m),
      FIELD_D(cpu_freq_min_hz),
      FIELD_D(cpu_freq_max_hz),
      FIELD_D(data_density),
      FIELD_D(packet_size_bytes),
      FIELD_D(packet_rate_per_s),
      FIELD_D(p_traffic_intensive),
      FIELD_D(pd_th_ms),
      FIELD_D(pd_bs_ms),
      FIELD_D(pd_11p_ms),
      FIELD_D(cb_cellular),
      FIELD_D(cb_ul),
      FIELD_D(cb_dl),
      FIELD_D(cb_11p),
      FIELD_D(alpha),
      FIELD_D(beta),
      FIELD_D(epsilon_explore),
      FIELD_D(epsilon_min),
      FIELD_D(q_threshold),
      FIELD_I(episodes_budget),
      FIELD_I(hidden_width),
      FIELD_D(mlp_learning_rate),
      FIELD_I(mlp_batch_size),
      FIELD_I(mlp_epochs),
      FIELD_B(mlp_filter_enabled),
      FIELD_I(mlp_topk),
      FIELD_D(mlp_retrain_s),
      FIELD_D(eta_privacy),
      FIELD_D(lambda_j),
      FIELD_D(reward_max),
      FIELD_D(th_leak),
      FIELD_D(th_attack),
      {"seed",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.seed = static_cast<std::uint64_t>(parse_int("seed", v, ln));
       }},
  };
  return table;
}

#undef FIELD_D
#undef FIELD_I
#undef FIELD_B

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void set_key(ScenarioConfig& cfg, const std::string& key,
             const std::string& value, int line) {
  const auto& table = key_table();
  auto it = table.find(key);
  if (it == table.end()) {
    throw ConfigError(key, line, "unknown key '" + key + "'");
  }
  it->second(cfg, trim(value), line);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : key_table()) v.push_back(k);
    return v;
  }();
  return keys;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ScenarioConfig cfg;
  std::set<std::string> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", line,
                        "line " + std::to_string(line) + ": expected 'key = value'");
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(key, line,
                        "line " + std::to_string(line) + ": expected 'key = value'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError(key, line, "duplicate key '" + key + "'");
    }
    try {
      set_key(cfg, key, value, line);
    } catch (const ConfigError& e) {
      throw ConfigError(e.key, line,
                        "line " + std::to_string(line) + ": " + e.what());
    }
  }
  auto violations = cfg.validate();
  if (!violations.empty()) throw violations.front();
  return cfg;
}

std::vector<ConfigError> ScenarioConfig::validate() const {
  std::vector<ConfigError> out;
  auto bad = [&](const std::string& key, const std::string& msg) {
    out.emplace_back(key, 0, msg + " (key '" + key + "')");
  };
  auto positive = [&](double v, const std::string& key) {
    if (!(v > 0.0)) bad(key, "must be strictly positive");
  };
  auto frac = [&](double v, const std::string& key) {
    if (!(v >= 0.0 && v <= 1.0)) bad(key, "must lie in [0, 1]");
  };

  positive(area_width_m, "area_width_m");
  positive(area_length_m, "area_length_m");
  if (n_vehicles < 1) bad("n_vehicles", "need at least one vehicle");
  if (n_base_stations < 0) bad("n_base_stations", "must be >= 0");
  if (n_rsus < 0) bad("n_rsus", "must be >= 0");
  if (v_min_mps < 0.0) bad("v_min_mps", "must be >= 0");
  if (v_max_mps < v_min_mps) bad("v_max_mps", "must be >= v_min_mps");
  frac(p_edge, "p_edge");
  frac(p_malicious, "p_malicious");
  frac(p_obstacle, "p_obstacle");
  frac(p_traffic_intensive, "p_traffic_intensive");
  positive(time_slot_ms, "time_slot_ms");
  positive(sim_duration_s, "sim_duration_s");
  positive(hello_period_ms, "hello_period_ms");
  if (hello_period_ms < time_slot_ms)
    bad("hello_period_ms", "must be >= time_slot_ms");
  positive(comm_range_m, "comm_range_m");
  positive(interference_range_m, "interference_range_m");
  positive(bandwidth_hz, "bandwidth_hz");
  positive(tx_power_w, "tx_power_w");
  positive(channel_fading, "channel_fading");
  positive(noise_power_w, "noise_power_w");
  positive(path_loss_exp, "path_loss_exp");
  positive(d_min_m, "d_min_m");
  positive(cpu_freq_min_hz, "cpu_freq_min_hz");
  if (cpu_freq_max_hz < cpu_freq_min_hz)
    bad("cpu_freq_max_hz", "must be >= cpu_freq_min_hz");
  positive(data_density, "data_density");
  positive(packet_size_bytes, "packet_size_bytes");
  if (packet_rate_per_s < 0.0) bad("packet_rate_per_s", "must be >= 0");
  positive(pd_th_ms, "pd_th_ms");
  if (pd_bs_ms < 0.0) bad("pd_bs_ms", "must be >= 0");
  if (pd_11p_ms < 0.0) bad("pd_11p_ms", "must be >= 0");
  positive(cb_cellular, "cb_cellular");
  positive(cb_ul, "cb_ul");
  positive(cb_dl, "cb_dl");
  positive(cb_11p, "cb_11p");
  if (!(alpha > 0.0 && alpha <= 1.0)) bad("alpha", "must lie in (0, 1]");
  if (!(beta >= 0.0 && beta < 1.0)) bad("beta", "must lie in [0, 1)");
  frac(epsilon_explore, "epsilon_explore");
  frac(epsilon_min, "epsilon_min");
  if (epsilon_min > epsilon_explore)
    bad("epsilon_min", "must be <= epsilon_explore");
  positive(q_threshold, "q_threshold");
  if (episodes_budget < 0) bad("episodes_budget", "must be >= 0");
  if (hidden_width < 1) bad("hidden_width", "must be >= 1");
  positive(mlp_learning_rate, "mlp_learning_rate");
  if (mlp_batch_size < 1) bad("mlp_batch_size", "must be >= 1");
  if (mlp_epochs < 0) bad("mlp_epochs", "must be >= 0");
  if (mlp_topk < 1) bad("mlp_topk", "must be >= 1");
  positive(mlp_retrain_s, "mlp_retrain_s");
  positive(eta_privacy, "eta_privacy");
  frac(lambda_j, "lambda_j");
  positive(reward_max, "reward_max");
  if (!(th_leak > 0.0 && th_leak < 1.0)) bad("th_leak", "must lie in (0, 1)");
  if (!(th_attack > 0.0 && th_attack < 1.0))
    bad("th_attack", "must lie in (0, 1)");

  // The action-flip cap (lambda_j + H)/4 must stay a probability for the
  // largest entropy this population can produce, log2(#malicious).
  const int k = n_malicious();
  const double h_max = k > 1 ? std::log2(static_cast<double>(k)) : 0.0;
  if ((lambda_j + h_max) / 4.0 > 1.0) {
    bad("lambda_j", "action-flip cap (lambda_j + max entropy)/4 exceeds 1");
  }
  return out;
}

}  // namespace vsn
