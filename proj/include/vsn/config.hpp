#pragma once
// Scenario configuration: every physical, learning, and privacy parameter of
// a run.  Loaded from a flat key/value text file ("key = value", '#' starts a
// comment).  Unknown keys and duplicate keys are hard errors; every error
// carries the offending key and line number so the CLI can point at it.
//
// Unit conventions (documented once, used everywhere):
//   distances m, speeds m/s, times ms or s as suffixed, frequencies Hz,
//   powers W, energies J.  The reward formulas for the cellular and 802.11p
//   release paths consume dimensionless configured scalars by convention:
//   delays as ms numbers, link bandwidths (cb_*) as Mbit/s numbers, packet
//   size as a byte count.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vsn {

// Fixed model constants (deliberately not configurable).
inline constexpr int kHrrWindowPeriods = 10;      // hello-rate sliding window
inline constexpr int kEvictionHorizonPeriods = 20;  // stale-neighbor horizon
inline constexpr double kLinkableEntropyBits = 0.5;  // below: pseudonyms linkable
inline constexpr double kMaliciousDropProb = 0.5;   // drop chance per handled packet
inline constexpr double kBlockUnitBytes = 512.0;    // block size for transfer time

struct ConfigError : std::runtime_error {
  ConfigError(std::string key_, int line_, const std::string& what_)
      : std::runtime_error(what_), key(std::move(key_)), line(line_) {}
  std::string key;
  int line;  // 0 when the error is not tied to a file line
};

struct ScenarioConfig {
  // Geometry and population.  The area is a torus: positions wrap and
  // distances use the minimum-image convention.
  double area_width_m = 36000.0;
  double area_length_m = 48000.0;
  int n_vehicles = 30;
  int n_base_stations = 2;
  int n_rsus = 4;
  double v_min_mps = 12.0;
  double v_max_mps = 35.0;
  double p_edge = 0.25;       // fraction of vehicles acting as edge nodes
  double p_malicious = 0.1;   // fraction of vehicles that are malicious

  // Timing.
  double time_slot_ms = 1.0;
  double sim_duration_s = 90.0;
  double hello_period_ms = 100.0;

  // Radio.
  double comm_range_m = 2000.0;
  double interference_range_m = 1000.0;
  double bandwidth_hz = 1.0e7;
  double tx_power_w = 0.1;
  double channel_fading = 1.0;   // |h|^2
  double noise_power_w = 1.0e-10;
  double path_loss_exp = 2.5;
  double p_obstacle = 0.1;       // per-transmission obstruction probability
  double d_min_m = 1.0;          // distance floor applied before any division

  // Local processing model.
  double cpu_freq_min_hz = 1.0e9;
  double cpu_freq_max_hz = 3.0e9;
  double data_density = 2.0e6;   // divisor in local data amount f*dt/(d*density)

  // Workload.
  double packet_size_bytes = 2048.0;
  double packet_rate_per_s = 1.0;     // Poisson arrivals per vehicle
  double p_traffic_intensive = 0.5;   // remainder is delay-sensitive unicast

  // Release-path scalars (dimensionless conventions noted above).
  double pd_th_ms = 100.0;   // delay requirement / deadline
  double pd_bs_ms = 5.0;     // processing delay at infrastructure
  double pd_11p_ms = 10.0;   // processing delay on the 802.11p path
  double cb_cellular = 100.0;
  double cb_ul = 50.0;
  double cb_dl = 100.0;
  double cb_11p = 27.0;

  // Q-learning.
  double alpha = 0.5;
  double beta = 0.5;             // discount
  double epsilon_explore = 0.7;  // initial exploration rate
  double epsilon_min = 0.05;     // exploration floor after annealing
  double q_threshold = 8.0;      // training stop threshold on max Q
  int episodes_budget = 500;

  // Decision network.
  int hidden_width = 8;
  double mlp_learning_rate = 0.5;
  int mlp_batch_size = 180;
  int mlp_epochs = 12;
  bool mlp_filter_enabled = true;  // pre-filter candidates by network score
  int mlp_topk = 3;
  double mlp_retrain_s = 15.0;     // online retrain cadence (sim time)

  // Privacy release channels.
  double eta_privacy = 1.0;  // budget; reward noise scale is 1/eta
  double lambda_j = 0.2;     // system parameter in the action-flip cap

  // Objective thresholds.
  double reward_max = 1.0;
  double th_leak = 0.8;
  double th_attack = 0.8;

  std::uint64_t seed = 1;

  // Derived quantities.
  double slot_s() const { return time_slot_ms / 1000.0; }
  std::int64_t sim_ticks() const {
    return static_cast<std::int64_t>(sim_duration_s * 1000.0 / time_slot_ms);
  }
  std::int64_t hello_ticks() const {
    return static_cast<std::int64_t>(hello_period_ms / time_slot_ms);
  }
  double tau_s() const { return pd_th_ms / 1000.0; }  // deadline in seconds
  int n_malicious() const {
    return static_cast<int>(p_malicious * n_vehicles + 0.5);
  }
  int n_edge() const { return static_cast<int>(p_edge * n_vehicles + 0.5); }
  int total_nodes() const { return n_vehicles + n_base_stations + n_rsus; }

  // Empty when valid; otherwise one message per violated field, each naming
  // the offending key.
  std::vector<ConfigError> validate() const;
};

// Set one field from its textual form.  Throws ConfigError on unknown key or
// unparsable value.  `line` is only used to decorate the error.
void set_key(ScenarioConfig& cfg, const std::string& key,
             const std::string& value, int line = 0);

// Parse a config file.  Throws ConfigError (unknown/duplicate/invalid keys,
// syntax) or std::runtime_error when the file cannot be opened.  The result
// has been range-validated.
ScenarioConfig load_config_file(const std::string& path);

// All recognized keys, sorted; the documented schema.
const std::vector<std::string>& config_keys();

}  // namespace vsn
