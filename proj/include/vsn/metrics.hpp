#pragma once
// Evaluation metrics computed from a finished run's trace.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vsn/config.hpp"
#include "vsn/objective.hpp"
#include "vsn/types.hpp"

namespace vsn {

// One recorded scheduling decision (only real choices are recorded; a
// destination directly in range is served without consulting a scheduler).
struct DecisionRecord {
  std::int64_t tick_ms = 0;
  NodeId node = kInvalidNode;
  NodeId destination = kInvalidNode;
  std::vector<NodeId> candidates;     // sorted by id
  NodeId chosen = kInvalidNode;
  NodeId oracle_best = kInvalidNode;  // one-hop exhaustive oracle
  bool chosen_is_best = false;        // chosen ties the oracle's value
  double true_reward = 0.0;
  double released_reward = 0.0;       // after the reward channel
  int released_action = 0;            // candidate index after the action channel
  int true_action = 0;                // candidate index actually chosen
  bool attacked = false;              // a malicious node was in range
  double entropy_bits = 0.0;          // decider's pseudonym entropy then
};

struct TrainSummary {
  int episodes_used = 0;
  double max_q = 0.0;
  bool converged = false;
};

// Everything a run leaves behind for metric computation and CSV export.
struct RunTrace {
  std::vector<DecisionRecord> decisions;
  std::vector<Packet> packets;              // every generated packet
  std::map<NodeId, double> node_energy_j;   // per-node energy ledger
  std::set<NodeId> communicated_vehicles;   // vehicles with >= 1 successful exchange
  std::vector<double> per_packet_rate_sum;  // indexed by packet id
  std::vector<int> per_packet_rate_hops;    // hops counted into the sum
  long malicious_handles = 0;               // packets handled by malicious relays
  long malicious_drops = 0;                 // of those, dropped
  double max_rate_used = 0.0;
  double max_reward_seen = 0.0;
  std::map<NodeId, double> mean_com;        // social-connectivity diagnostic
  TrainSummary pretrain;
  std::vector<double> mlp_loss_trace;
};

struct MetricsReport {
  std::optional<double> accuracy;           // decisions achieving the oracle value
  double travel_expenses_j = 0.0;           // energy of delivered packets
  int connectivity_degree = 0;              // vehicles that communicated
  std::optional<double> transmission_delay_ms;  // mean actual - expected
  std::optional<double> p_privacy_leakage;
  std::optional<double> p_malicious_attack;
  std::optional<double> objective;          // p_leak * p_attack * total transfer time
  bool converged = false;
  int episodes_used = 0;
};

// Individual metric computations (each tolerates an empty trace by going
// absent or zero as appropriate).
std::optional<double> accuracy_metric(const RunTrace& t);
double travel_expenses(const RunTrace& t);
int connectivity_degree(const RunTrace& t);
std::optional<double> transmission_delay(const RunTrace& t);

struct AttackMetrics {
  std::optional<double> p_privacy_leakage;
  std::optional<double> p_malicious_attack;
};
AttackMetrics attack_metrics(const RunTrace& t);

// Summed transfer time over delivered packets: hops * block_units / mean
// link rate, blocks of kBlockUnitBytes.
double total_transfer_time(const RunTrace& t, const ScenarioConfig& cfg);

MetricsReport compute_metrics(const RunTrace& t, const ScenarioConfig& cfg);

// Feasibility summary used by the constraint report.
RunSummary run_summary(const RunTrace& t, const ScenarioConfig& cfg);

// One result row of a parameter sweep.
struct SweepRow {
  std::string param;
  std::string value;
  std::uint64_t seed = 0;
  std::string scheduler;
  MetricsReport metrics;
};

}  // namespace vsn
