#pragma once
// The simulation engine: ticks the world forward, generates traffic, lets a
// scheduler pick next hops, applies the privacy channels to what each
// decision releases, and collects the trace the metrics are computed from.
//
// Per tick: mobility step; hello round when the hello period elapses;
// Poisson packet generation per vehicle; then every idle packet holder
// evaluates its in-range candidates (reward, link rate, hop energy), the
// scheduler picks one, and the transmission runs with success probability
// 1 - p_obstacle_effective and per-hop latency airtime + processing delay.
// A destination already in range is served directly without a scheduler
// decision.

#include <string>
#include <vector>

#include "vsn/config.hpp"
#include "vsn/metrics.hpp"
#include "vsn/world.hpp"

namespace vsn {

enum class SchedulerKind { Dsql, Random, GreedyDistance, StaticPriority };

const char* to_string(SchedulerKind s);
// Case-insensitive; throws std::invalid_argument on unknown names.
SchedulerKind parse_scheduler(const std::string& name);

struct RunResult {
  MetricsReport metrics;
  RunTrace trace;
  ConstraintReport constraints;
  std::map<NodeId, QTable> q_tables;  // final learning state
  Perceptron net;
};

// Execute one full run of the configured scenario.  Deterministic: a given
// (config, scheduler) pair always produces the identical trace and report.
RunResult run(const ScenarioConfig& cfg, SchedulerKind scheduler);

// Internals exposed for tests and the decision oracle.
struct CandidateEval {
  Action action;           // (neighbour, comm type)
  double reward = 0.0;     // true reward of taking this hop
  double rate_bps = 0.0;   // link rate
  double hop_delay_ms = 0.0;  // airtime + processing delay
  bool deadline_ok = false;   // hop_delay_ms <= pd_th_ms
  double energy_j = 0.0;   // transmit + local processing energy
  Eigen::Vector3d features = Eigen::Vector3d::Zero();  // scoring inputs
};

// Evaluate one candidate hop for `holder` forwarding `pkt` to `next`.
CandidateEval evaluate_candidate(const WorldState& w, NodeId holder,
                                 const Packet& pkt, NodeId next);

// Comm type a hop to this neighbour uses: base stations are reached over the
// cellular interface, roadside units over the licensed V2I interface, and
// vehicles over millimetre-wave V2V when the link had line of sight in the
// latest hello round, falling back to 802.11p otherwise.
CommType comm_type_for_hop(const WorldState& w, NodeId from, NodeId to);

// The exhaustive one-hop oracle: the candidate whose simulated hop outcome is
// best, ordered by (meets deadline, reward, smaller id).  Null on empty input.
const CandidateEval* oracle_best(const std::vector<CandidateEval>& evals);

// Whether a candidate achieves the oracle's value: same deadline feasibility
// and a reward within `tol` of the oracle's.  Several candidates can tie.
bool achieves_oracle_value(const CandidateEval& chosen,
                           const CandidateEval& oracle, double tol = 1e-12);

// A parameter sweep: run the scenario once per (value, seed) combination with
// the named config key set to each value in turn.
struct SweepSpec {
  std::string param;            // config key to vary
  std::vector<double> values;   // values it takes
  int n_seeds = 1;              // seeds 1..n_seeds per value
  SchedulerKind scheduler = SchedulerKind::Dsql;
  int max_workers = 4;          // upper bound on concurrent runs
};

// Runs the sweep (possibly in parallel) and returns rows in deterministic
// (value, seed) order regardless of scheduling.
std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const SweepSpec& spec);

}  // namespace vsn
