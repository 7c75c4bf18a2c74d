#pragma once
// Run-level objective: the product of leakage probability, attack probability
// and total transfer time, plus the constraint report attached to it.

#include <stdexcept>

namespace vsn {

// Transfer time of one payload: path_segments * block_units / rate.
// Blocks are counted in kBlockUnitBytes chunks by the caller.
inline double transfer_time(double path_segments, double block_units,
                            double rate) {
  if (!(rate > 0.0)) throw std::domain_error("transfer_time: rate must be > 0");
  if (path_segments < 0.0 || block_units < 0.0) {
    throw std::domain_error("transfer_time: counts must be >= 0");
  }
  return path_segments * block_units / rate;
}

// Scalar objective value.  Probabilities must be in [0, 1], time >= 0.
inline double objective_value(double p_leak, double p_attack,
                              double total_tt) {
  if (!(p_leak >= 0.0 && p_leak <= 1.0)) {
    throw std::domain_error("objective_value: p_leak outside [0, 1]");
  }
  if (!(p_attack >= 0.0 && p_attack <= 1.0)) {
    throw std::domain_error("objective_value: p_attack outside [0, 1]");
  }
  if (!(total_tt >= 0.0)) {
    throw std::domain_error("objective_value: total_tt must be >= 0");
  }
  return p_leak * p_attack * total_tt;
}

// Aggregates of one finished run, as consumed by the constraint check.
struct RunSummary {
  double total_tt = 0.0;    // summed transfer time
  double max_rate = 0.0;    // largest link rate used
  double max_reward = 0.0;  // largest reward granted
  double p_leak = 0.0;
  double p_attack = 0.0;
};

// Which of the five feasibility constraints hold for a run.
struct ConstraintReport {
  bool tt_within_deadline = false;
  bool rate_within_initial = false;
  bool reward_within_max = false;
  bool leak_within_threshold = false;
  bool attack_within_threshold = false;

  bool all_ok() const {
    return tt_within_deadline && rate_within_initial && reward_within_max &&
           leak_within_threshold && attack_within_threshold;
  }
};

inline ConstraintReport check_constraints(const RunSummary& s, double tau,
                                          double r0, double reward_max,
                                          double th_leak, double th_attack) {
  ConstraintReport r;
  r.tt_within_deadline = s.total_tt <= tau;
  r.rate_within_initial = s.max_rate <= r0;
  r.reward_within_max = s.max_reward <= reward_max;
  r.leak_within_threshold = s.p_leak <= th_leak;
  r.attack_within_threshold = s.p_attack <= th_attack;
  return r;
}

}  // namespace vsn
