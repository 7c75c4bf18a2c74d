#pragma once
// Differential-privacy release channels and the adversary model.
//
// Two channels guard what a run publishes about each scheduling decision:
// rewards are released through additive Laplace noise (scale 1/eta, output
// clipped back to [0, 1]), actions through randomized response whose flip
// probability is min(1/(1 + e^eta), (lambda_j + H)/4), H being the deciding
// vehicle's current pseudonym entropy.  Internal learning state (Q-tables,
// network weights) always sees the true values; only releases are perturbed.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "vsn/rng.hpp"
#include "vsn/types.hpp"

namespace vsn {

// Shannon entropy in bits of a probability vector.  Zero entries contribute
// zero.  Throws std::domain_error on negative entries or when the sum is not
// 1 within 1e-9.
double pseudonym_entropy(std::span<const double> probs);

// True reward (clipped into [0, 1] first, the channel's sensitivity) plus
// Laplace(0, 1/eta) noise, clipped back to [0, 1].  Throws if eta <= 0.
double perturb_reward(double true_reward, double eta, Rng& rng);

struct FlipDecision {
  double p_flip = 0.0;
  bool disabled = false;  // cap was <= 0: the channel reports the truth
};

// Flip probability of the action channel under budget eta and the entropy cap.
FlipDecision flip_probability(double eta, double lambda_j, double entropy_h);

struct ReleasedAction {
  int released = 0;
  bool flipped = false;
  bool disabled = false;
};

// Randomized response over `n_actions` alternatives: with probability
// 1 - p_flip the true index is released, otherwise a uniform draw over the
// other indices.  With fewer than two actions the channel cannot flip and is
// reported as disabled.
ReleasedAction perturb_action(int true_index, int n_actions, double eta,
                              double lambda_j, double entropy_h, Rng& rng);

struct DpCheckReport {
  double max_log_ratio = 0.0;  // empirical max over release events
  double margin = 0.0;         // three-sigma allowance of the estimate
  bool passed = false;         // max_log_ratio <= eta + margin
};

// Monte Carlo check of the eta-DP guarantee for a randomized-response
// channel with the given flip probability over n_actions alternatives:
// estimates the release distributions for two adjacent true actions and
// compares the worst log-ratio against eta plus a three-sigma margin.
DpCheckReport verify_dp(double eta, double p_flip, int n_actions,
                        int n_trials, Rng& rng);

// Fraction of attack attempts that leak: the released action equals the true
// one AND the target's pseudonym entropy at that moment is below the
// threshold.  Spans must have equal length; empty input yields nullopt.
std::optional<double> adversary_inference(std::span<const int> released,
                                          std::span<const int> truth,
                                          std::span<const double> entropy_bits,
                                          double entropy_threshold);

// Rolling pseudonym-entropy estimate per vehicle: empirical frequencies of
// which malicious node attacked it, with add-one smoothing over the fixed
// attacker population.  With no observations the estimate is uniform, i.e.
// log2(#attackers) bits; it decays toward 0 as one attacker dominates.
class AttackHistory {
 public:
  explicit AttackHistory(std::vector<NodeId> attackers)
      : attackers_(std::move(attackers)) {}

  void record_attack(NodeId target, NodeId attacker);
  double entropy_bits(NodeId target) const;
  const std::vector<NodeId>& attackers() const { return attackers_; }

 private:
  std::vector<NodeId> attackers_;
  std::map<NodeId, std::map<NodeId, long>> counts_;  // target -> attacker -> n
};

}  // namespace vsn
