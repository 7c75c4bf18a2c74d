#include "vsn/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vsn {

double pseudonym_entropy(std::span<const double> probs) {
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw std::domain_error("pseudonym_entropy: negative probability");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw std::domain_error("pseudonym_entropy: probabilities must sum to 1");
  }
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double perturb_reward(double true_reward, double eta, Rng& rng) {
  if (!(eta > 0.0)) throw std::domain_error("perturb_reward: eta must be > 0");
  const double clipped = std::clamp(true_reward, 0.0, 1.0);
  return std::clamp(clipped + rng.laplace(1.0 / eta), 0.0, 1.0);
}

FlipDecision flip_probability(double eta, double lambda_j, double entropy_h) {
  if (!(eta > 0.0)) throw std::domain_error("flip_probability: eta must be > 0");
  FlipDecision d;
  const double cap = (lambda_j + entropy_h) / 4.0;
  if (cap <= 0.0) {
    d.disabled = true;
    return d;
  }
  d.p_flip = std::min(1.0 / (1.0 + std::exp(eta)), cap);
  return d;
}

ReleasedAction perturb_action(int true_index, int n_actions, double eta,
                              double lambda_j, double entropy_h, Rng& rng) {
  if (n_actions < 1 || true_index < 0 || true_index >= n_actions) {
    throw std::domain_error("perturb_action: index outside action set");
  }
  ReleasedAction out;
  out.released = true_index;
  if (n_actions < 2) {
    out.disabled = true;  // nothing to flip to
    return out;
  }
  const FlipDecision d = flip_probability(eta, lambda_j, entropy_h);
  if (d.disabled) {
    out.disabled = true;
    return out;
  }
  if (rng.bernoulli(d.p_flip)) {
    out.flipped = true;
    // Uniform over the other n-1 actions.
    const int other = static_cast<int>(rng.uniform_int(
        static_cast<std::uint64_t>(n_actions - 1)));
    out.released = other >= true_index ? other + 1 : other;
  }
  return out;
}

DpCheckReport verify_dp(double eta, double p_flip, int n_actions, int n_trials,
                        Rng& rng) {
  if (!(eta > 0.0)) throw std::domain_error("verify_dp: eta must be > 0");
  if (n_actions < 2) throw std::domain_error("verify_dp: need >= 2 actions");
  if (n_trials < 1) throw std::domain_error("verify_dp: need >= 1 trials");
  if (!(p_flip >= 0.0 && p_flip < 1.0)) {
    throw std::domain_error("verify_dp: p_flip must lie in [0, 1)");
  }

  // Release distribution of one true action under randomized response.
  auto sample = [&](int truth, std::vector<long>& counts) {
    for (int t = 0; t < n_trials; ++t) {
      int released = truth;
      if (rng.bernoulli(p_flip)) {
        const int other = static_cast<int>(
            rng.uniform_int(static_cast<std::uint64_t>(n_actions - 1)));
        released = other >= truth ? other + 1 : other;
      }
      ++counts[static_cast<std::size_t>(released)];
    }
  };

  std::vector<long> c0(static_cast<std::size_t>(n_actions), 0);
  std::vector<long> c1(static_cast<std::size_t>(n_actions), 0);
  sample(0, c0);  // adjacent inputs: two different true actions
  sample(1, c1);

  DpCheckReport report;
  const double n = static_cast<double>(n_trials);
  double worst = 0.0;
  double worst_sigma = 0.0;
  for (int a = 0; a < n_actions; ++a) {
    const double pa = static_cast<double>(c0[static_cast<std::size_t>(a)]) / n;
    const double pb = static_cast<double>(c1[static_cast<std::size_t>(a)]) / n;
    if (pa <= 0.0 || pb <= 0.0) continue;  // event unseen; no ratio evidence
    const double log_ratio = std::fabs(std::log(pa / pb));
    // Delta-method variance of log(pa/pb) from two independent estimates.
    const double sigma = std::sqrt((1.0 - pa) / (n * pa) + (1.0 - pb) / (n * pb));
    if (log_ratio > worst) {
      worst = log_ratio;
      worst_sigma = sigma;
    }
  }
  report.max_log_ratio = worst;
  report.margin = 3.0 * worst_sigma;
  report.passed = worst <= eta + report.margin;
  return report;
}

std::optional<double> adversary_inference(std::span<const int> released,
                                          std::span<const int> truth,
                                          std::span<const double> entropy_bits,
                                          double entropy_threshold) {
  if (released.size() != truth.size() || truth.size() != entropy_bits.size()) {
    throw std::invalid_argument("adversary_inference: length mismatch");
  }
  if (released.empty()) return std::nullopt;
  long leaks = 0;
  for (std::size_t i = 0; i < released.size(); ++i) {
    if (released[i] == truth[i] && entropy_bits[i] < entropy_threshold) {
      ++leaks;
    }
  }
  return static_cast<double>(leaks) / static_cast<double>(released.size());
}

void AttackHistory::record_attack(NodeId target, NodeId attacker) {
  ++counts_[target][attacker];
}

double AttackHistory::entropy_bits(NodeId target) const {
  const std::size_t k = attackers_.size();
  if (k == 0) return 0.0;
  std::vector<double> probs;
  probs.reserve(k);
  long total = 0;
  auto it = counts_.find(target);
  for (NodeId a : attackers_) {
    long c = 0;
    if (it != counts_.end()) {
      auto jt = it->second.find(a);
      if (jt != it->second.end()) c = jt->second;
    }
    probs.push_back(static_cast<double>(c + 1));  // add-one smoothing
    total += c + 1;
  }
  for (double& p : probs) p /= static_cast<double>(total);
  return pseudonym_entropy(probs);
}

}  // namespace vsn
