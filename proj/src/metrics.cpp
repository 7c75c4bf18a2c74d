#include "vsn/metrics.hpp"

#include <cmath>

#include "vsn/privacy.hpp"

namespace vsn {

std::optional<double> accuracy_metric(const RunTrace& t) {
  if (t.decisions.empty()) return std::nullopt;
  long hits = 0;
  for (const auto& d : t.decisions) {
    if (d.chosen_is_best) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(t.decisions.size());
}

double travel_expenses(const RunTrace& t) {
  double total = 0.0;
  for (const auto& p : t.packets) {
    if (p.delivered_at_ms) total += p.energy_spent_j;
  }
  return total;
}

int connectivity_degree(const RunTrace& t) {
  return static_cast<int>(t.communicated_vehicles.size());
}

std::optional<double> transmission_delay(const RunTrace& t) {
  double sum = 0.0;
  long n = 0;
  for (const auto& p : t.packets) {
    if (!p.delivered_at_ms) continue;
    sum += static_cast<double>(*p.delivered_at_ms) - p.expected_delivery_ms;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

AttackMetrics attack_metrics(const RunTrace& t) {
  AttackMetrics m;
  std::vector<int> released;
  std::vector<int> truth;
  std::vector<double> entropy;
  for (const auto& d : t.decisions) {
    if (!d.attacked) continue;
    released.push_back(d.released_action);
    truth.push_back(d.true_action);
    entropy.push_back(d.entropy_bits);
  }
  m.p_privacy_leakage =
      adversary_inference(released, truth, entropy, kLinkableEntropyBits);
  if (t.malicious_handles > 0) {
    m.p_malicious_attack = static_cast<double>(t.malicious_drops) /
                           static_cast<double>(t.malicious_handles);
  }
  return m;
}

double total_transfer_time(const RunTrace& t, const ScenarioConfig&) {
  double total = 0.0;
  for (const auto& p : t.packets) {
    if (!p.delivered_at_ms) continue;
    const auto idx = static_cast<std::size_t>(p.id);
    const int attempts = t.per_packet_rate_hops[idx];
    if (attempts <= 0) continue;
    const double mean_rate =
        t.per_packet_rate_sum[idx] / static_cast<double>(attempts);
    const double segments = static_cast<double>(p.visited.size()) - 1.0;
    const double blocks = std::ceil(p.size_bytes / kBlockUnitBytes);
    total += transfer_time(segments, blocks, mean_rate);
  }
  return total;
}

MetricsReport compute_metrics(const RunTrace& t, const ScenarioConfig& cfg) {
  MetricsReport r;
  r.accuracy = accuracy_metric(t);
  r.travel_expenses_j = travel_expenses(t);
  r.connectivity_degree = connectivity_degree(t);
  r.transmission_delay_ms = transmission_delay(t);
  const AttackMetrics am = attack_metrics(t);
  r.p_privacy_leakage = am.p_privacy_leakage;
  r.p_malicious_attack = am.p_malicious_attack;
  if (am.p_privacy_leakage && am.p_malicious_attack) {
    r.objective = objective_value(*am.p_privacy_leakage, *am.p_malicious_attack,
                                  total_transfer_time(t, cfg));
  }
  r.converged = t.pretrain.converged;
  r.episodes_used = t.pretrain.episodes_used;
  return r;
}

RunSummary run_summary(const RunTrace& t, const ScenarioConfig& cfg) {
  RunSummary s;
  s.total_tt = total_transfer_time(t, cfg);
  s.max_rate = t.max_rate_used;
  s.max_reward = t.max_reward_seen;
  const AttackMetrics am = attack_metrics(t);
  s.p_leak = am.p_privacy_leakage.value_or(0.0);
  s.p_attack = am.p_malicious_attack.value_or(0.0);
  return s;
}

}  // namespace vsn
