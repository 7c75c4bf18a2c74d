#include "vsn/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <deque>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "vsn/csv.hpp"
#include "vsn/mobility.hpp"
#include "vsn/privacy.hpp"
#include "vsn/qlearning.hpp"
#include "vsn/reward.hpp"

namespace vsn {

const char* to_string(SchedulerKind s) {
  switch (s) {
    case SchedulerKind::Dsql: return "dsql";
    case SchedulerKind::Random: return "random";
    case SchedulerKind::GreedyDistance: return "greedy_distance";
    case SchedulerKind::StaticPriority: return "static_priority";
  }
  return "?";
}

SchedulerKind parse_scheduler(const std::string& name) {
  std::string low = name;
  for (char& c : low) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (low == "dsql") return SchedulerKind::Dsql;
  if (low == "random") return SchedulerKind::Random;
  if (low == "greedy_distance" || low == "greedy") {
    return SchedulerKind::GreedyDistance;
  }
  if (low == "static_priority" || low == "static") {
    return SchedulerKind::StaticPriority;
  }
  throw std::invalid_argument("unknown scheduler '" + name +
                              "' (expected dsql, random, greedy_distance or "
                              "static_priority)");
}

CommType comm_type_for_hop(const WorldState& w, NodeId from, NodeId to) {
  const NodeKind kind = w.node_kind(to);
  if (kind == NodeKind::BaseStation) return CommType::Cellular;
  if (kind == NodeKind::Rsu) return CommType::V2I;
  const auto it = w.links.find(LinkKey(from, to));
  const bool line_of_sight = it != w.links.end() && it->second.rounds() > 0 &&
                             !it->second.last_round_blocked;
  return line_of_sight ? CommType::V2V : CommType::P80211;
}

namespace {

// Hop outcomes the candidate scorer retrains on, rolling window.
constexpr std::size_t kSampleWindow = 5000;

// The quadratic local-processing power model is calibrated for bandwidths
// counted in MHz and CPU frequencies counted in GHz; raw Hz values would
// produce absurd powers, so the engine rescales before evaluating it.
constexpr double kMhz = 1.0e6;
constexpr double kGhz = 1.0e9;

double link_hrr(const WorldState& w, NodeId a, NodeId b) {
  const auto it = w.links.find(LinkKey(a, b));
  return it == w.links.end() ? 0.0 : it->second.hrr();
}

// Offload-density reward of a base station: the share of the vehicle
// population currently inside its communication range, attenuated by the
// discount once per hop the packet has already travelled.
double station_density_reward(const WorldState& w, NodeId station,
                              const Packet& pkt) {
  const ScenarioConfig& cfg = w.cfg;
  int connected = 0;
  const Eigen::Vector2d pos = w.node_position(station);
  for (const auto& v : w.vehicles) {
    const double d = torus_distance(v.state.pos, pos, cfg.area_width_m,
                                    cfg.area_length_m);
    if (d <= cfg.comm_range_m) ++connected;
  }
  const double share = std::min(
      1.0, static_cast<double>(connected) / static_cast<double>(cfg.n_vehicles));
  const int prior_hops =
      pkt.visited.empty() ? 0 : static_cast<int>(pkt.visited.size()) - 1;
  return share * std::pow(cfg.beta, prior_hops);
}

// Largest link rate the scenario can produce (at the distance floor); used to
// normalise the rate feature and as the initial-rate constraint bound.
double fastest_rate(const ScenarioConfig& cfg) {
  return v2i_rate(cfg.bandwidth_hz, cfg.tx_power_w, cfg.channel_fading,
                  cfg.noise_power_w, cfg.d_min_m, cfg.path_loss_exp);
}

// Upper bound on one hop's energy: the longest airtime the configured packet
// size can need (slowest in-range rate) paired with the largest local
// processing power (fastest CPU at the distance floor).
double worst_hop_energy(const ScenarioConfig& cfg) {
  const double slowest =
      v2i_rate(cfg.bandwidth_hz, cfg.tx_power_w, cfg.channel_fading,
               cfg.noise_power_w, std::max(cfg.comm_range_m, cfg.d_min_m),
               cfg.path_loss_exp);
  const double longest_tx_s = cfg.packet_size_bytes * 8.0 / slowest;
  EnergyModel m;
  m.bandwidth = cfg.bandwidth_hz / kMhz;
  m.cpu_freq_hz = cfg.cpu_freq_max_hz / kGhz;
  m.dt_s = longest_tx_s;
  m.distance_m = cfg.d_min_m;
  m.ad = cfg.data_density;
  m.tx_power_w = cfg.tx_power_w;
  return tx_energy(cfg.tx_power_w, longest_tx_s) + local_power_energy(m).energy_j;
}

}  // namespace

CandidateEval evaluate_candidate(const WorldState& w, NodeId holder,
                                 const Packet& pkt, NodeId next) {
  const ScenarioConfig& cfg = w.cfg;
  CandidateEval ev;
  ev.action = Action{next, comm_type_for_hop(w, holder, next)};

  const double d = w.clamped_distance(holder, next);
  ev.rate_bps = v2i_rate(w.node_bandwidth(holder), cfg.tx_power_w,
                         cfg.channel_fading, cfg.noise_power_w, d,
                         cfg.path_loss_exp);
  const double tx_s = pkt.size_bytes * 8.0 / ev.rate_bps;

  double processing_ms = 0.0;
  switch (ev.action.second) {
    case CommType::Cellular:
    case CommType::V2I:
      processing_ms = cfg.pd_bs_ms;
      break;
    case CommType::P80211:
      processing_ms = cfg.pd_11p_ms;
      break;
    case CommType::V2V:
      break;  // direct millimetre-wave forwarding adds no queueing delay
  }
  ev.hop_delay_ms = tx_s * 1000.0 + processing_ms;
  ev.deadline_ok = ev.hop_delay_ms <= cfg.pd_th_ms;

  EnergyModel em;
  em.bandwidth = w.node_bandwidth(holder) / kMhz;
  em.cpu_freq_hz = w.node_cpu_freq(holder) / kGhz;
  em.dt_s = tx_s;
  em.distance_m = d;
  em.ad = cfg.data_density;
  em.tx_power_w = cfg.tx_power_w;
  ev.energy_j = tx_energy(cfg.tx_power_w, tx_s) + local_power_energy(em).energy_j;

  // Data the holder can process locally within one slot; the raw frequency
  // against the configured density divisor keeps this in unit range.
  EnergyModel dm = em;
  dm.cpu_freq_hz = w.node_cpu_freq(holder);
  dm.dt_s = cfg.slot_s();
  const double d_local = local_data_amount(dm);

  RewardInputs in;
  in.next_hop_kind = w.node_kind(next);
  in.app_class = pkt.app_class;
  if (in.next_hop_kind == NodeKind::BaseStation) {
    in.red_bar = station_density_reward(w, next, pkt);
  }
  in.d_local = d_local;
  in.pd_th = cfg.pd_th_ms;
  in.t_persistent_s = static_cast<double>(w.tick_ms) / 1000.0;
  in.cb = cfg.cb_cellular;
  in.pd_bs = cfg.pd_bs_ms;
  in.ps_bytes = pkt.size_bytes;
  in.cb_11p = cfg.cb_11p;
  in.hrr = link_hrr(w, holder, next);
  in.p_obstacle = link_obstacle_probability(w, holder, next);
  in.pd_11p = cfg.pd_11p_ms;

  const bool p80211_path = in.app_class == AppClass::DelaySensitiveUnicast &&
                           in.next_hop_kind != NodeKind::BaseStation;
  double raw = 0.0;
  if (p80211_path && ((in.p_obstacle > 0.0 && in.hrr <= 0.0) ||
                      (in.p_obstacle <= 0.0 && in.pd_11p <= 0.0))) {
    raw = 0.0;  // no usable link statistics yet: nothing to promise
  } else {
    raw = select_reward(in);
  }
  // Granted rewards honour the configured cap (the feasibility bound); the
  // raw formulas above stay uncapped for analysis.
  ev.reward = std::clamp(raw, 0.0, cfg.reward_max);

  ev.features = Eigen::Vector3d(
      ev.reward / cfg.reward_max,
      std::min(1.0, ev.rate_bps / fastest_rate(cfg)),
      std::min(1.0, ev.energy_j / worst_hop_energy(cfg)));
  return ev;
}

const CandidateEval* oracle_best(const std::vector<CandidateEval>& evals) {
  const CandidateEval* best = nullptr;
  for (const auto& e : evals) {
    if (!best) {
      best = &e;
      continue;
    }
    if (e.deadline_ok != best->deadline_ok) {
      if (e.deadline_ok) best = &e;
      continue;
    }
    if (e.reward != best->reward) {
      if (e.reward > best->reward) best = &e;
      continue;
    }
    if (e.action.first < best->action.first) best = &e;
  }
  return best;
}

bool achieves_oracle_value(const CandidateEval& chosen,
                           const CandidateEval& oracle, double tol) {
  return chosen.deadline_ok == oracle.deadline_ok &&
         chosen.reward >= oracle.reward - tol;
}

namespace {

// One transmission in the air.  Its fate (obstruction loss) is drawn when it
// is sent; the consequences land at the arrival tick.
struct InFlight {
  int pkt = -1;
  NodeId from = kInvalidNode;
  NodeId to = kInvalidNode;
  bool fails = false;
};

void spawn_packet(WorldState& w, NodeId src, RunTrace& trace,
                  std::map<NodeId, std::deque<int>>& queues) {
  const ScenarioConfig& cfg = w.cfg;
  Packet p;
  p.id = static_cast<int>(trace.packets.size());
  p.source = src;
  p.app_class = w.rng.packets.bernoulli(cfg.p_traffic_intensive)
                    ? AppClass::TrafficIntensive
                    : AppClass::DelaySensitiveUnicast;
  // Traffic-intensive data is offloaded toward a base station; unicast
  // traffic addresses any other node uniformly.
  if (p.app_class == AppClass::TrafficIntensive && cfg.n_base_stations > 0) {
    p.destination = cfg.n_vehicles +
                    static_cast<NodeId>(w.rng.packets.uniform_int(
                        static_cast<std::uint64_t>(cfg.n_base_stations)));
  } else {
    NodeId dest = static_cast<NodeId>(w.rng.packets.uniform_int(
        static_cast<std::uint64_t>(cfg.total_nodes() - 1)));
    if (dest >= src) ++dest;
    p.destination = dest;
  }
  p.size_bytes = cfg.packet_size_bytes;
  p.created_at_ms = w.tick_ms;
  const double d = w.clamped_distance(src, p.destination);
  const double rate = v2i_rate(w.node_bandwidth(src), cfg.tx_power_w,
                               cfg.channel_fading, cfg.noise_power_w, d,
                               cfg.path_loss_exp);
  p.expected_delivery_ms =
      static_cast<double>(w.tick_ms) + p.size_bytes * 8.0 / rate * 1000.0;
  p.visited = {src};
  queues[src].push_back(p.id);
  trace.packets.push_back(std::move(p));
  trace.per_packet_rate_sum.push_back(0.0);
  trace.per_packet_rate_hops.push_back(0);
}

// Social-connectivity tally: once per hello round, every vehicle accumulates
// the connectivity metric against each vehicle currently in range.
void accumulate_com(const WorldState& w,
                    std::map<NodeId, std::pair<double, long>>& sums) {
  const ScenarioConfig& cfg = w.cfg;
  for (const auto& receiver : w.vehicles) {
    for (const auto& sender : w.vehicles) {
      if (sender.state.id == receiver.state.id) continue;
      // The metric normalizes by the sender's motion; a parked sender has no
      // defined value, so the pair contributes nothing.
      if (sender.state.vel.norm() == 0.0) continue;
      const double d = torus_distance(receiver.state.pos, sender.state.pos,
                                      cfg.area_width_m, cfg.area_length_m);
      if (d > cfg.comm_range_m) continue;
      const double rate =
          v2i_rate(cfg.bandwidth_hz, cfg.tx_power_w, cfg.channel_fading,
                   cfg.noise_power_w, std::max(d, cfg.d_min_m),
                   cfg.path_loss_exp);
      const double com = connectivity_metric(
          w.node_bandwidth(receiver.state.id) / kMhz, receiver.state.vel.norm(),
          rate, sender.state.vel.norm(), rate);
      auto& acc = sums[receiver.state.id];
      acc.first += com;
      acc.second += 1;
    }
  }
}

// Nearest malicious vehicle inside the holder's neighbourhood, or invalid.
NodeId nearest_malicious(const WorldState& w, NodeId target,
                         const std::vector<NodeId>& nbrs) {
  NodeId best = kInvalidNode;
  double best_d = 0.0;
  const Eigen::Vector2d pos = w.node_position(target);
  for (NodeId m : nbrs) {
    if (!w.node_malicious(m)) continue;
    const double d = torus_distance(pos, w.node_position(m), w.cfg.area_width_m,
                                    w.cfg.area_length_m);
    if (best == kInvalidNode || d < best_d) {
      best = m;
      best_d = d;
    }
  }
  return best;
}

}  // namespace

RunResult run(const ScenarioConfig& cfg, SchedulerKind scheduler) {
  WorldState w = build_world(cfg);
  RunResult result;
  RunTrace& trace = result.trace;

  if (scheduler == SchedulerKind::Dsql) {
    // Warm the tables toward every possible destination, then restart the
    // clock: the learned state is the method's starting point.
    std::vector<NodeId> dests(static_cast<std::size_t>(cfg.total_nodes()));
    std::iota(dests.begin(), dests.end(), 0);
    const TrainReport tr = train(w, dests, cfg.episodes_budget, cfg.q_threshold);
    trace.pretrain.episodes_used = tr.episodes_used;
    trace.pretrain.max_q = tr.max_q;
    trace.pretrain.converged = tr.converged;
    w.tick_ms = 0;
  }

  const std::int64_t ticks = cfg.sim_ticks();
  const std::int64_t hello_every = std::max<std::int64_t>(1, cfg.hello_ticks());
  const std::int64_t eviction_ms = static_cast<std::int64_t>(
      kEvictionHorizonPeriods * cfg.hello_period_ms);
  const std::int64_t retrain_every =
      static_cast<std::int64_t>(cfg.mlp_retrain_s * 1000.0 / cfg.time_slot_ms);
  const double arrivals_per_tick = cfg.packet_rate_per_s * cfg.slot_s();
  const bool can_address = cfg.total_nodes() >= 2;

  std::map<NodeId, std::deque<int>> queues;  // waiting packet indices per node
  std::map<NodeId, std::int64_t> busy_until;  // first tick a sender is free
  std::map<std::int64_t, std::vector<InFlight>> in_flight;  // by arrival tick
  std::vector<TrainingSample> samples;
  bool net_fitted = false;
  std::map<NodeId, std::pair<double, long>> com_sums;

  auto execute_hop = [&](NodeId holder, std::deque<int>& q, std::size_t pick,
                         const CandidateEval& ev, std::int64_t now) {
    const int pkt_index = q[pick];
    Packet& pkt = trace.packets[static_cast<std::size_t>(pkt_index)];
    const double tx_ms = pkt.size_bytes * 8.0 / ev.rate_bps * 1000.0;
    const auto ticks_of = [&](double ms) {
      return std::max<std::int64_t>(
          1, static_cast<std::int64_t>(std::ceil(ms / cfg.time_slot_ms)));
    };
    busy_until[holder] = now + ticks_of(tx_ms);
    InFlight f;
    f.pkt = pkt_index;
    f.from = holder;
    f.to = ev.action.first;
    f.fails = w.rng.hello.bernoulli(link_obstacle_probability(w, holder, f.to));
    in_flight[now + ticks_of(ev.hop_delay_ms)].push_back(f);
    pkt.energy_spent_j += ev.energy_j;
    trace.node_energy_j[holder] += ev.energy_j;
    trace.per_packet_rate_sum[static_cast<std::size_t>(pkt_index)] += ev.rate_bps;
    trace.per_packet_rate_hops[static_cast<std::size_t>(pkt_index)] += 1;
    trace.max_rate_used = std::max(trace.max_rate_used, ev.rate_bps);
    trace.max_reward_seen = std::max(trace.max_reward_seen, ev.reward);
    q.erase(q.begin() + static_cast<std::ptrdiff_t>(pick));
  };

  for (std::int64_t i = 0; i < ticks; ++i) {
    w.tick_ms = static_cast<std::int64_t>(static_cast<double>(i) * cfg.time_slot_ms);

    // Hello round: refresh link statistics, drop entries for neighbours not
    // heard from within the horizon, tally social connectivity.
    if (i % hello_every == 0) {
      exchange_hellos(w);
      for (auto& [id, table] : w.q_tables) {
        table.evict_stale(w.tick_ms, eviction_ms);
      }
      accumulate_com(w, com_sums);
    }

    // Poisson packet arrivals, per vehicle in id order.
    if (can_address) {
      for (const auto& veh : w.vehicles) {
        const int n_new = w.rng.packets.poisson(arrivals_per_tick);
        for (int n = 0; n < n_new; ++n) {
          spawn_packet(w, veh.state.id, trace, queues);
        }
      }
    }

    // Transmissions completing this tick.
    if (auto bucket = in_flight.extract(i); !bucket.empty()) {
      for (const InFlight& f : bucket.mapped()) {
        Packet& pkt = trace.packets[static_cast<std::size_t>(f.pkt)];
        if (f.fails) {
          // Obstructed: the sender keeps the packet and retries.
          queues[f.from].push_front(f.pkt);
          continue;
        }
        if (f.to == pkt.destination) {
          pkt.visited.push_back(f.to);
          pkt.delivered_at_ms = w.tick_ms;
          continue;
        }
        if (w.node_malicious(f.to)) {
          ++trace.malicious_handles;
          if (w.rng.hello.bernoulli(kMaliciousDropProb)) {
            ++trace.malicious_drops;
            pkt.dropped_by_malicious = true;
            continue;
          }
        }
        pkt.visited.push_back(f.to);
        queues[f.to].push_back(f.pkt);
      }
    }

    // Scheduling decisions, holders in id order.
    for (auto& [holder, q] : queues) {
      if (q.empty()) continue;
      if (const auto b = busy_until.find(holder);
          b != busy_until.end() && b->second > i) {
        continue;
      }

      // Which waiting packet transmits next: tightest delivery estimate under
      // the static-priority policy, first-in-first-out otherwise.
      std::size_t pick = 0;
      if (scheduler == SchedulerKind::StaticPriority) {
        for (std::size_t k = 1; k < q.size(); ++k) {
          const auto& a = trace.packets[static_cast<std::size_t>(q[k])];
          const auto& b = trace.packets[static_cast<std::size_t>(q[pick])];
          if (a.expected_delivery_ms < b.expected_delivery_ms) pick = k;
        }
      }
      Packet& pkt = trace.packets[static_cast<std::size_t>(q[pick])];
      const std::vector<NodeId> nbrs = neighbors(w, holder);

      // A destination in range is served directly, no scheduler consulted.
      if (std::binary_search(nbrs.begin(), nbrs.end(), pkt.destination)) {
        const CandidateEval ev =
            evaluate_candidate(w, holder, pkt, pkt.destination);
        execute_hop(holder, q, pick, ev, i);
        continue;
      }

      std::vector<CandidateEval> evals;
      for (NodeId m : nbrs) {
        if (std::find(pkt.visited.begin(), pkt.visited.end(), m) !=
            pkt.visited.end()) {
          continue;
        }
        evals.push_back(evaluate_candidate(w, holder, pkt, m));
      }
      if (evals.empty()) continue;  // nothing reachable; wait for mobility

      int chosen_idx = 0;
      if (scheduler == SchedulerKind::Random) {
        chosen_idx = static_cast<int>(w.rng.scheduler.uniform_int(evals.size()));
      } else if (scheduler == SchedulerKind::GreedyDistance ||
                 scheduler == SchedulerKind::StaticPriority) {
        const Eigen::Vector2d goal = w.node_position(pkt.destination);
        double best_d = 0.0;
        for (std::size_t k = 0; k < evals.size(); ++k) {
          const double d =
              torus_distance(w.node_position(evals[k].action.first), goal,
                             cfg.area_width_m, cfg.area_length_m);
          if (k == 0 || d < best_d) {
            best_d = d;
            chosen_idx = static_cast<int>(k);
          }
        }
      } else {  // the learned scheduler
        // Synchronous backup over the whole evaluated set before selecting:
        // candidate rewards drift with mobility and elapsed time, so every
        // visit re-anchors this holder's table at the current values (the
        // same full-sweep update the pre-training episodes use).
        QTable& table = w.q_tables.at(holder);
        for (const CandidateEval& e : evals) {
          const double lq = link_hrr(w, holder, e.action.first);
          const double bootstrap =
              neighbor_max_q(w, e.action.first, pkt.destination, e.action.second);
          table.q_update({pkt.destination, e.action.second, e.action.first},
                         lq, e.reward, bootstrap, cfg.alpha, cfg.beta);
        }
        std::vector<int> kept(evals.size());
        std::iota(kept.begin(), kept.end(), 0);
        if (cfg.mlp_filter_enabled &&
            static_cast<int>(evals.size()) > cfg.mlp_topk) {
          std::vector<Eigen::Vector3d> feats;
          feats.reserve(evals.size());
          for (const auto& e : evals) feats.push_back(e.features);
          const std::vector<int> order = w.net.score_order(feats);
          kept.assign(order.begin(),
                      order.begin() + static_cast<std::ptrdiff_t>(cfg.mlp_topk));
          std::sort(kept.begin(), kept.end());
        }
        std::vector<Action> actions;
        actions.reserve(kept.size());
        for (int k : kept) {
          actions.push_back(evals[static_cast<std::size_t>(k)].action);
        }
        // Exploration anneals linearly from the initial rate to the floor.
        const double frac =
            ticks > 1 ? static_cast<double>(i) / static_cast<double>(ticks - 1)
                      : 1.0;
        const double eps = cfg.epsilon_explore +
                           (cfg.epsilon_min - cfg.epsilon_explore) * frac;
        const Action a =
            select_action(table, pkt.destination, actions, eps, w.rng.scheduler);
        for (std::size_t k = 0; k < evals.size(); ++k) {
          if (evals[k].action == a) {
            chosen_idx = static_cast<int>(k);
            break;
          }
        }
      }

      DecisionRecord rec;
      rec.tick_ms = w.tick_ms;
      rec.node = holder;
      rec.destination = pkt.destination;
      rec.candidates.reserve(evals.size());
      for (const auto& e : evals) rec.candidates.push_back(e.action.first);
      const CandidateEval& chosen_ev = evals[static_cast<std::size_t>(chosen_idx)];
      const CandidateEval* oracle = oracle_best(evals);
      rec.chosen = chosen_ev.action.first;
      rec.oracle_best = oracle->action.first;
      rec.chosen_is_best = achieves_oracle_value(chosen_ev, *oracle);
      rec.true_reward = chosen_ev.reward;
      rec.true_action = chosen_idx;
      // The scorer learns to recognise value-optimal hops from the decisions
      // actually taken (exploration supplies the negative examples).
      samples.push_back({chosen_ev.features, rec.chosen_is_best ? 1.0 : 0.0});
      // Entropy is read before the attack is recorded: it is what the
      // adversary knows at the moment of the release.
      rec.entropy_bits = w.attacks.entropy_bits(holder);
      if (w.is_vehicle(holder)) {
        const NodeId attacker = nearest_malicious(w, holder, nbrs);
        if (attacker != kInvalidNode) {
          rec.attacked = true;
          w.attacks.record_attack(holder, attacker);
        }
      }
      if (scheduler == SchedulerKind::Dsql) {
        rec.released_reward = perturb_reward(rec.true_reward, cfg.eta_privacy,
                                             w.rng.privacy_reward);
        rec.released_action =
            perturb_action(rec.true_action,
                           static_cast<int>(rec.candidates.size()),
                           cfg.eta_privacy, cfg.lambda_j, rec.entropy_bits,
                           w.rng.privacy_action)
                .released;
      } else {
        // The baselines release the truth; only the learned scheduler runs
        // the privacy channels.
        rec.released_reward = rec.true_reward;
        rec.released_action = rec.true_action;
      }
      trace.decisions.push_back(std::move(rec));

      execute_hop(holder, q, pick,
                  evals[static_cast<std::size_t>(chosen_idx)], i);
    }

    // Scorer training: an initial fit as soon as one batch of decisions
    // exists, then periodic retraining on the rolling outcome window.
    const bool on_cadence = retrain_every > 0 && i > 0 && i % retrain_every == 0;
    if (scheduler == SchedulerKind::Dsql &&
        static_cast<int>(samples.size()) >= cfg.mlp_batch_size &&
        (!net_fitted || on_cadence)) {
      const std::size_t keep = std::min(samples.size(), kSampleWindow);
      const std::vector<TrainingSample> window(
          samples.end() - static_cast<std::ptrdiff_t>(keep), samples.end());
      const std::vector<double> costs =
          w.net.train(window, cfg.mlp_learning_rate, cfg.mlp_batch_size,
                      cfg.mlp_epochs, w.rng.training);
      trace.mlp_loss_trace.insert(trace.mlp_loss_trace.end(), costs.begin(),
                                  costs.end());
      net_fitted = true;
    }

    // Vehicles advance one slot at the end of the tick.
    for (auto& v : w.vehicles) {
      step_mobility(v.state, cfg.time_slot_ms, cfg.area_width_m,
                    cfg.area_length_m);
    }
  }

  // A vehicle communicated if a hello between it and another vehicle got
  // through in either direction.
  for (const auto& veh : w.vehicles) {
    for (const auto& [peer, count] : veh.state.hello_received_from) {
      if (count > 0 && w.is_vehicle(peer)) {
        trace.communicated_vehicles.insert(veh.state.id);
        trace.communicated_vehicles.insert(peer);
      }
    }
  }
  for (const auto& [id, acc] : com_sums) {
    if (acc.second > 0) {
      trace.mean_com[id] = acc.first / static_cast<double>(acc.second);
    }
  }

  result.metrics = compute_metrics(trace, cfg);
  const RunSummary summary = run_summary(trace, cfg);
  result.constraints =
      check_constraints(summary, cfg.tau_s(), fastest_rate(cfg),
                        cfg.reward_max, cfg.th_leak, cfg.th_attack);
  result.q_tables = std::move(w.q_tables);
  result.net = std::move(w.net);
  return result;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& base,
                                const SweepSpec& spec) {
  if (spec.param.empty()) {
    throw std::invalid_argument("run_sweep: param must be named");
  }
  if (spec.n_seeds < 1) {
    throw std::invalid_argument("run_sweep: n_seeds must be >= 1");
  }

  struct Job {
    double value;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  jobs.reserve(spec.values.size() * static_cast<std::size_t>(spec.n_seeds));
  for (double v : spec.values) {
    for (int s = 1; s <= spec.n_seeds; ++s) {
      jobs.push_back({v, static_cast<std::uint64_t>(s)});
    }
  }
  std::vector<SweepRow> rows(jobs.size());
  if (jobs.empty()) return rows;

  std::atomic<std::size_t> cursor{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;

  auto work = [&]() {
    while (true) {
      const std::size_t j = cursor.fetch_add(1);
      if (j >= jobs.size()) return;
      {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (failure) return;
      }
      try {
        ScenarioConfig cfg = base;
        cfg.seed = jobs[j].seed;
        const std::string value = format_double(jobs[j].value);
        set_key(cfg, spec.param, value);
        const RunResult r = run(cfg, spec.scheduler);
        rows[j] = SweepRow{spec.param, value, jobs[j].seed,
                           to_string(spec.scheduler), r.metrics};
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  int n_workers = std::min<int>(spec.max_workers, static_cast<int>(jobs.size()));
  const unsigned hw = std::thread::hardware_concurrency();
  if (hw > 0) n_workers = std::min<int>(n_workers, static_cast<int>(hw));
  n_workers = std::max(1, n_workers);

  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace vsn
