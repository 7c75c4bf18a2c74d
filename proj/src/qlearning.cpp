#include "vsn/qlearning.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "vsn/engine.hpp"
#include "vsn/mobility.hpp"
#include "vsn/world.hpp"

namespace vsn {

int QTable::evict_stale(std::int64_t now_ms, std::int64_t horizon_ms) {
  std::vector<NodeId> stale;
  for (const auto& [nbr, seen] : last_seen_) {
    if (now_ms - seen > horizon_ms) stale.push_back(nbr);
  }
  int removed = 0;
  for (NodeId nbr : stale) {
    for (auto it = entries_.begin(); it != entries_.end();) {
      if (it->first.neighbor == nbr) {
        it = entries_.erase(it);
        ++removed;
      } else {
        ++it;
      }
    }
    last_seen_.erase(nbr);
  }
  return removed;
}

double QTable::max_value() const {
  double best = 0.0;
  for (const auto& [k, v] : entries_) best = std::max(best, v);
  return best;
}

void QTable::dump(std::ostream& os) const {
  for (const auto& [k, v] : entries_) {
    os << owner_ << ' ' << k.destination << ' ' << to_string(k.comm) << ' '
       << k.neighbor << ' ' << v << '\n';
  }
}

Action greedy_action(const QTable& table, NodeId destination,
                     const std::vector<Action>& candidates) {
  if (candidates.empty()) {
    throw std::invalid_argument("greedy_action: empty candidate set");
  }
  const Action* best = &candidates.front();
  double best_q = table.get({destination, best->second, best->first});
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const Action& c = candidates[i];
    const double q = table.get({destination, c.second, c.first});
    const bool better =
        q > best_q ||
        (q == best_q &&
         (c.first < best->first ||
          (c.first == best->first &&
           static_cast<int>(c.second) < static_cast<int>(best->second))));
    if (better) {
      best = &c;
      best_q = q;
    }
  }
  return *best;
}

Action select_action(const QTable& table, NodeId destination,
                     const std::vector<Action>& candidates, double epsilon,
                     Rng& rng) {
  if (candidates.empty()) {
    throw std::invalid_argument("select_action: empty candidate set");
  }
  if (rng.uniform01() < epsilon) {
    return candidates[static_cast<std::size_t>(
        rng.uniform_int(candidates.size()))];
  }
  return greedy_action(table, destination, candidates);
}

double neighbor_max_q(const WorldState& w, NodeId m, NodeId destination,
                      CommType comm) {
  auto it = w.q_tables.find(m);
  if (it == w.q_tables.end()) return 0.0;
  return it->second.max_over(destination, comm, neighbors(w, m));
}

namespace {

// One hello-driven refresh: every in-range ordered pair (holder, neighbour)
// updates the holder's entry for each destination.  A node never books value
// for traffic destined to itself, which anchors the recursion at the
// destination.
void sweep_updates(WorldState& w, const std::vector<NodeId>& destinations) {
  const int total = w.cfg.total_nodes();
  for (NodeId c = 0; c < total; ++c) {
    const auto nbrs = neighbors(w, c);
    auto& table = w.q_tables.at(c);
    for (NodeId m : nbrs) {
      const CommType te = comm_type_for_hop(w, c, m);
      const LinkStats& ls = w.links[LinkKey(c, m)];
      const double lq = link_quality(ls);
      if (lq <= 0.0) continue;
      for (NodeId dn : destinations) {
        if (c == dn) continue;
        Packet probe;  // first-hop probe: no attenuation applied yet
        probe.destination = dn;
        probe.visited = {c};
        const CandidateEval ev = evaluate_candidate(w, c, probe, m);
        const double max_next = neighbor_max_q(w, m, dn, te);
        table.q_update({dn, te, m}, lq, ev.reward, max_next, w.cfg.alpha,
                       w.cfg.beta);
      }
    }
  }
}

double global_max_q(const WorldState& w) {
  double best = 0.0;
  for (const auto& [id, t] : w.q_tables) best = std::max(best, t.max_value());
  return best;
}

}  // namespace

TrainReport train(WorldState& w, const std::vector<NodeId>& destinations,
                  int episodes_budget, double q_threshold) {
  TrainReport report;
  if (destinations.empty()) return report;
  const int max_walk_hops = 8;

  for (int ep = 0; ep < episodes_budget; ++ep) {
    // Advance one hello period so link statistics are live during training.
    for (auto& v : w.vehicles) {
      step_mobility(v.state, w.cfg.hello_period_ms, w.cfg.area_width_m,
                    w.cfg.area_length_m);
    }
    w.tick_ms += static_cast<std::int64_t>(w.cfg.hello_period_ms);
    exchange_hellos(w);
    sweep_updates(w, destinations);

    // Walk one virtual packet per vehicle toward a cycling destination,
    // updating along the epsilon-greedy path.
    for (const auto& veh : w.vehicles) {
      const NodeId start = veh.state.id;
      const NodeId dn = destinations[static_cast<std::size_t>(
          (ep + start) % static_cast<int>(destinations.size()))];
      if (dn == start) continue;
      std::vector<NodeId> visited = {start};
      NodeId at = start;
      for (int hop = 0; hop < max_walk_hops; ++hop) {
        std::vector<Action> actions;
        for (NodeId m : neighbors(w, at)) {
          if (std::find(visited.begin(), visited.end(), m) != visited.end()) {
            continue;
          }
          actions.emplace_back(m, comm_type_for_hop(w, at, m));
        }
        if (actions.empty()) break;
        const Action a = select_action(w.q_tables.at(at), dn, actions,
                                       w.cfg.epsilon_explore, w.rng.training);
        const NodeId m = a.first;
        // Same canonical single-hop reward the sweep uses, so every update of
        // a key pulls toward one fixed point.
        Packet probe;
        probe.destination = dn;
        probe.visited = {at};
        const CandidateEval ev = evaluate_candidate(w, at, probe, m);
        const double lq = link_quality(w.links[LinkKey(at, m)]);
        const double max_next = neighbor_max_q(w, m, dn, a.second);
        w.q_tables.at(at).q_update({dn, a.second, m}, lq, ev.reward, max_next,
                                   w.cfg.alpha, w.cfg.beta);
        if (m == dn) break;
        visited.push_back(m);
        at = m;
      }
    }

    report.episodes_used = ep + 1;
    report.max_q = global_max_q(w);
    if (report.max_q > q_threshold) {
      report.converged = true;
      break;
    }
  }
  return report;
}

}  // namespace vsn
