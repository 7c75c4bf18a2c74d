#include "vsn/mobility.hpp"

#include <stdexcept>

#include "vsn/world.hpp"

namespace vsn {

std::vector<NodeId> neighbors(const WorldState& w, NodeId id) {
  const int total = w.cfg.total_nodes();
  if (id < 0 || id >= total) {
    throw std::out_of_range("neighbors: unknown node id " + std::to_string(id));
  }
  const Eigen::Vector2d own = w.node_position(id);
  std::vector<NodeId> out;
  for (NodeId other = 0; other < total; ++other) {
    if (other == id) continue;
    const double d = torus_distance(own, w.node_position(other),
                                    w.cfg.area_width_m, w.cfg.area_length_m);
    if (d <= w.cfg.comm_range_m) out.push_back(other);
  }
  return out;
}

namespace {

// Obstruction probability of a directed hello/transmission a -> b; doubled
// (capped at 1) when the link is inside the interference range and a third
// node sits within that range of the receiver.
double effective_obstacle(const WorldState& w, NodeId a, NodeId b,
                          double distance) {
  double p = w.cfg.p_obstacle;
  if (p <= 0.0) return 0.0;
  if (distance <= w.cfg.interference_range_m) {
    const Eigen::Vector2d rx = w.node_position(b);
    const int total = w.cfg.total_nodes();
    for (NodeId c = 0; c < total; ++c) {
      if (c == a || c == b) continue;
      const double d = torus_distance(rx, w.node_position(c),
                                      w.cfg.area_width_m, w.cfg.area_length_m);
      if (d <= w.cfg.interference_range_m) {
        p = std::min(1.0, 2.0 * p);
        break;
      }
    }
  }
  return p;
}

}  // namespace

double link_obstacle_probability(const WorldState& w, NodeId a, NodeId b) {
  const double d = torus_distance(w.node_position(a), w.node_position(b),
                                  w.cfg.area_width_m, w.cfg.area_length_m);
  return effective_obstacle(w, a, b, d);
}

void exchange_hellos(WorldState& w) {
  const int total = w.cfg.total_nodes();
  // Per-pair tallies of this round, accumulated over both directions.
  std::map<LinkKey, std::pair<int, int>> round;  // key -> (sent, received)
  std::map<LinkKey, bool> blocked;

  for (NodeId sender = 0; sender < total; ++sender) {
    const Eigen::Vector2d pos = w.node_position(sender);
    for (NodeId receiver = 0; receiver < total; ++receiver) {
      if (receiver == sender) continue;
      const double d = torus_distance(pos, w.node_position(receiver),
                                      w.cfg.area_width_m, w.cfg.area_length_m);
      if (d > w.cfg.comm_range_m) continue;

      ++w.hello_serial;  // each hello carries a unique serial number
      const double p_obs = effective_obstacle(w, sender, receiver, d);
      const bool received = !w.rng.hello.bernoulli(p_obs);

      const LinkKey key(sender, receiver);
      auto& tally = round[key];
      ++tally.first;
      if (received) ++tally.second;
      if (!received) blocked[key] = true;

      if (w.is_vehicle(sender)) {
        auto& vs = w.vehicles[sender].state;
        ++vs.hello_sent;
        ++vs.hello_sent_to[receiver];
      }
      if (received && w.is_vehicle(receiver)) {
        ++w.vehicles[receiver].state.hello_received_from[sender];
      }
      if (received) {
        // Hello receipt is what keeps a neighbour alive in the receiver's
        // Q-table eviction clock.
        auto it = w.q_tables.find(receiver);
        if (it != w.q_tables.end()) it->second.touch(sender, w.tick_ms);
      }

      auto& stats = w.links[key];
      stats.pair = key;
      stats.last_distance_m = d;
    }
  }

  for (auto& [key, tally] : round) {
    auto& stats = w.links[key];
    stats.push_round(tally.first, tally.second);
    stats.last_round_blocked = blocked.count(key) > 0;
    stats.last_round_tick = w.tick_ms;
  }
}

}  // namespace vsn
