#include "vsn/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vsn {

NodeKind WorldState::node_kind(NodeId id) const {
  if (is_vehicle(id)) return vehicles[static_cast<std::size_t>(id)].kind;
  const std::size_t idx = static_cast<std::size_t>(id) - vehicles.size();
  if (idx < infrastructure.size()) return infrastructure[idx].kind;
  throw std::out_of_range("node_kind: unknown node id " + std::to_string(id));
}

Eigen::Vector2d WorldState::node_position(NodeId id) const {
  if (is_vehicle(id)) return vehicles[static_cast<std::size_t>(id)].state.pos;
  const std::size_t idx = static_cast<std::size_t>(id) - vehicles.size();
  if (idx < infrastructure.size()) return infrastructure[idx].pos;
  throw std::out_of_range("node_position: unknown node id " + std::to_string(id));
}

double WorldState::node_bandwidth(NodeId id) const {
  if (is_vehicle(id)) {
    return vehicles[static_cast<std::size_t>(id)].state.antenna_bandwidth;
  }
  return cfg.bandwidth_hz;
}

double WorldState::node_cpu_freq(NodeId id) const {
  if (is_vehicle(id)) return vehicles[static_cast<std::size_t>(id)].state.cpu_freq_hz;
  return cfg.cpu_freq_max_hz;
}

double WorldState::clamped_distance(NodeId a, NodeId b) const {
  const double d = torus_distance(node_position(a), node_position(b),
                                  cfg.area_width_m, cfg.area_length_m);
  return std::max(d, cfg.d_min_m);
}

WorldState build_world(const ScenarioConfig& cfg) {
  {
    auto violations = cfg.validate();
    if (!violations.empty()) throw violations.front();
  }

  WorldState w;
  w.cfg = cfg;
  const Rng root(cfg.seed);
  w.rng = RngSet{child(root, RngStream::MobilityInit),
                 child(root, RngStream::HelloLoss),
                 child(root, RngStream::PacketGen),
                 child(root, RngStream::Scheduler),
                 child(root, RngStream::PrivacyReward),
                 child(root, RngStream::PrivacyAction),
                 child(root, RngStream::NetInit),
                 child(root, RngStream::Training)};

  // Vehicles: uniform positions, uniform headings, speeds and CPU
  // frequencies from the configured ranges.
  Rng& mob = w.rng.mobility;
  for (int i = 0; i < cfg.n_vehicles; ++i) {
    const Eigen::Vector2d pos(mob.uniform(0.0, cfg.area_width_m),
                              mob.uniform(0.0, cfg.area_length_m));
    const double heading = mob.uniform(0.0, 2.0 * std::numbers::pi);
    const double speed = mob.uniform(cfg.v_min_mps, cfg.v_max_mps);
    const Eigen::Vector2d vel(speed * std::cos(heading),
                              speed * std::sin(heading));
    const double f = mob.uniform(cfg.cpu_freq_min_hz, cfg.cpu_freq_max_hz);
    Vehicle v;
    v.state = make_vehicle(i, pos, vel, f, cfg.bandwidth_hz, cfg.v_min_mps,
                           cfg.v_max_mps);
    w.vehicles.push_back(std::move(v));
  }

  // Edge and malicious designations by independent seeded shuffles.
  std::vector<NodeId> ids(static_cast<std::size_t>(cfg.n_vehicles));
  for (int i = 0; i < cfg.n_vehicles; ++i) ids[static_cast<std::size_t>(i)] = i;
  {
    std::vector<NodeId> pool = ids;
    mob.shuffle(pool);
    for (int i = 0; i < cfg.n_edge(); ++i) {
      w.vehicles[static_cast<std::size_t>(pool[static_cast<std::size_t>(i)])]
          .kind = NodeKind::EdgeVehicle;
    }
  }
  std::vector<NodeId> malicious_ids;
  {
    std::vector<NodeId> pool = ids;
    mob.shuffle(pool);
    for (int i = 0; i < cfg.n_malicious(); ++i) {
      const NodeId id = pool[static_cast<std::size_t>(i)];
      w.vehicles[static_cast<std::size_t>(id)].malicious = true;
      malicious_ids.push_back(id);
    }
    std::sort(malicious_ids.begin(), malicious_ids.end());
  }
  w.attacks = AttackHistory(malicious_ids);

  // Infrastructure: base stations first, then roadside units.
  NodeId next_id = cfg.n_vehicles;
  for (int i = 0; i < cfg.n_base_stations; ++i) {
    w.infrastructure.push_back(
        {next_id++, NodeKind::BaseStation,
         Eigen::Vector2d(mob.uniform(0.0, cfg.area_width_m),
                         mob.uniform(0.0, cfg.area_length_m))});
  }
  for (int i = 0; i < cfg.n_rsus; ++i) {
    w.infrastructure.push_back(
        {next_id++, NodeKind::Rsu,
         Eigen::Vector2d(mob.uniform(0.0, cfg.area_width_m),
                         mob.uniform(0.0, cfg.area_length_m))});
  }

  for (NodeId id = 0; id < cfg.total_nodes(); ++id) {
    w.q_tables.emplace(id, QTable(id));
  }
  w.net = Perceptron::seeded(cfg.hidden_width, w.rng.net);
  return w;
}

}  // namespace vsn
