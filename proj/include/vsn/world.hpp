#pragma once
// The full mutable state of one simulation: population, link statistics,
// learning state and the per-subsystem random streams.

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <vector>

#include "vsn/config.hpp"
#include "vsn/mlp.hpp"
#include "vsn/mobility.hpp"
#include "vsn/privacy.hpp"
#include "vsn/qlearning.hpp"
#include "vsn/rng.hpp"
#include "vsn/types.hpp"

namespace vsn {

struct Vehicle {
  VehicleState state;
  NodeKind kind = NodeKind::Vehicle;  // Vehicle or EdgeVehicle
  bool malicious = false;
};

struct InfraNode {
  NodeId id = kInvalidNode;
  NodeKind kind = NodeKind::BaseStation;
  Eigen::Vector2d pos = Eigen::Vector2d::Zero();
};

// Per-subsystem random streams.  Zero-seeded placeholders until build_world
// derives the real children from the run seed.
struct RngSet {
  Rng mobility{0};
  Rng hello{0};
  Rng packets{0};
  Rng scheduler{0};
  Rng privacy_reward{0};
  Rng privacy_action{0};
  Rng net{0};
  Rng training{0};
};

struct WorldState {
  ScenarioConfig cfg;
  std::int64_t tick_ms = 0;
  std::vector<Vehicle> vehicles;          // ids 0 .. n_vehicles-1
  std::vector<InfraNode> infrastructure;  // ids n_vehicles .. total-1
  std::map<LinkKey, LinkStats> links;
  std::map<NodeId, QTable> q_tables;
  Perceptron net;
  AttackHistory attacks{{}};
  RngSet rng;
  long hello_serial = 0;  // next hello serial number, unique per run

  bool is_vehicle(NodeId id) const {
    return id >= 0 && id < static_cast<NodeId>(vehicles.size());
  }
  const Vehicle& vehicle(NodeId id) const { return vehicles.at(id); }
  Vehicle& vehicle(NodeId id) { return vehicles.at(id); }

  NodeKind node_kind(NodeId id) const;
  Eigen::Vector2d node_position(NodeId id) const;
  bool node_malicious(NodeId id) const {
    return is_vehicle(id) && vehicles[id].malicious;
  }
  // Antenna bandwidth of a node (infrastructure uses the configured value).
  double node_bandwidth(NodeId id) const;
  // CPU frequency of a node (infrastructure uses the configured maximum).
  double node_cpu_freq(NodeId id) const;

  // Link distance clamped to the configured floor.
  double clamped_distance(NodeId a, NodeId b) const;
};

// Build the initial world: vehicles at uniform positions with uniform
// headings, speeds in [v_min, v_max] and CPU frequencies in the configured
// range; edge and malicious designations drawn by seeded shuffles;
// infrastructure at uniform positions; one Q-table per node; seeded network
// weights.  The config must already be valid.
WorldState build_world(const ScenarioConfig& cfg);

}  // namespace vsn
