#pragma once
// Shared identifiers and record types for the scheduling simulator.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vsn {

using NodeId = int;
inline constexpr NodeId kInvalidNode = -1;

enum class NodeKind { Vehicle, BaseStation, Rsu, EdgeVehicle };

// Order matters: it is the tie-break order for action selection.
enum class CommType { V2V, V2I, Cellular, P80211 };

enum class AppClass { TrafficIntensive, DelaySensitiveUnicast };

inline bool is_vehicle_kind(NodeKind k) {
  return k == NodeKind::Vehicle || k == NodeKind::EdgeVehicle;
}
inline bool is_infrastructure(NodeKind k) {
  return k == NodeKind::BaseStation || k == NodeKind::Rsu;
}

inline const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Vehicle: return "vehicle";
    case NodeKind::BaseStation: return "base_station";
    case NodeKind::Rsu: return "rsu";
    case NodeKind::EdgeVehicle: return "edge_vehicle";
  }
  return "?";
}

inline const char* to_string(CommType t) {
  switch (t) {
    case CommType::V2V: return "v2v";
    case CommType::V2I: return "v2i";
    case CommType::Cellular: return "cellular";
    case CommType::P80211: return "80211p";
  }
  return "?";
}

struct Packet {
  int id = 0;
  NodeId source = kInvalidNode;
  NodeId destination = kInvalidNode;
  double size_bytes = 0.0;
  AppClass app_class = AppClass::TrafficIntensive;
  std::int64_t created_at_ms = 0;
  // Lower-bound arrival estimate fixed at creation: created_at plus the
  // one-hop airtime at the source-to-destination distance.
  double expected_delivery_ms = 0.0;
  std::optional<std::int64_t> delivered_at_ms;
  std::vector<NodeId> visited;  // nodes that have held the packet, source first
  double energy_spent_j = 0.0;
  bool dropped_by_malicious = false;
};

}  // namespace vsn
