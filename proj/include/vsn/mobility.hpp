#pragma once
// Vehicle kinematics on a torus and hello-driven link statistics.
//
// Positions live on a wrap-around rectangle; distances use the minimum-image
// convention so that a vehicle crossing an edge never teleports out of range
// of its neighbours.  Headings and speeds are drawn once at spawn and never
// change (straight-line constant-velocity motion).

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "vsn/config.hpp"
#include "vsn/types.hpp"

namespace vsn {

struct WorldState;

struct VehicleState {
  NodeId id = kInvalidNode;
  Eigen::Vector2d pos = Eigen::Vector2d::Zero();
  Eigen::Vector2d vel = Eigen::Vector2d::Zero();
  double cpu_freq_hz = 0.0;
  double antenna_bandwidth = 0.0;
  // Monotone hello counters (diagnostics; the sliding window lives on the link).
  long hello_sent = 0;
  std::map<NodeId, long> hello_sent_to;
  std::map<NodeId, long> hello_received_from;
};

// Throws unless the speed lies in [v_min, v_max].
inline void validate_speed(const Eigen::Vector2d& vel, double v_min,
                           double v_max) {
  const double speed = vel.norm();
  if (speed < v_min) {
    throw std::invalid_argument("vehicle speed below v_min_mps");
  }
  if (speed > v_max) {
    throw std::invalid_argument("vehicle speed above v_max_mps");
  }
}

inline VehicleState make_vehicle(NodeId id, const Eigen::Vector2d& pos,
                                 const Eigen::Vector2d& vel, double cpu_freq_hz,
                                 double antenna_bandwidth, double v_min,
                                 double v_max) {
  validate_speed(vel, v_min, v_max);
  VehicleState v;
  v.id = id;
  v.pos = pos;
  v.vel = vel;
  v.cpu_freq_hz = cpu_freq_hz;
  v.antenna_bandwidth = antenna_bandwidth;
  return v;
}

// Component-wise wrap into [0, w) x [0, l).
inline Eigen::Vector2d wrap_position(Eigen::Vector2d p, double w, double l) {
  p.x() = std::fmod(p.x(), w);
  if (p.x() < 0.0) p.x() += w;
  p.y() = std::fmod(p.y(), l);
  if (p.y() < 0.0) p.y() += l;
  return p;
}

// Minimum-image separation vector from a to b.
inline Eigen::Vector2d torus_delta(const Eigen::Vector2d& a,
                                   const Eigen::Vector2d& b, double w,
                                   double l) {
  Eigen::Vector2d d = b - a;
  if (d.x() > 0.5 * w) d.x() -= w;
  if (d.x() < -0.5 * w) d.x() += w;
  if (d.y() > 0.5 * l) d.y() -= l;
  if (d.y() < -0.5 * l) d.y() += l;
  return d;
}

inline double torus_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                             double w, double l) {
  return torus_delta(a, b, w, l).norm();
}

// Advance one vehicle by dt; the velocity is untouched, the position wraps.
inline void step_mobility(VehicleState& v, double dt_ms, double area_w,
                          double area_l) {
  if (dt_ms < 0.0) throw std::invalid_argument("step_mobility: dt must be >= 0");
  v.pos = wrap_position(v.pos + v.vel * (dt_ms / 1000.0), area_w, area_l);
}

// Undirected link key with canonical ordering.
struct LinkKey {
  NodeId a = kInvalidNode;
  NodeId b = kInvalidNode;
  LinkKey() = default;
  LinkKey(NodeId x, NodeId y) : a(std::min(x, y)), b(std::max(x, y)) {}
  auto operator<=>(const LinkKey&) const = default;
};

// Hello bookkeeping for one undirected pair over a sliding window of
// kHrrWindowPeriods hello rounds.
struct LinkStats {
  LinkKey pair;
  double last_distance_m = 0.0;
  bool last_round_blocked = false;  // any obstructed hello in the latest round
  std::int64_t last_round_tick = -1;

  void push_round(int sent, int received) {
    head_ = (head_ + 1) % kHrrWindowPeriods;
    sent_[head_] = sent;
    recv_[head_] = received;
    if (rounds_ < kHrrWindowPeriods) ++rounds_;
  }

  // Received/sent over the window; 0 before any hello was exchanged.
  double hrr() const {
    long s = 0;
    long r = 0;
    for (int i = 0; i < rounds_; ++i) {
      s += sent_[i];
      r += recv_[i];
    }
    return s > 0 ? static_cast<double>(r) / static_cast<double>(s) : 0.0;
  }

  int rounds() const { return rounds_; }

 private:
  std::array<int, kHrrWindowPeriods> sent_{};
  std::array<int, kHrrWindowPeriods> recv_{};
  int head_ = kHrrWindowPeriods - 1;
  int rounds_ = 0;
};

// Link quality is the windowed hello reception ratio.
inline double link_quality(const LinkStats& s) { return s.hrr(); }

// Social connectivity of a pair: B_x * V_r * r_r / (V_s * r_s).
inline double connectivity_metric(double bx, double v_r, double r_r,
                                  double v_s, double r_s) {
  const double denom = v_s * r_s;
  if (denom == 0.0) {
    throw std::domain_error("connectivity_metric: sender speed*rate is zero");
  }
  return bx * v_r * r_r / denom;
}

// All nodes within comm range of `id` (vehicles and infrastructure), self
// excluded, sorted by id.  Throws std::out_of_range for an unknown id.
std::vector<NodeId> neighbors(const WorldState& w, NodeId id);

// One hello round: every node sends one serial-numbered hello to each
// neighbour; each directed hello is received with probability
// 1 - p_obstacle_effective, where the obstruction probability doubles
// (capped at 1) on links shorter than the interference range that have a
// third node inside that range around the receiver.  Updates counters and
// the per-link sliding windows.
void exchange_hellos(WorldState& w);

// Effective obstruction probability of a directed transmission a -> b under
// the interference-escalation rule above.
double link_obstacle_probability(const WorldState& w, NodeId a, NodeId b);

}  // namespace vsn
