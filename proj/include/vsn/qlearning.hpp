#pragma once
// Distributed tabular Q-learning over (destination, comm type, neighbour)
// keys.  Each node owns one table; the bootstrap term of an update reads the
// neighbour's own table, so value propagates hop by hop as hellos circulate.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "vsn/rng.hpp"
#include "vsn/types.hpp"

namespace vsn {

struct WorldState;

struct QKey {
  NodeId destination = kInvalidNode;
  CommType comm = CommType::V2V;
  NodeId neighbor = kInvalidNode;
  auto operator<=>(const QKey&) const = default;
};

// An action the scheduler can take: forward to a neighbour over one comm type.
using Action = std::pair<NodeId, CommType>;

class QTable {
 public:
  QTable() = default;
  explicit QTable(NodeId owner) : owner_(owner) {}

  NodeId owner() const { return owner_; }

  // Absent keys read as 0.
  double get(const QKey& k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? 0.0 : it->second;
  }

  // One learning step:
  //   Q <- alpha * lq * (reward + beta * max_next) + (1 - alpha) * Q.
  // Returns the stored value.
  double q_update(const QKey& k, double lq, double reward, double max_next,
                  double alpha, double beta) {
    const double old = get(k);
    const double v = alpha * lq * (reward + beta * max_next) + (1.0 - alpha) * old;
    entries_[k] = v;
    return v;
  }

  // Largest stored value among the given neighbour actions for a destination;
  // 0 when nothing is stored (or the list is empty).
  double max_over(NodeId destination, CommType comm,
                  const std::vector<NodeId>& nbrs) const {
    double best = 0.0;
    for (NodeId y : nbrs) {
      best = std::max(best, get({destination, comm, y}));
    }
    return best;
  }

  void touch(NodeId neighbor, std::int64_t tick_ms) {
    last_seen_[neighbor] = tick_ms;
  }

  // Drop every entry whose neighbour has not been seen within the horizon.
  // Returns the number of entries removed.
  int evict_stale(std::int64_t now_ms, std::int64_t horizon_ms);

  std::size_t size() const { return entries_.size(); }
  double max_value() const;
  const std::map<QKey, double>& entries() const { return entries_; }
  const std::map<NodeId, std::int64_t>& last_seen() const { return last_seen_; }

  // One line per key: "owner destination comm neighbor value".
  void dump(std::ostream& os) const;

 private:
  NodeId owner_ = kInvalidNode;
  std::map<QKey, double> entries_;
  std::map<NodeId, std::int64_t> last_seen_;
};

// Epsilon-greedy choice among candidate actions: with probability epsilon a
// uniform draw, otherwise the argmax of the stored values with ties broken
// by smaller node id, then comm-type order.  Throws on an empty candidate
// list.
Action select_action(const QTable& table, NodeId destination,
                     const std::vector<Action>& candidates, double epsilon,
                     Rng& rng);

// Greedy argmax (epsilon = 0) without consuming randomness.
Action greedy_action(const QTable& table, NodeId destination,
                     const std::vector<Action>& candidates);

struct TrainReport {
  int episodes_used = 0;
  double max_q = 0.0;
  bool converged = false;  // max_q crossed q_threshold within the budget
};

// Pre-train the world's tables toward the given destinations.  One episode:
// advance mobility by one hello period, exchange hellos, refresh every
// in-range (holder, neighbour) pair for every destination (updates are
// triggered by hello receipt), then walk one virtual packet per vehicle along
// epsilon-greedy hops, updating per hop.  Stops early once the largest stored
// Q-value exceeds q_threshold.
TrainReport train(WorldState& w, const std::vector<NodeId>& destinations,
                  int episodes_budget, double q_threshold);

// Largest bootstrap value a hop to `m` can promise for (destination, comm):
// the max over m's current neighbours of m's own table.
double neighbor_max_q(const WorldState& w, NodeId m, NodeId destination,
                      CommType comm);

}  // namespace vsn
