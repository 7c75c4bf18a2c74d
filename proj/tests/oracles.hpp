#pragma once
// Test-side oracles: independent re-derivations of what the library is
// supposed to compute, used to check it from the outside.
//
//   * ValueIteration — fixed-point solver for the hop-value recursion the
//     learner's updates contract toward, on a frozen (static) world.
//   * finite_difference_gradients — central differences through the scorer's
//     cost, weight by weight.
//   * hand_world — a world built from explicit positions, for geometric tests.
//   * small statistics helpers for the Monte Carlo checks.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "vsn/config.hpp"
#include "vsn/engine.hpp"
#include "vsn/mlp.hpp"
#include "vsn/mobility.hpp"
#include "vsn/qlearning.hpp"
#include "vsn/rng.hpp"
#include "vsn/types.hpp"
#include "vsn/world.hpp"

namespace oracle {

// Solves, by repeated sweeps to a sup-norm tolerance, the recursion that the
// table updates are a damped iteration of:
//
//   V(c, dn, m) = lq(c, m) * (R(c, dn, m) + beta * M)
//   M = max(0, max{ V(m, dn, y) : y in NB(m),
//                   link class of (m, y) == link class of (c, m) })
//
// Rewards, link classes and link qualities are read from the world itself;
// only the recursion and the argmax are independent of the learner.  The
// world must be frozen (static positions) for the fixed point to be the
// learner's limit.
class ValueIteration {
 public:
  ValueIteration(const vsn::WorldState& w, const std::vector<vsn::NodeId>& dests,
                 double tol) {
    beta_ = w.cfg.beta;
    const int total = w.cfg.total_nodes();
    nbrs_.resize(static_cast<std::size_t>(total));
    for (vsn::NodeId c = 0; c < total; ++c) {
      nbrs_[static_cast<std::size_t>(c)] = vsn::neighbors(w, c);
      for (vsn::NodeId m : nbrs_[static_cast<std::size_t>(c)]) {
        te_[{c, m}] = vsn::comm_type_for_hop(w, c, m);
        const auto it = w.links.find(vsn::LinkKey(c, m));
        lq_[{c, m}] = it == w.links.end() ? 0.0 : vsn::link_quality(it->second);
      }
    }
    for (vsn::NodeId dn : dests) {
      for (vsn::NodeId c = 0; c < total; ++c) {
        if (c == dn) continue;
        for (vsn::NodeId m : nbrs_[static_cast<std::size_t>(c)]) {
          vsn::Packet probe;
          probe.destination = dn;
          probe.visited = {c};
          r_[{c, dn, m}] = vsn::evaluate_candidate(w, c, probe, m).reward;
          v_[{c, dn, m}] = 0.0;
        }
      }
    }
    for (iterations_ = 1; iterations_ <= 100000; ++iterations_) {
      double delta = 0.0;
      for (auto& [key, val] : v_) {
        const auto& [c, dn, m] = key;
        const vsn::CommType te = te_.at({c, m});
        double best_next = 0.0;
        for (vsn::NodeId y : nbrs_[static_cast<std::size_t>(m)]) {
          if (te_.at({m, y}) != te) continue;  // value rides one link class
          const auto it = v_.find({m, dn, y});
          if (it == v_.end()) continue;  // the destination anchors at zero
          best_next = std::max(best_next, it->second);
        }
        const double next = lq_.at({c, m}) * (r_.at(key) + beta_ * best_next);
        delta = std::max(delta, std::fabs(next - val));
        val = next;
      }
      if (delta <= tol) return;
    }
    throw std::runtime_error("ValueIteration: no convergence");
  }

  double value(vsn::NodeId c, vsn::NodeId dn, vsn::NodeId m) const {
    return v_.at({c, dn, m});
  }

  int iterations() const { return iterations_; }

  // Argmax over the candidate hops of `c` toward `dn`, ties broken by the
  // smaller neighbour id (candidates carry one link class each, so no
  // second-level tie-break can trigger).
  vsn::Action best_action(vsn::NodeId c, vsn::NodeId dn) const {
    const auto& nbrs = nbrs_.at(static_cast<std::size_t>(c));
    if (nbrs.empty()) throw std::logic_error("best_action: no candidates");
    vsn::Action best{vsn::kInvalidNode, vsn::CommType::V2V};
    double best_v = 0.0;
    bool have = false;
    for (vsn::NodeId m : nbrs) {  // ascending id: ties keep the earlier one
      const double v = v_.at({c, dn, m});
      if (!have || v > best_v) {
        best = {m, te_.at({c, m})};
        best_v = v;
        have = true;
      }
    }
    return best;
  }

  const std::vector<vsn::NodeId>& neighbors_of(vsn::NodeId c) const {
    return nbrs_.at(static_cast<std::size_t>(c));
  }

 private:
  double beta_ = 0.0;
  int iterations_ = 0;
  std::vector<std::vector<vsn::NodeId>> nbrs_;
  std::map<std::pair<vsn::NodeId, vsn::NodeId>, vsn::CommType> te_;
  std::map<std::pair<vsn::NodeId, vsn::NodeId>, double> lq_;
  std::map<std::tuple<vsn::NodeId, vsn::NodeId, vsn::NodeId>, double> r_;
  std::map<std::tuple<vsn::NodeId, vsn::NodeId, vsn::NodeId>, double> v_;
};

// Central finite differences of the scorer cost with respect to every weight,
// probing through mutable_weights and restoring each entry afterwards.
inline std::vector<Eigen::MatrixXd> finite_difference_gradients(
    vsn::Perceptron& net, const std::vector<vsn::TrainingSample>& data,
    double step) {
  std::vector<Eigen::MatrixXd> out;
  auto& weights = net.mutable_weights();
  for (auto& w : weights) {
    Eigen::MatrixXd g(w.rows(), w.cols());
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        const double keep = w(r, c);
        w(r, c) = keep + step;
        const double hi = net.cost(data);
        w(r, c) = keep - step;
        const double lo = net.cost(data);
        w(r, c) = keep;
        g(r, c) = (hi - lo) / (2.0 * step);
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

// A world with vehicles pinned at explicit positions (zero velocity) and
// optional infrastructure, bypassing the random placement of build_world.
// Population counts in the config are overwritten to match the arguments.
inline vsn::WorldState hand_world(
    vsn::ScenarioConfig cfg, const std::vector<Eigen::Vector2d>& vehicle_pos,
    const std::vector<std::pair<vsn::NodeKind, Eigen::Vector2d>>& infra = {}) {
  cfg.n_vehicles = static_cast<int>(vehicle_pos.size());
  cfg.n_base_stations = 0;
  cfg.n_rsus = 0;
  for (const auto& [kind, pos] : infra) {
    (void)pos;
    if (kind == vsn::NodeKind::BaseStation) {
      ++cfg.n_base_stations;
    } else {
      ++cfg.n_rsus;
    }
  }
  cfg.v_min_mps = 0.0;  // the vehicles here stand still

  vsn::WorldState w;
  w.cfg = cfg;
  const vsn::Rng root(cfg.seed);
  w.rng = vsn::RngSet{vsn::child(root, vsn::RngStream::MobilityInit),
                      vsn::child(root, vsn::RngStream::HelloLoss),
                      vsn::child(root, vsn::RngStream::PacketGen),
                      vsn::child(root, vsn::RngStream::Scheduler),
                      vsn::child(root, vsn::RngStream::PrivacyReward),
                      vsn::child(root, vsn::RngStream::PrivacyAction),
                      vsn::child(root, vsn::RngStream::NetInit),
                      vsn::child(root, vsn::RngStream::Training)};
  for (std::size_t i = 0; i < vehicle_pos.size(); ++i) {
    vsn::Vehicle v;
    v.state = vsn::make_vehicle(static_cast<vsn::NodeId>(i), vehicle_pos[i],
                                Eigen::Vector2d::Zero(), cfg.cpu_freq_min_hz,
                                cfg.bandwidth_hz, cfg.v_min_mps, cfg.v_max_mps);
    w.vehicles.push_back(std::move(v));
  }
  vsn::NodeId next_id = static_cast<vsn::NodeId>(vehicle_pos.size());
  for (const auto& [kind, pos] : infra) {
    w.infrastructure.push_back({next_id++, kind, pos});
  }
  for (vsn::NodeId id = 0; id < cfg.total_nodes(); ++id) {
    w.q_tables.emplace(id, vsn::QTable(id));
  }
  return w;
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline double sample_stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Three-sigma allowance of a Bernoulli(p) frequency estimate over n trials.
inline double bernoulli_3sigma(double p, long n) {
  return 3.0 * std::sqrt(std::max(p * (1.0 - p), 0.0) /
                         static_cast<double>(n));
}

}  // namespace oracle
