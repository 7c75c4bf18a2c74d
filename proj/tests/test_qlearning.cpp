#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "vsn/config.hpp"
#include "vsn/qlearning.hpp"
#include "vsn/rng.hpp"
#include "vsn/types.hpp"
#include "vsn/world.hpp"

using Eigen::Vector2d;
using vsn::Action;
using vsn::CommType;
using vsn::QKey;
using vsn::QTable;

TEST_CASE("one table update, worked values") {
  QTable t(0);
  const QKey k{5, CommType::V2V, 2};
  CHECK(t.get(k) == 0.0);  // absent reads as zero

  // alpha 0.5, full link quality, reward 1, no bootstrap: 0.5*1*(1+0) = 0.5.
  CHECK(t.q_update(k, 1.0, 1.0, 0.0, 0.5, 0.5) == doctest::Approx(0.5));
  CHECK(t.get(k) == doctest::Approx(0.5));

  // alpha 0 keeps the old value no matter what.
  CHECK(t.q_update(k, 1.0, 123.0, 456.0, 0.0, 0.5) == doctest::Approx(0.5));

  // alpha 1 with a dead link overwrites with zero.
  CHECK(t.q_update(k, 0.0, 123.0, 456.0, 1.0, 0.5) == 0.0);

  // Bootstrap enters scaled by beta: 0.5*1*(0 + 0.5*2) = 0.5.
  CHECK(t.q_update(k, 1.0, 0.0, 2.0, 0.5, 0.5) == doctest::Approx(0.5));
  CHECK(t.size() == 1);
}

TEST_CASE("max over neighbour actions defaults to zero") {
  QTable t(0);
  CHECK(t.max_over(7, CommType::V2V, {}) == 0.0);
  CHECK(t.max_over(7, CommType::V2V, {1, 2, 3}) == 0.0);
  t.q_update({7, CommType::V2V, 2}, 1.0, 0.8, 0.0, 1.0, 0.5);
  t.q_update({7, CommType::V2V, 3}, 1.0, 0.3, 0.0, 1.0, 0.5);
  t.q_update({7, CommType::V2I, 3}, 1.0, 0.9, 0.0, 1.0, 0.5);  // other class
  CHECK(t.max_over(7, CommType::V2V, {1, 2, 3}) == doctest::Approx(0.8));
  // Negative stored values never beat the zero floor.
  t.q_update({8, CommType::V2V, 1}, 1.0, -1.0, 0.0, 1.0, 0.5);
  CHECK(t.max_over(8, CommType::V2V, {1}) == 0.0);
  CHECK(t.max_value() == doctest::Approx(0.9));
}

TEST_CASE("stale neighbours are evicted with their entries") {
  QTable t(0);
  t.q_update({7, CommType::V2V, 1}, 1.0, 1.0, 0.0, 1.0, 0.5);
  t.q_update({7, CommType::V2V, 2}, 1.0, 1.0, 0.0, 1.0, 0.5);
  t.q_update({9, CommType::Cellular, 1}, 1.0, 1.0, 0.0, 1.0, 0.5);
  t.touch(1, 1000);
  t.touch(2, 5000);
  // Horizon 2000 at t=5000: neighbour 1 (last seen 1000) ages out.
  CHECK(t.evict_stale(5000, 2000) == 2);
  CHECK(t.size() == 1);
  CHECK(t.get({7, CommType::V2V, 2}) == doctest::Approx(1.0));
  CHECK(t.last_seen().count(1) == 0);
  // Nothing more to evict.
  CHECK(t.evict_stale(5000, 2000) == 0);
}

TEST_CASE("greedy selection breaks ties toward small ids, then class order") {
  QTable t(0);
  const std::vector<Action> cands = {{3, CommType::P80211},
                                     {1, CommType::V2V},
                                     {1, CommType::Cellular},
                                     {2, CommType::V2I}};
  // All zero: smallest id wins, then the earlier comm class.
  CHECK(vsn::greedy_action(t, 7, cands) == Action{1, CommType::V2V});
  t.q_update({7, CommType::Cellular, 1}, 1.0, 1.0, 0.0, 1.0, 0.5);
  CHECK(vsn::greedy_action(t, 7, cands) == Action{1, CommType::Cellular});
  t.q_update({7, CommType::P80211, 3}, 1.0, 2.0, 0.0, 1.0, 0.5);
  CHECK(vsn::greedy_action(t, 7, cands) == Action{3, CommType::P80211});
  CHECK_THROWS_AS(vsn::greedy_action(t, 7, {}), std::invalid_argument);
}

TEST_CASE("epsilon 0 always exploits, epsilon 1 explores uniformly") {
  QTable t(0);
  t.q_update({7, CommType::V2V, 2}, 1.0, 1.0, 0.0, 1.0, 0.5);
  const std::vector<Action> cands = {{1, CommType::V2V},
                                     {2, CommType::V2V},
                                     {3, CommType::V2V},
                                     {4, CommType::V2V}};
  vsn::Rng rng(123);
  for (int i = 0; i < 100; ++i) {
    CHECK(vsn::select_action(t, 7, cands, 0.0, rng) == Action{2, CommType::V2V});
  }
  std::map<vsn::NodeId, int> picks;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    picks[vsn::select_action(t, 7, cands, 1.0, rng).first]++;
  }
  for (const auto& c : cands) {
    const double freq = static_cast<double>(picks[c.first]) / trials;
    CHECK(std::fabs(freq - 0.25) < 0.01);
  }
  CHECK_THROWS_AS(vsn::select_action(t, 7, {}, 0.5, rng), std::invalid_argument);
}

TEST_CASE("bootstrap promise reads the neighbour's own table") {
  vsn::ScenarioConfig cfg;
  cfg.area_width_m = 10000.0;
  cfg.area_length_m = 10000.0;
  cfg.comm_range_m = 2000.0;
  auto w = oracle::hand_world(cfg, {Vector2d(0.0, 0.0), Vector2d(1000.0, 0.0),
                                    Vector2d(2000.0, 0.0)});
  // Give node 1 some value toward destination 2 over its neighbours {0, 2}.
  w.q_tables.at(1).q_update({2, CommType::V2V, 2}, 1.0, 0.9, 0.0, 1.0, 0.5);
  w.q_tables.at(1).q_update({2, CommType::P80211, 2}, 1.0, 0.4, 0.0, 1.0, 0.5);
  CHECK(vsn::neighbor_max_q(w, 1, 2, CommType::V2V) == doctest::Approx(0.9));
  CHECK(vsn::neighbor_max_q(w, 1, 2, CommType::P80211) == doctest::Approx(0.4));
  // No stored value in the asked class: zero.
  CHECK(vsn::neighbor_max_q(w, 1, 2, CommType::Cellular) == 0.0);
  // Entries for nodes out of m's current range do not count: node 0 of the
  // chain cannot see node 2 (distance 2000 is in range, so shrink the range).
  w.cfg.comm_range_m = 1500.0;
  w.q_tables.at(0).q_update({2, CommType::V2V, 2}, 1.0, 5.0, 0.0, 1.0, 0.5);
  CHECK(vsn::neighbor_max_q(w, 0, 2, CommType::V2V) == 0.0);
}

namespace {

// A five-node static line with an edge vehicle at the far end; spacing keeps
// only adjacent nodes in range, so value must propagate hop by hop.
vsn::WorldState line_world() {
  vsn::ScenarioConfig cfg;
  cfg.area_width_m = 8000.0;
  cfg.area_length_m = 1000.0;
  cfg.comm_range_m = 1000.0;
  cfg.interference_range_m = 500.0;
  cfg.p_obstacle = 0.0;
  cfg.p_malicious = 0.0;
  cfg.seed = 21;
  auto w = oracle::hand_world(
      cfg, {Vector2d(0.0, 0.0), Vector2d(800.0, 0.0), Vector2d(1600.0, 0.0),
            Vector2d(2400.0, 0.0), Vector2d(3200.0, 0.0)});
  w.vehicles[4].kind = vsn::NodeKind::EdgeVehicle;
  return w;
}

}  // namespace

TEST_CASE("training on a line matches the fixed-point solver") {
  auto w = line_world();
  std::vector<vsn::NodeId> everyone;
  for (int i = 0; i < w.cfg.total_nodes(); ++i) everyone.push_back(i);
  const auto report = vsn::train(w, everyone, 300, 1e9);
  CHECK(report.episodes_used == 300);
  CHECK_FALSE(report.converged);  // the threshold was unreachable
  CHECK(report.max_q > 0.0);

  oracle::ValueIteration vi(w, everyone, 1e-9);
  for (vsn::NodeId c = 0; c < w.cfg.total_nodes(); ++c) {
    for (vsn::NodeId dn : everyone) {
      if (dn == c) continue;
      const auto& nbrs = vi.neighbors_of(c);
      if (nbrs.empty()) continue;
      std::vector<Action> cands;
      for (vsn::NodeId m : nbrs) {
        cands.emplace_back(m, vsn::comm_type_for_hop(w, c, m));
      }
      const Action got = vsn::greedy_action(w.q_tables.at(c), dn, cands);
      const Action want = vi.best_action(c, dn);
      CAPTURE(c);
      CAPTURE(dn);
      CHECK(got == want);
    }
  }
}

TEST_CASE("a world with no rewarding hop learns nothing but still terminates") {
  // Plain vehicles only and intensive traffic: every reward is zero.
  vsn::ScenarioConfig cfg;
  cfg.area_width_m = 10000.0;
  cfg.area_length_m = 10000.0;
  cfg.comm_range_m = 2000.0;
  cfg.p_obstacle = 0.0;
  cfg.seed = 4;
  auto w = oracle::hand_world(cfg, {Vector2d(0.0, 0.0), Vector2d(500.0, 0.0),
                                    Vector2d(1000.0, 0.0)});
  const auto report = vsn::train(w, {0, 1, 2}, 50, 8.0);
  CHECK(report.episodes_used == 50);
  CHECK_FALSE(report.converged);
  CHECK(report.max_q == 0.0);
  for (const auto& [id, table] : w.q_tables) {
    CHECK(table.max_value() == 0.0);
  }
}

TEST_CASE("a lone vehicle has nobody to learn about") {
  vsn::ScenarioConfig cfg;
  cfg.area_width_m = 10000.0;
  cfg.area_length_m = 10000.0;
  cfg.seed = 4;
  auto w = oracle::hand_world(cfg, {Vector2d(0.0, 0.0)});
  const auto report = vsn::train(w, {0}, 10, 8.0);
  CHECK(report.max_q == 0.0);
  CHECK(w.q_tables.at(0).size() == 0);
}
