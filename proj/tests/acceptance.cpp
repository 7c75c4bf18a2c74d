// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Every tolerance is pinned here as a constant next to the check
// that uses it.  The checks exercise the library end to end: activation
// bounds, learning-value bounds, policy-against-fixed-point equivalence,
// gradient correctness, the privacy channels' guarantees, formula identities,
// rate sanity, bit-level determinism, and two directional claims about whole
// runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vsn/config.hpp"
#include "vsn/csv.hpp"
#include "vsn/engine.hpp"
#include "vsn/metrics.hpp"
#include "vsn/mlp.hpp"
#include "vsn/mobility.hpp"
#include "vsn/privacy.hpp"
#include "vsn/qlearning.hpp"
#include "vsn/reward.hpp"
#include "vsn/rng.hpp"
#include "vsn/types.hpp"
#include "vsn/world.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using Eigen::Vector2d;
using Eigen::Vector3d;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string default_config_path() {
  return std::string(VSN_SOURCE_DIR) + "/configs/default.cfg";
}

// ---------------------------------------------------------------------------
// 1. The activation's range is exactly [1/(1+e), e/(1+e)].

Outcome check_activation_range() {
  constexpr double kTol = 1e-12;
  constexpr long kSamples = 1000000;
  constexpr double kBudgetMs = 1000.0;
  const auto t0 = Clock::now();

  const double lo = 1.0 / (1.0 + std::exp(1.0));
  const double hi = std::exp(1.0) / (1.0 + std::exp(1.0));
  vsn::Rng rng(1001);
  double seen_lo = 1.0;
  double seen_hi = 0.0;
  for (long i = 0; i < kSamples; ++i) {
    const double x = rng.uniform(-1.0e6, 1.0e6);
    const double g = vsn::activation(x);
    if (g < lo - kTol || g > hi + kTol) {
      return {false, "value outside the closed range at x=" +
                         std::to_string(x)};
    }
    seen_lo = std::min(seen_lo, g);
    seen_hi = std::max(seen_hi, g);
  }
  // The bounds are attained (suprema reached at the sine's extremes).
  const double at_peak = vsn::activation(M_PI_2);
  const double at_trough = vsn::activation(-M_PI_2);
  if (std::fabs(at_peak - hi) > kTol || std::fabs(at_trough - lo) > kTol) {
    return {false, "extremes not attained at +-pi/2"};
  }
  const double elapsed = ms_since(t0);
  if (elapsed > kBudgetMs) {
    return {false, "took " + std::to_string(elapsed) + " ms (budget 1000)"};
  }
  std::ostringstream ss;
  ss << "range [" << lo << ", " << hi << "] held over " << kSamples
     << " samples, observed [" << seen_lo << ", " << seen_hi << "], "
     << static_cast<int>(elapsed) << " ms";
  return {true, ss.str()};
}

// ---------------------------------------------------------------------------
// 2. With rewards <= 1, link quality <= 1 and discount 0.5, no stored value
//    can ever exceed 2 (the geometric bound 1 / (1 - 0.5)).

Outcome check_value_bound() {
  constexpr double kBound = 2.0 + 1e-12;
  constexpr int kSequences = 10000;
  constexpr double kBeta = 0.5;
  vsn::Rng rng(2002);
  double worst = 0.0;
  for (int s = 0; s < kSequences; ++s) {
    vsn::QTable table(0);
    const int updates = 1 + static_cast<int>(rng.uniform_int(100));
    for (int u = 0; u < updates; ++u) {
      const vsn::QKey k{static_cast<vsn::NodeId>(rng.uniform_int(3)),
                        static_cast<vsn::CommType>(rng.uniform_int(4)),
                        static_cast<vsn::NodeId>(rng.uniform_int(4))};
      const double alpha = rng.uniform(0.001, 1.0);
      const double lq = rng.uniform01();
      const double reward = rng.uniform01();
      // The bootstrap a real update uses is some table's current best value,
      // which this bound must dominate inductively.
      const double boot = table.max_value();
      const double v = table.q_update(k, lq, reward, boot, alpha, kBeta);
      worst = std::max(worst, v);
      if (v > kBound) {
        std::ostringstream ss;
        ss << "value " << v << " exceeded 2 in sequence " << s;
        return {false, ss.str()};
      }
    }
  }
  std::ostringstream ss;
  ss << kSequences << " random update sequences stayed <= 2 (max seen "
     << worst << ")";
  return {true, ss.str()};
}

// ---------------------------------------------------------------------------
// 3. On every frozen small instance, the greedy post-training policy equals
//    the argmax of an independent fixed-point solver.

struct CorpusSpec {
  int n_vehicles = 0;
  int n_base_stations = 0;
  int n_rsus = 0;
  int n_edge = 0;  // trailing vehicles marked as edge nodes
  std::uint64_t seed = 0;
};

vsn::WorldState corpus_world(const CorpusSpec& spec) {
  vsn::ScenarioConfig cfg;
  cfg.area_width_m = 1500.0;
  cfg.area_length_m = 1500.0;
  cfg.comm_range_m = 2000.0;  // everything in range of everything
  cfg.interference_range_m = 1000.0;
  cfg.p_obstacle = 0.0;
  cfg.p_malicious = 0.0;
  cfg.seed = spec.seed;
  vsn::Rng place(spec.seed * 7919 + 13);
  std::vector<Vector2d> pos;
  for (int i = 0; i < spec.n_vehicles; ++i) {
    pos.emplace_back(place.uniform(0.0, 1500.0), place.uniform(0.0, 1500.0));
  }
  std::vector<std::pair<vsn::NodeKind, Vector2d>> infra;
  for (int i = 0; i < spec.n_base_stations; ++i) {
    infra.emplace_back(vsn::NodeKind::BaseStation,
                       Vector2d(place.uniform(0.0, 1500.0),
                                place.uniform(0.0, 1500.0)));
  }
  for (int i = 0; i < spec.n_rsus; ++i) {
    infra.emplace_back(vsn::NodeKind::Rsu,
                       Vector2d(place.uniform(0.0, 1500.0),
                                place.uniform(0.0, 1500.0)));
  }
  auto w = oracle::hand_world(cfg, pos, infra);
  for (int i = 0; i < spec.n_edge && i < spec.n_vehicles; ++i) {
    w.vehicles[static_cast<std::size_t>(spec.n_vehicles - 1 - i)].kind =
        vsn::NodeKind::EdgeVehicle;
  }
  return w;
}

Outcome check_policy_against_fixed_point() {
  constexpr double kViTol = 1e-9;
  constexpr double kBudgetMs = 10000.0;
  constexpr int kEpisodes = 300;
  const auto t0 = Clock::now();

  const std::vector<CorpusSpec> corpus = {
      {4, 1, 1, 2, 7}, {5, 1, 0, 1, 3}, {6, 0, 0, 2, 5},
      {3, 2, 1, 1, 9}, {2, 1, 0, 1, 1}, {4, 0, 2, 1, 11},
  };
  long states = 0;
  for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
    auto w = corpus_world(corpus[idx]);
    std::vector<vsn::NodeId> everyone;
    for (int i = 0; i < w.cfg.total_nodes(); ++i) everyone.push_back(i);
    vsn::train(w, everyone, kEpisodes, 1e9);
    oracle::ValueIteration vi(w, everyone, kViTol);
    for (vsn::NodeId c = 0; c < w.cfg.total_nodes(); ++c) {
      const auto& nbrs = vi.neighbors_of(c);
      if (nbrs.empty()) continue;
      std::vector<vsn::Action> cands;
      for (vsn::NodeId m : nbrs) {
        cands.emplace_back(m, vsn::comm_type_for_hop(w, c, m));
      }
      for (vsn::NodeId dn : everyone) {
        if (dn == c) continue;
        const vsn::Action got = vsn::greedy_action(w.q_tables.at(c), dn, cands);
        const vsn::Action want = vi.best_action(c, dn);
        ++states;
        if (got != want) {
          std::ostringstream ss;
          ss << "instance " << idx << ": holder " << c << " toward " << dn
             << " picked " << got.first << " but the fixed point says "
             << want.first;
          return {false, ss.str()};
        }
      }
    }
  }
  const double elapsed = ms_since(t0);
  if (elapsed > kBudgetMs) {
    return {false, "took " + std::to_string(elapsed) + " ms (budget 10000)"};
  }
  std::ostringstream ss;
  ss << corpus.size() << " instances, " << states
     << " (holder, destination) states agree, " << static_cast<int>(elapsed)
     << " ms";
  return {true, ss.str()};
}

// ---------------------------------------------------------------------------
// 4. Analytic gradients match central finite differences.

Outcome check_gradients() {
  constexpr double kStep = 1e-5;
  constexpr double kRelTol = 1e-5;
  constexpr double kFloor = 1e-3;  // relative error floor for tiny entries
  constexpr int kPairs = 100;
  constexpr double kBudgetMs = 30000.0;
  const auto t0 = Clock::now();

  vsn::Rng rng(4004);
  double worst = 0.0;
  for (int p = 0; p < kPairs; ++p) {
    const int width = 2 + static_cast<int>(rng.uniform_int(5));  // 2..6
    auto net = vsn::Perceptron::seeded(width, rng);
    const int n = 1 + static_cast<int>(rng.uniform_int(8));  // 1..8 samples
    std::vector<vsn::TrainingSample> data;
    for (int i = 0; i < n; ++i) {
      data.push_back({Vector3d(rng.uniform01(), rng.uniform01(),
                               rng.uniform01()),
                      rng.bernoulli(0.5) ? 1.0 : 0.0});
    }
    const auto analytic = net.gradients(data);
    const auto numeric = oracle::finite_difference_gradients(net, data, kStep);
    for (std::size_t l = 0; l < analytic.size(); ++l) {
      for (Eigen::Index r = 0; r < analytic[l].rows(); ++r) {
        for (Eigen::Index c = 0; c < analytic[l].cols(); ++c) {
          const double a = analytic[l](r, c);
          const double f = numeric[l](r, c);
          const double rel =
              std::fabs(a - f) / std::max({kFloor, std::fabs(a), std::fabs(f)});
          worst = std::max(worst, rel);
          if (rel > kRelTol) {
            std::ostringstream ss;
            ss << "pair " << p << " layer " << l << " entry (" << r << ","
               << c << "): analytic " << a << " vs numeric " << f;
            return {false, ss.str()};
          }
        }
      }
    }
  }
  const double elapsed = ms_since(t0);
  if (elapsed > kBudgetMs) {
    return {false, "took " + std::to_string(elapsed) + " ms (budget 30000)"};
  }
  std::ostringstream ss;
  ss << kPairs << " (network, batch) pairs, worst relative error " << worst
     << ", " << static_cast<int>(elapsed) << " ms";
  return {true, ss.str()};
}

// ---------------------------------------------------------------------------
// 5. The binary response channel meets its stated budget, and the flip rate
//    at budget ln 3 is exactly a quarter.

Outcome check_privacy_budget() {
  constexpr int kTrials = 100000;
  constexpr double kRateTol = 0.005;
  vsn::Rng rng(5005);
  for (const double eta : {0.5, 1.0, std::log(3.0), 2.0}) {
    const double p = 1.0 / (1.0 + std::exp(eta));
    const auto report = vsn::verify_dp(eta, p, 2, kTrials, rng);
    if (!report.passed) {
      std::ostringstream ss;
      ss << "budget " << eta << ": worst log-ratio " << report.max_log_ratio
         << " > " << eta << " + " << report.margin;
      return {false, ss.str()};
    }
  }
  // Flip rate at eta = ln 3 under a loose cap.
  const double eta = std::log(3.0);
  long flips = 0;
  for (int i = 0; i < kTrials; ++i) {
    if (vsn::perturb_action(0, 4, eta, 1.0, 4.0, rng).flipped) ++flips;
  }
  const double rate = static_cast<double>(flips) / kTrials;
  if (std::fabs(rate - 0.25) > kRateTol) {
    std::ostringstream ss;
    ss << "flip rate " << rate << " differs from 0.25 by more than "
       << kRateTol;
    return {false, ss.str()};
  }
  std::ostringstream ss;
  ss << "budgets {0.5, 1, ln 3, 2} verified at " << kTrials
     << " trials; flip rate " << rate;
  return {true, ss.str()};
}

// ---------------------------------------------------------------------------
// 6. The empirical flip rate never exceeds the entropy cap (lambda + H) / 4
//    plus three sigma.

Outcome check_flip_cap() {
  constexpr int kPairs = 50;
  constexpr int kTrials = 100000;
  vsn::Rng rng(6006);
  for (int i = 0; i < kPairs; ++i) {
    const double lambda = rng.uniform(0.0, 1.0);
    const double h = rng.uniform(0.0, 2.0);
    const double eta = rng.uniform(0.5, 2.0);
    const double cap = (lambda + h) / 4.0;
    const auto fd = vsn::flip_probability(eta, lambda, h);
    if (fd.disabled) {
      if (cap > 1e-15) return {false, "channel disabled below a positive cap"};
      continue;  // nothing can flip; the bound holds trivially
    }
    long flips = 0;
    for (int t = 0; t < kTrials; ++t) {
      if (vsn::perturb_action(1, 4, eta, lambda, h, rng).flipped) ++flips;
    }
    const double rate = static_cast<double>(flips) / kTrials;
    const double sigma =
        std::sqrt(std::max(fd.p_flip * (1.0 - fd.p_flip), 0.0) / kTrials);
    if (rate > cap + 3.0 * sigma) {
      std::ostringstream ss;
      ss << "pair " << i << ": rate " << rate << " > cap " << cap
         << " + 3*sigma " << 3.0 * sigma;
      return {false, ss.str()};
    }
  }
  std::ostringstream ss;
  ss << kPairs << " (lambda, entropy) pairs at " << kTrials
     << " trials each stayed under the cap";
  return {true, ss.str()};
}

// ---------------------------------------------------------------------------
// 7. Formula identities: the edge-forwarding reward IS the local data amount,
//    and the two-power-model energy quotient reduces to B/(d*k1) at unit
//    frequency and drops below 1 whenever d > B/k1.

Outcome check_identities() {
  constexpr double kExact = 1e-12;
  constexpr int kDraws = 1000;
  vsn::Rng rng(7007);
  for (int i = 0; i < kDraws; ++i) {
    const double d_local = rng.uniform(0.0, 5.0);
    if (vsn::reward_v2v(d_local, vsn::NodeKind::EdgeVehicle) != d_local) {
      return {false, "edge-forwarding reward is not the identity"};
    }
  }
  for (int i = 0; i < kDraws; ++i) {
    vsn::EnergyModel m;
    m.bandwidth = rng.uniform(0.5, 10.0);
    m.cpu_freq_hz = 1.0;  // the quotient reduces exactly at unit frequency
    m.dt_s = rng.uniform(0.1, 5.0);
    m.distance_m = rng.uniform(0.5, 20.0);
    const double k1 = rng.uniform(0.1, 5.0);
    const double quotient = vsn::local_power_energy(m).energy_j /
                            vsn::cubic_model_energy(k1, m.cpu_freq_hz, m.dt_s);
    const double stated =
        vsn::quadratic_vs_cubic_energy_ratio(m.bandwidth, m.distance_m, k1);
    if (std::fabs(quotient - stated) > kExact * std::max(1.0, stated)) {
      std::ostringstream ss;
      ss << "quotient " << quotient << " vs stated " << stated;
      return {false, ss.str()};
    }
    // Beyond the break-even distance the quadratic model wins.
    const double d_far = m.bandwidth / k1 * rng.uniform(1.001, 10.0);
    if (vsn::quadratic_vs_cubic_energy_ratio(m.bandwidth, d_far, k1) >= 1.0) {
      return {false, "ratio not below 1 beyond the break-even distance"};
    }
  }
  std::ostringstream ss;
  ss << kDraws << " draws: identity exact, quotient matches to 1e-12 at unit "
        "frequency, ratio < 1 past break-even";
  return {true, ss.str()};
}

// ---------------------------------------------------------------------------
// 8. Rate sanity: unit signal-to-noise gives exactly the bandwidth, and the
//    rate is strictly decreasing in distance.

Outcome check_rate_sanity() {
  constexpr int kDraws = 1000;
  vsn::Rng rng(8008);
  for (int i = 0; i < kDraws; ++i) {
    const double b = rng.uniform(1.0, 1e8);
    const double theta = rng.uniform(1.0, 4.0);
    // d = 1 with unit power, fading and noise puts the SNR at exactly 1.
    if (vsn::v2i_rate(b, 1.0, 1.0, 1.0, 1.0, theta) != b) {
      return {false, "unit-SNR rate is not exactly the bandwidth"};
    }
    const double d1 = rng.uniform(1.0, 2000.0);
    const double d2 = d1 * rng.uniform(1.001, 3.0);
    const double r1 = vsn::v2i_rate(b, 0.1, 1.0, 1e-10, d1, theta);
    const double r2 = vsn::v2i_rate(b, 0.1, 1.0, 1e-10, d2, theta);
    if (!(r2 < r1)) {
      std::ostringstream ss;
      ss << "rate not strictly decreasing: r(" << d1 << ")=" << r1 << ", r("
         << d2 << ")=" << r2;
      return {false, ss.str()};
    }
  }
  std::ostringstream ss;
  ss << kDraws << " draws: exact bandwidth at unit SNR, strictly decreasing "
        "in distance";
  return {true, ss.str()};
}

// ---------------------------------------------------------------------------
// 9. Two identically seeded full runs leave byte-identical CSV files.

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome check_determinism() {
  constexpr double kPerRunBudgetMs = 60000.0;
  vsn::ScenarioConfig cfg = vsn::load_config_file(default_config_path());
  cfg.seed = 42;

  const fs::path base = fs::temp_directory_path() / "vsn_acceptance_det";
  fs::remove_all(base);
  const fs::path dir_a = base / "a";
  const fs::path dir_b = base / "b";
  fs::create_directories(dir_a);
  fs::create_directories(dir_b);

  double run_ms[2] = {0.0, 0.0};
  for (int r = 0; r < 2; ++r) {
    const fs::path& dir = r == 0 ? dir_a : dir_b;
    const auto t0 = Clock::now();
    const auto result = vsn::run(cfg, vsn::SchedulerKind::Dsql);
    run_ms[r] = ms_since(t0);
    if (run_ms[r] > kPerRunBudgetMs) {
      std::ostringstream ss;
      ss << "run " << r << " took " << run_ms[r] << " ms (budget 60000)";
      return {false, ss.str()};
    }
    vsn::write_decisions_csv((dir / "decisions.csv").string(), result.trace);
    vsn::write_packets_csv((dir / "packets.csv").string(), result.trace);
    vsn::write_summary_csv((dir / "summary.csv").string(), "dsql", cfg.seed,
                           result.metrics);
  }
  for (const char* name : {"decisions.csv", "packets.csv", "summary.csv"}) {
    if (slurp(dir_a / name) != slurp(dir_b / name)) {
      return {false, std::string(name) + " differs between identical runs"};
    }
  }
  fs::remove_all(base);
  std::ostringstream ss;
  ss << "two seed-42 runs byte-identical across 3 files ("
     << static_cast<int>(run_ms[0]) << " / " << static_cast<int>(run_ms[1])
     << " ms)";
  return {true, ss.str()};
}

// ---------------------------------------------------------------------------
// 10. Against the random baseline over five seeds, the learned scheduler
//     delivers no later on average and is at least 0.15 more accurate.

Outcome check_ordering() {
  constexpr double kAccuracyGap = 0.15;
  const vsn::ScenarioConfig base = vsn::load_config_file(default_config_path());

  std::vector<double> acc_dsql, acc_rand, delay_dsql, delay_rand;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    vsn::ScenarioConfig cfg = base;
    cfg.seed = seed;
    const auto d = vsn::run(cfg, vsn::SchedulerKind::Dsql);
    const auto r = vsn::run(cfg, vsn::SchedulerKind::Random);
    if (!d.metrics.accuracy || !r.metrics.accuracy ||
        !d.metrics.transmission_delay_ms || !r.metrics.transmission_delay_ms) {
      return {false, "a run left accuracy or delay unmeasured at seed " +
                         std::to_string(seed)};
    }
    acc_dsql.push_back(*d.metrics.accuracy);
    acc_rand.push_back(*r.metrics.accuracy);
    delay_dsql.push_back(*d.metrics.transmission_delay_ms);
    delay_rand.push_back(*r.metrics.transmission_delay_ms);
  }
  const double ad = oracle::mean(acc_dsql);
  const double ar = oracle::mean(acc_rand);
  const double dd = oracle::mean(delay_dsql);
  const double dr = oracle::mean(delay_rand);
  if (!(dd <= dr)) {
    std::ostringstream ss;
    ss << "mean delay " << dd << " ms vs random " << dr << " ms";
    return {false, ss.str()};
  }
  if (!(ad >= ar + kAccuracyGap)) {
    std::ostringstream ss;
    ss << "mean accuracy " << ad << " vs random " << ar
       << " (needs a gap of at least " << kAccuracyGap << ")";
    return {false, ss.str()};
  }
  std::ostringstream ss;
  ss << "5 seeds: accuracy " << ad << " vs " << ar << ", delay " << dd
     << " ms vs " << dr << " ms";
  return {true, ss.str()};
}

// ---------------------------------------------------------------------------
// 11. A larger privacy budget never measurably raises the leak rate: over
//     budgets {0.5, 1, 2} x 10 seeds, consecutive means are nonincreasing
//     within three sigma of the difference.

Outcome check_leak_vs_budget() {
  constexpr int kSeeds = 10;
  vsn::ScenarioConfig cfg = vsn::load_config_file(default_config_path());
  cfg.sim_duration_s = 30.0;   // shortened: 30 runs must stay tractable
  cfg.episodes_budget = 100;

  vsn::SweepSpec spec;
  spec.param = "eta_privacy";
  spec.values = {0.5, 1.0, 2.0};
  spec.n_seeds = kSeeds;
  spec.scheduler = vsn::SchedulerKind::Dsql;
  spec.max_workers = 4;

  const auto rows = vsn::run_sweep(cfg, spec);
  if (rows.size() != spec.values.size() * kSeeds) {
    return {false, "sweep returned " + std::to_string(rows.size()) + " rows"};
  }
  std::vector<std::vector<double>> leaks(spec.values.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].metrics.p_privacy_leakage) {
      return {false, "row " + std::to_string(i) + " has no leak measurement"};
    }
    leaks[i / kSeeds].push_back(*rows[i].metrics.p_privacy_leakage);
  }
  std::ostringstream detail;
  for (std::size_t v = 0; v + 1 < leaks.size(); ++v) {
    const double m_lo = oracle::mean(leaks[v]);
    const double m_hi = oracle::mean(leaks[v + 1]);
    const double s_lo = oracle::sample_stddev(leaks[v]);
    const double s_hi = oracle::sample_stddev(leaks[v + 1]);
    const double sigma_diff =
        std::sqrt(s_lo * s_lo / kSeeds + s_hi * s_hi / kSeeds);
    if (m_hi > m_lo + 3.0 * sigma_diff) {
      std::ostringstream ss;
      ss << "leak rose from " << m_lo << " (budget " << spec.values[v]
         << ") to " << m_hi << " (budget " << spec.values[v + 1]
         << "), above 3*sigma " << 3.0 * sigma_diff;
      return {false, ss.str()};
    }
    if (v > 0) detail << "; ";
    detail << spec.values[v] << "->" << spec.values[v + 1] << ": " << m_lo
           << " -> " << m_hi << " (3s " << 3.0 * sigma_diff << ")";
  }
  return {true, detail.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"activation range", check_activation_range},
      {"learned-value bound", check_value_bound},
      {"policy matches fixed point", check_policy_against_fixed_point},
      {"gradient check", check_gradients},
      {"privacy budget", check_privacy_budget},
      {"flip-rate cap", check_flip_cap},
      {"formula identities", check_identities},
      {"rate sanity", check_rate_sanity},
      {"bitwise determinism", check_determinism},
      {"ordering vs random baseline", check_ordering},
      {"leak rate vs budget", check_leak_vs_budget},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s — %s\n", out.ok ? "PASS" : "FAIL", c.name,
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.ok) ++failures;
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
