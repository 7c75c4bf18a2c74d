#pragma once
// Reward, rate, power and energy formulas.  All functions here are pure; the
// engine assembles their inputs (clamping distances to d_min_m first) and the
// tests drive them directly.
//
// Conventions: the release-path rewards (cellular / 802.11p / appendix)
// consume dimensionless scalars: delays as configured ms numbers, link
// bandwidths as configured Mbit/s numbers, packet size as a byte count, the
// persistence time as seconds.  The physical-layer helpers (rate, power,
// energy) use SI units throughout.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vsn/types.hpp"

namespace vsn {

// Everything one reward evaluation needs, regardless of which release path
// ends up selected.
struct RewardInputs {
  NodeKind next_hop_kind = NodeKind::Vehicle;
  AppClass app_class = AppClass::TrafficIntensive;
  double red_bar = 0.0;        // infrastructure density reward, in [0, 1]
  double d_local = 0.0;        // local data amount of the forwarding node
  double pd_th = 0.0;          // delay requirement (ms number)
  double t_persistent_s = 0.0; // how long the vehicle has been in motion
  double cb = 0.0;             // cellular bandwidth (Mbit/s number)
  double pd_bs = 0.0;          // infrastructure processing delay (ms number)
  double ps_bytes = 0.0;       // packet size
  double cb_11p = 0.0;         // 802.11p bandwidth (Mbit/s number)
  double hrr = 0.0;            // hello reception ratio of the link, in [0, 1]
  double p_obstacle = 0.0;     // obstruction probability of the link
  double pd_11p = 0.0;         // 802.11p processing delay (ms number)
};

// Offloading toward a base station pays the station's density reward scaled
// by the sender's local data amount; any other hop kind pays nothing here.
inline double reward_v2i(double red_bar, double d_local,
                         NodeKind next_hop_kind) {
  if (red_bar < 0.0 || d_local < 0.0) {
    throw std::domain_error("reward_v2i: negative input");
  }
  return next_hop_kind == NodeKind::BaseStation ? red_bar * d_local : 0.0;
}

// Vehicle-to-vehicle forwarding pays the local data amount only when the next
// hop is an edge node.
inline double reward_v2v(double d_local, NodeKind next_hop_kind) {
  if (d_local < 0.0) throw std::domain_error("reward_v2v: negative input");
  return next_hop_kind == NodeKind::EdgeVehicle ? d_local : 0.0;
}

// Delay-sensitive reward over the cellular path, clamped to 1.
inline double reward_cellular(double pd_th, double d_local,
                              double t_persistent_s, double cb, double pd_bs) {
  const double denom = cb + pd_bs;
  if (!(denom > 0.0)) {
    throw std::domain_error("reward_cellular: cb + pd_bs must be > 0");
  }
  return std::min(1.0, (pd_th + d_local * t_persistent_s) / denom);
}

// Delay-sensitive reward over the 802.11p path, clamped to 1.  The link term
// ps/(cb*d_local*hrr) is weighted by the obstruction probability; when that
// probability is zero the link term vanishes and only the processing delay
// remains in the denominator.
inline double reward_80211p(double pd_th, double t_persistent_s, double ps,
                            double cb_11p, double d_local, double hrr,
                            double p_obstacle, double pd_11p) {
  double link = 0.0;
  if (p_obstacle > 0.0) {
    const double div = cb_11p * d_local * hrr;
    if (!(div > 0.0)) {
      throw std::domain_error(
          "reward_80211p: cb_11p * d_local * hrr must be > 0 when obstructed");
    }
    link = ps / div * p_obstacle;
  }
  const double denom = link + pd_11p;
  if (!(denom > 0.0)) {
    throw std::domain_error("reward_80211p: zero denominator");
  }
  return std::min(1.0, pd_th * t_persistent_s / denom);
}

// Dispatch by communication class, then by next-hop kind within the class:
// traffic-intensive data earns the data-amount rewards, delay-sensitive
// unicast earns the delay-budget rewards; a base-station hop uses the
// infrastructure variant, every other hop the distributed one.
inline double select_reward(const RewardInputs& in) {
  if (in.app_class == AppClass::TrafficIntensive) {
    if (in.next_hop_kind == NodeKind::BaseStation) {
      return reward_v2i(in.red_bar, in.d_local, in.next_hop_kind);
    }
    return reward_v2v(in.d_local, in.next_hop_kind);
  }
  if (in.next_hop_kind == NodeKind::BaseStation) {
    return reward_cellular(in.pd_th, in.d_local, in.t_persistent_s, in.cb,
                           in.pd_bs);
  }
  return reward_80211p(in.pd_th, in.t_persistent_s, in.ps_bytes, in.cb_11p,
                       in.d_local, in.hrr, in.p_obstacle, in.pd_11p);
}

// Inputs of the local processing model.  Distances must already be clamped
// to the configured floor by the caller.
struct EnergyModel {
  double bandwidth = 0.0;    // antenna bandwidth B
  double cpu_freq_hz = 0.0;  // local CPU frequency f
  double dt_s = 0.0;         // time window
  double distance_m = 0.0;   // link distance d (pre-clamped, > 0)
  double ad = 0.0;           // data density divisor
  double tx_power_w = 0.0;   // transmit power
  double k1 = 0.0;           // cubic-model constant (analysis only)
};

struct PowerEnergy {
  double power_w = 0.0;
  double energy_j = 0.0;
};

// Local processing power B*f^2/d and the energy it integrates to over dt.
inline PowerEnergy local_power_energy(const EnergyModel& m) {
  if (!(m.distance_m > 0.0)) {
    throw std::domain_error("local_power_energy: distance must be > 0");
  }
  if (m.bandwidth < 0.0 || m.cpu_freq_hz < 0.0 || m.dt_s < 0.0) {
    throw std::domain_error("local_power_energy: negative input");
  }
  PowerEnergy out;
  out.power_w = m.bandwidth * m.cpu_freq_hz * m.cpu_freq_hz / m.distance_m;
  out.energy_j = out.power_w * m.dt_s;
  return out;
}

// Local data amount f*dt/(d*ad) processed in the window.
inline double local_data_amount(const EnergyModel& m) {
  if (!(m.distance_m > 0.0) || !(m.ad > 0.0)) {
    throw std::domain_error("local_data_amount: distance and ad must be > 0");
  }
  if (m.cpu_freq_hz < 0.0 || m.dt_s < 0.0) {
    throw std::domain_error("local_data_amount: negative input");
  }
  return m.cpu_freq_hz * m.dt_s / (m.distance_m * m.ad);
}

// Shannon-style link rate B*log2(1 + p*|h|^2 / (w0 * d^theta)).
inline double v2i_rate(double bandwidth, double tx_power_w, double fading,
                       double noise_power_w, double distance_m,
                       double path_loss_exp) {
  if (!(bandwidth > 0.0) || !(noise_power_w > 0.0) || !(distance_m > 0.0)) {
    throw std::domain_error("v2i_rate: bandwidth, noise and distance must be > 0");
  }
  if (tx_power_w < 0.0 || fading < 0.0) {
    throw std::domain_error("v2i_rate: negative input");
  }
  const double snr =
      tx_power_w * fading / (noise_power_w * std::pow(distance_m, path_loss_exp));
  return bandwidth * std::log2(1.0 + snr);
}

// Transmission energy p*dt.
inline double tx_energy(double tx_power_w, double dt_s) {
  if (tx_power_w < 0.0 || dt_s < 0.0) {
    throw std::domain_error("tx_energy: negative input");
  }
  return tx_power_w * dt_s;
}

// Multi-user cellular offload reward: deadline over the summed up/down link
// times plus processing delay, clamped to 1.
inline double appendix_cellular_reward(double pd_th, double s_pkt, double n_ue,
                                       double cb_ul, double cb_dl,
                                       double pd_bs) {
  if (!(cb_ul > 0.0) || !(cb_dl > 0.0)) {
    throw std::domain_error("appendix_cellular_reward: bandwidths must be > 0");
  }
  const double denom = s_pkt * n_ue / cb_ul + s_pkt * n_ue / cb_dl + pd_bs;
  if (!(denom > 0.0)) {
    throw std::domain_error("appendix_cellular_reward: zero denominator");
  }
  return std::min(1.0, pd_th / denom);
}

// Stated efficiency ratio of the B*f^2/d power model against the cubic
// k1*f^3 model: B/(d*k1).  The division of the two energies reduces to this
// exactly at unit CPU frequency; in general the quotient carries one extra
// 1/f factor.
inline double quadratic_vs_cubic_energy_ratio(double bandwidth,
                                              double distance_m, double k1) {
  if (!(distance_m > 0.0) || !(k1 > 0.0)) {
    throw std::domain_error(
        "quadratic_vs_cubic_energy_ratio: distance and k1 must be > 0");
  }
  return bandwidth / (distance_m * k1);
}

// Energy of the cubic reference model, k1*f^3*dt.
inline double cubic_model_energy(double k1, double cpu_freq_hz, double dt_s) {
  if (k1 < 0.0 || cpu_freq_hz < 0.0 || dt_s < 0.0) {
    throw std::domain_error("cubic_model_energy: negative input");
  }
  return k1 * cpu_freq_hz * cpu_freq_hz * cpu_freq_hz * dt_s;
}

}  // namespace vsn
