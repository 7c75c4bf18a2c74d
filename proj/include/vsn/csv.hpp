#pragma once
// CSV export with a stable column contract.  All floating-point values are
// written with round-trip precision so identical runs produce byte-identical
// files.  Absent metrics are written as empty cells.
//
// decisions CSV: tick_ms,node,destination,candidates,chosen,oracle_best,
//               chosen_is_best,released_reward
// packets  CSV: id,created_ms,delivered_ms,hops,energy_j
// summary  CSV: scheduler,seed,accuracy,travel_expenses_j,connectivity_degree,
//               transmission_delay_ms,p_privacy_leakage,p_malicious_attack,
//               objective,converged,episodes_used
// sweep    CSV: param,value,seed,scheduler, then the metric columns of the
//               summary (accuracy onward).
// Multi-valued cells (candidates, hops) join node ids with ';'.

#include <optional>
#include <string>

#include "vsn/engine.hpp"

namespace vsn {

std::string format_double(double v);  // shortest round-trip form

std::string summary_header();
std::string summary_row(const std::string& scheduler, std::uint64_t seed,
                        const MetricsReport& m);

void write_decisions_csv(const std::string& path, const RunTrace& t);
void write_packets_csv(const std::string& path, const RunTrace& t);
void write_summary_csv(const std::string& path, const std::string& scheduler,
                       std::uint64_t seed, const MetricsReport& m);

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

// Per-node mean social-connectivity values, one "node,mean_com" row each.
void write_com_csv(const std::string& path, const RunTrace& t);

}  // namespace vsn
