#include "vsn/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vsn {

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write file: " + path);
  return os;
}

std::string join_ids(const std::vector<NodeId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ';';
    out += std::to_string(ids[i]);
  }
  return out;
}

std::string opt_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

// The metric columns shared by the summary and sweep files.
const char kMetricColumns[] =
    "accuracy,travel_expenses_j,connectivity_degree,transmission_delay_ms,"
    "p_privacy_leakage,p_malicious_attack,objective,converged,episodes_used";

std::string metric_cells(const MetricsReport& m) {
  std::ostringstream os;
  os << opt_cell(m.accuracy) << ',' << format_double(m.travel_expenses_j)
     << ',' << m.connectivity_degree << ','
     << opt_cell(m.transmission_delay_ms) << ','
     << opt_cell(m.p_privacy_leakage) << ',' << opt_cell(m.p_malicious_attack)
     << ',' << opt_cell(m.objective) << ',' << (m.converged ? 1 : 0) << ','
     << m.episodes_used;
  return os.str();
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[64];
  // Integral values print plainly; everything else takes the shortest form
  // that parses back to the identical double.
  if (v == std::floor(v) && std::fabs(v) < 1.0e15) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string summary_header() {
  return std::string("scheduler,seed,") + kMetricColumns;
}

std::string summary_row(const std::string& scheduler, std::uint64_t seed,
                        const MetricsReport& m) {
  std::ostringstream os;
  os << scheduler << ',' << seed << ',' << metric_cells(m);
  return os.str();
}

void write_decisions_csv(const std::string& path, const RunTrace& t) {
  std::ofstream os = open_or_throw(path);
  os << "tick_ms,node,destination,candidates,chosen,oracle_best,"
        "chosen_is_best,released_reward\n";
  for (const auto& d : t.decisions) {
    os << d.tick_ms << ',' << d.node << ',' << d.destination << ','
       << join_ids(d.candidates) << ',' << d.chosen << ',' << d.oracle_best
       << ',' << (d.chosen_is_best ? 1 : 0) << ','
       << format_double(d.released_reward) << '\n';
  }
}

void write_packets_csv(const std::string& path, const RunTrace& t) {
  std::ofstream os = open_or_throw(path);
  os << "id,created_ms,delivered_ms,hops,energy_j\n";
  for (const auto& p : t.packets) {
    os << p.id << ',' << p.created_at_ms << ',';
    if (p.delivered_at_ms) os << *p.delivered_at_ms;
    os << ',' << join_ids(p.visited) << ',' << format_double(p.energy_spent_j)
       << '\n';
  }
}

void write_summary_csv(const std::string& path, const std::string& scheduler,
                       std::uint64_t seed, const MetricsReport& m) {
  std::ofstream os = open_or_throw(path);
  os << summary_header() << '\n' << summary_row(scheduler, seed, m) << '\n';
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows) {
  std::ofstream os = open_or_throw(path);
  os << "param,value,seed,scheduler," << kMetricColumns << '\n';
  for (const auto& r : rows) {
    os << r.param << ',' << r.value << ',' << r.seed << ',' << r.scheduler
       << ',' << metric_cells(r.metrics) << '\n';
  }
}

void write_com_csv(const std::string& path, const RunTrace& t) {
  std::ofstream os = open_or_throw(path);
  os << "node,mean_com\n";
  for (const auto& [id, com] : t.mean_com) {
    os << id << ',' << format_double(com) << '\n';
  }
}

}  // namespace vsn
