// Command-line front end.
//
//   vsnsim validate --config FILE     check a config file, report problems
//   vsnsim run      [options]         run one or more scenarios
//   vsnsim sweep    [options]         vary one config key over a value list
//
// Exit codes: 0 success, 2 input file missing, 3 invalid value or unknown
// key (the message names the key), 4 the engine failed to run.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vsn/config.hpp"
#include "vsn/csv.hpp"
#include "vsn/engine.hpp"

namespace fs = std::filesystem;

namespace {

struct MissingFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string default_out_dir() {
  const char* env = std::getenv("VSNSIM_OUT");
  return (env != nullptr && *env != '\0') ? env : ".";
}

vsn::ScenarioConfig load_or_default(const std::string& path) {
  if (path.empty()) return vsn::ScenarioConfig{};
  if (!fs::exists(path)) {
    throw MissingFile("config file not found: " + path);
  }
  return vsn::load_config_file(path);
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write file: " + p.string());
  return os;
}

struct RunOptions {
  std::string config_path;
  std::vector<std::string> schedulers{"dsql"};
  std::vector<std::uint64_t> seeds;
  std::string out_dir = default_out_dir();
  bool trace = false;
  bool dump_qtables = false;
  bool dump_weights = false;
  bool dump_com = false;
};

struct SweepOptions {
  std::string config_path;
  std::string param;
  std::vector<double> values;
  int n_seeds = 3;
  std::string scheduler = "dsql";
  int workers = 4;
  std::string out_dir = default_out_dir();
};

int do_validate(const std::string& path) {
  const vsn::ScenarioConfig cfg = load_or_default(path);
  std::cout << "ok: " << path << "\n"
            << "nodes: " << cfg.total_nodes() << " (" << cfg.n_vehicles
            << " vehicles, " << cfg.n_base_stations << " base stations, "
            << cfg.n_rsus << " roadside units)\n"
            << "ticks: " << cfg.sim_ticks() << " (slot "
            << vsn::format_double(cfg.time_slot_ms) << " ms, duration "
            << vsn::format_double(cfg.sim_duration_s) << " s)\n"
            << "seed: " << cfg.seed << "\n";
  return 0;
}

int do_run(const RunOptions& opt) {
  const vsn::ScenarioConfig base = load_or_default(opt.config_path);
  std::vector<vsn::SchedulerKind> schedulers;
  schedulers.reserve(opt.schedulers.size());
  for (const std::string& name : opt.schedulers) {
    schedulers.push_back(vsn::parse_scheduler(name));
  }
  const std::vector<std::uint64_t> seeds =
      opt.seeds.empty() ? std::vector<std::uint64_t>{base.seed} : opt.seeds;

  fs::create_directories(opt.out_dir);
  const fs::path out(opt.out_dir);

  std::vector<std::string> rows;
  std::cout << vsn::summary_header() << "\n";
  for (const vsn::SchedulerKind sched : schedulers) {
    for (const std::uint64_t seed : seeds) {
      vsn::ScenarioConfig cfg = base;
      cfg.seed = seed;
      const vsn::RunResult r = vsn::run(cfg, sched);

      const std::string tag =
          std::string(vsn::to_string(sched)) + "_" + std::to_string(seed);
      vsn::write_summary_csv((out / ("summary_" + tag + ".csv")).string(),
                             vsn::to_string(sched), seed, r.metrics);
      if (opt.trace) {
        vsn::write_decisions_csv((out / ("decisions_" + tag + ".csv")).string(),
                                 r.trace);
        vsn::write_packets_csv((out / ("packets_" + tag + ".csv")).string(),
                               r.trace);
      }
      if (opt.dump_qtables) {
        std::ofstream os = open_out(out / ("qtables_" + tag + ".txt"));
        for (const auto& [id, table] : r.q_tables) table.dump(os);
      }
      if (opt.dump_weights) {
        std::ofstream os = open_out(out / ("weights_" + tag + ".txt"));
        r.net.save(os);
      }
      if (opt.dump_com) {
        vsn::write_com_csv((out / ("com_" + tag + ".csv")).string(), r.trace);
      }

      const std::string row =
          vsn::summary_row(vsn::to_string(sched), seed, r.metrics);
      std::cout << row << "\n";
      rows.push_back(row);
    }
  }

  if (rows.size() > 1) {
    std::ofstream os = open_out(out / "runs.csv");
    os << vsn::summary_header() << '\n';
    for (const std::string& row : rows) os << row << '\n';
  }
  return 0;
}

int do_sweep(const SweepOptions& opt) {
  const vsn::ScenarioConfig base = load_or_default(opt.config_path);

  // Reject an unknown or non-numeric key before any run starts.
  {
    vsn::ScenarioConfig probe = base;
    vsn::set_key(probe, opt.param, vsn::format_double(opt.values.front()));
  }

  vsn::SweepSpec spec;
  spec.param = opt.param;
  spec.values = opt.values;
  spec.n_seeds = opt.n_seeds;
  spec.scheduler = vsn::parse_scheduler(opt.scheduler);
  spec.max_workers = opt.workers;

  const std::vector<vsn::SweepRow> rows = vsn::run_sweep(base, spec);

  fs::create_directories(opt.out_dir);
  const fs::path path = fs::path(opt.out_dir) / ("sweep_" + opt.param + ".csv");
  vsn::write_sweep_csv(path.string(), rows);
  std::cout << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-transmission scheduling simulator for vehicular social "
               "networks"};
  app.require_subcommand(1);

  std::string validate_config;
  CLI::App* validate =
      app.add_subcommand("validate", "Check a config file and report the "
                                     "first problem found");
  validate->add_option("config,-c,--config", validate_config, "Config file")
      ->required();

  RunOptions run_opt;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one or more scenarios");
  run_cmd->add_option("-c,--config", run_opt.config_path,
                      "Config file (defaults apply when omitted)");
  run_cmd->add_option("-s,--scheduler", run_opt.schedulers,
                      "Scheduler(s): dsql, random, greedy_distance, "
                      "static_priority (repeatable)");
  run_cmd->add_option("--seed", run_opt.seeds,
                      "Seed(s) to run (repeatable; default: config seed)");
  run_cmd->add_option("-o,--out", run_opt.out_dir,
                      "Output directory (default: $VSNSIM_OUT or .)");
  run_cmd->add_flag("--trace", run_opt.trace,
                    "Also write per-decision and per-packet CSV files");
  run_cmd->add_flag("--dump-qtables", run_opt.dump_qtables,
                    "Dump final Q-tables");
  run_cmd->add_flag("--dump-weights", run_opt.dump_weights,
                    "Dump final scorer weights");
  run_cmd->add_flag("--dump-com", run_opt.dump_com,
                    "Dump per-node mean social connectivity");

  SweepOptions sweep_opt;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Vary one config key over a value list");
  sweep_cmd->add_option("-c,--config", sweep_opt.config_path,
                        "Config file (defaults apply when omitted)");
  sweep_cmd->add_option("-p,--param", sweep_opt.param, "Config key to vary")
      ->required();
  sweep_cmd->add_option("-v,--values", sweep_opt.values,
                        "Comma-separated values the key takes")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("-n,--seeds", sweep_opt.n_seeds,
                        "Seeds 1..N per value (default 3)");
  sweep_cmd->add_option("-s,--scheduler", sweep_opt.scheduler,
                        "Scheduler for every run (default dsql)");
  sweep_cmd->add_option("-j,--workers", sweep_opt.workers,
                        "Maximum concurrent runs (default 4)");
  sweep_cmd->add_option("-o,--out", sweep_opt.out_dir,
                        "Output directory (default: $VSNSIM_OUT or .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (validate->parsed()) return do_validate(validate_config);
    if (run_cmd->parsed()) return do_run(run_opt);
    if (sweep_cmd->parsed()) return do_sweep(sweep_opt);
  } catch (const MissingFile& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const vsn::ConfigError& e) {
    std::cerr << "config error";
    if (e.line > 0) std::cerr << " (line " << e.line << ")";
    std::cerr << ": " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid value: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
