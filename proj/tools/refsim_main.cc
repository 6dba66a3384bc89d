// refsim command-line front-end: single runs with built-in legality and
// retention checking, policy comparison matrices, parameter sweeps, trace
// and mix generation, and standalone log checkers.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "refsim/config.h"
#include "refsim/experiments.h"
#include "refsim/sim.h"
#include "refsim/timing.h"
#include "refsim/verify.h"

namespace {

using namespace refsim;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Policy policy_or_throw(const std::string& name) {
  if (const auto p = policy_from_string(name)) return *p;
  throw ConfigError("unknown policy '" + name + "'");
}

std::vector<Policy> policy_list(const std::string& csv) {
  std::vector<Policy> out;
  std::string item;
  std::istringstream is(csv);
  while (std::getline(is, item, ',')) {
    if (!item.empty()) out.push_back(policy_or_throw(item));
  }
  if (out.empty()) throw ConfigError("empty policy list");
  return out;
}

AddressMapping mapping_or_throw(const std::string& name) {
  if (name == "interleaved") return AddressMapping::kChannelInterleaved;
  if (name == "blocked") return AddressMapping::kChannelBlocked;
  throw ConfigError("unknown mapping '" + name + "' (interleaved|blocked)");
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os << content;
  if (!os) throw ConfigError("write failed for '" + path + "'");
}

bool report_verify(const std::vector<Violation>& v, std::size_t max_print) {
  for (std::size_t i = 0; i < v.size() && i < max_print; ++i) {
    std::printf("  record %zu cycle %lld: %s\n", v[i].record,
                static_cast<long long>(v[i].cycle), v[i].message.c_str());
  }
  if (v.size() > max_print) {
    std::printf("  ... and %zu more\n", v.size() - max_print);
  }
  std::printf("verify: %s (%zu violations)\n", v.empty() ? "PASS" : "FAIL",
              v.size());
  return v.empty();
}

bool report_audit(const std::vector<AuditViolation>& v,
                  std::size_t max_print) {
  for (std::size_t i = 0; i < v.size() && i < max_print; ++i) {
    std::printf("  ch%d rank%d bank%d rows[%d+%d): %s (%lld)\n", v[i].channel,
                v[i].rank, v[i].bank, v[i].row_begin, v[i].row_count,
                v[i].message.c_str(), static_cast<long long>(v[i].value));
  }
  if (v.size() > max_print) {
    std::printf("  ... and %zu more\n", v.size() - max_print);
  }
  std::printf("audit: %s (%zu violations)\n", v.empty() ? "PASS" : "FAIL",
              v.size());
  return v.empty();
}

std::string log_to_text(std::span<const Command> log) {
  std::string out;
  for (const Command& c : log) {
    out += format_log_record(c);
    out += '\n';
  }
  return out;
}

void write_stats_csv(const std::string& path, const SimConfig& cfg,
                     const RunResult& r) {
  std::ostringstream os;
  os << "key,value\n";
  os << "policy," << (cfg.no_refresh ? "norefresh" : to_string(cfg.policy))
     << '\n';
  os << "cores," << cfg.cores << '\n';
  os << "sim_cycles," << r.stats.sim_cycles << '\n';
  os << "density_gbit," << cfg.org.density_gbit << '\n';
  os << "subarrays_per_bank," << cfg.org.subarrays_per_bank << '\n';
  os << "sarp_active," << (r.sarp_active ? 1 : 0) << '\n';
  os << "reads_served," << r.stats.reads_served << '\n';
  os << "writes_served," << r.stats.writes_served << '\n';
  os << "reads_forwarded," << r.stats.reads_forwarded << '\n';
  os << "n_refab," << r.stats.n_refab << '\n';
  os << "n_refpb," << r.stats.n_refpb << '\n';
  os << "postponed_refreshes," << r.stats.postponed_refreshes << '\n';
  os << "pulled_in_refreshes," << r.stats.pulled_in_refreshes << '\n';
  os << "refresh_busy_cycles," << r.stats.refresh_busy_cycles << '\n';
  os << "debt_min," << r.stats.debt_min << '\n';
  os << "debt_max," << r.stats.debt_max << '\n';
  os << "starvation_breaches," << r.stats.starvation_breaches << '\n';
  os << "max_request_wait," << r.stats.max_request_wait << '\n';
  os << "avg_read_latency," << fmt(r.stats.avg_read_latency) << '\n';
  os << "drain_entries," << r.stats.drain_entries << '\n';
  os << "energy_background_nj," << fmt(r.energy.background_nj) << '\n';
  os << "energy_activate_nj," << fmt(r.energy.activate_nj) << '\n';
  os << "energy_read_nj," << fmt(r.energy.read_nj) << '\n';
  os << "energy_write_nj," << fmt(r.energy.write_nj) << '\n';
  os << "energy_refresh_nj," << fmt(r.energy.refresh_nj) << '\n';
  os << "energy_total_nj," << fmt(r.energy.total_nj()) << '\n';
  const std::uint64_t accesses = r.stats.reads_served + r.stats.writes_served;
  os << "energy_per_access_nj,"
     << fmt(accesses ? energy_per_access_nj(r.energy, accesses) : 0.0) << '\n';
  for (std::size_t i = 0; i < r.stats.cores.size(); ++i) {
    const CoreStats& c = r.stats.cores[i];
    os << "core" << i << "_ipc," << fmt(c.ipc) << '\n';
    os << "core" << i << "_instructions," << c.instructions << '\n';
    os << "core" << i << "_reads," << c.reads << '\n';
    os << "core" << i << "_writes," << c.writes << '\n';
  }
  write_text(path, os.str());
}

void write_latency_csv(const std::string& path,
                       std::span<const LatencyRecord> lat) {
  std::ostringstream os;
  os << "core,kind,arrival,completion\n";
  for (const LatencyRecord& l : lat) {
    os << static_cast<int>(l.core) << ',' << to_string(l.kind) << ','
       << l.arrival << ',' << l.completion << '\n';
  }
  write_text(path, os.str());
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

struct RunArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string policy = "refab";
  std::string mapping = "interleaved";
  bool no_refresh = false;
  int cores = 4;
  std::int64_t cycles = 2'000'000;
  int density = 8;
  double retention = 32.0;
  int subarrays = 8;
  int tfaw = 20;
  int trrd = 4;
  std::uint64_t seed = 1;
  double mpki = 10.0;
  double footprint_mb = 8.0;
  double bank_locality = 0.0;
  double write_fraction = 0.3;
  std::size_t trace_records = 20000;
  std::vector<std::string> traces;
  std::size_t max_print = 20;
};

int cmd_run(const RunArgs& a, const CLI::App& sub) {
  SimConfig cfg;
  const bool from_file = !a.config_path.empty();
  if (from_file) cfg = load_sim_config(a.config_path);

  const auto given = [&sub](const std::string& flag) {
    return sub.count(flag) > 0;
  };
  if (!from_file || given("--policy")) cfg.policy = policy_or_throw(a.policy);
  if (!from_file || given("--no-refresh")) cfg.no_refresh = a.no_refresh;
  if (!from_file || given("--mapping")) cfg.mapping = mapping_or_throw(a.mapping);
  if (!from_file || given("--cores")) cfg.cores = a.cores;
  if (!from_file || given("--cycles")) cfg.sim_cycles = a.cycles;
  if (!from_file || given("--density")) cfg.org.density_gbit = a.density;
  if (!from_file || given("--subarrays")) cfg.org.subarrays_per_bank = a.subarrays;
  if (!from_file || given("--seed")) cfg.seed = a.seed;
  if (!from_file || given("--trace-records")) cfg.trace_records = a.trace_records;

  // Refresh timing follows density/retention/policy; demand timing is kept
  // from the config file (or defaults) unless overridden here.
  const double retention =
      (!from_file || given("--retention")) ? a.retention : cfg.timing.retention_ms;
  TimingParams fresh =
      derive_timing(cfg.org.density_gbit, retention,
                    refresh_mode(cfg.policy), fgr_mode(cfg.policy),
                    from_file ? cfg.timing.tck_ns : 1.5);
  if (from_file) {
    fresh.tRCD = cfg.timing.tRCD;
    fresh.tRP = cfg.timing.tRP;
    fresh.tCL = cfg.timing.tCL;
    fresh.tCWL = cfg.timing.tCWL;
    fresh.tRAS = cfg.timing.tRAS;
    fresh.tRC = cfg.timing.tRC;
    fresh.tWR = cfg.timing.tWR;
    fresh.tWTR = cfg.timing.tWTR;
    fresh.tRTP = cfg.timing.tRTP;
    fresh.tBURST = cfg.timing.tBURST;
    fresh.tRRD = cfg.timing.tRRD;
    fresh.tFAW = cfg.timing.tFAW;
  }
  if (!from_file || given("--tfaw")) fresh.tFAW = a.tfaw;
  if (!from_file || given("--trrd")) fresh.tRRD = a.trrd;
  fresh.tRRD_ref = fresh.tRRD;
  fresh.tFAW_ref = fresh.tFAW;
  fresh.validate();
  cfg.timing = fresh;

  if (!a.traces.empty()) {
    cfg.trace_files = a.traces;
    cfg.core_specs.clear();
    if (!given("--cores")) cfg.cores = static_cast<int>(a.traces.size());
  } else if (!from_file || given("--mpki") || given("--footprint-mb") ||
             given("--bank-locality") || given("--write-fraction") ||
             static_cast<int>(cfg.core_specs.size()) != cfg.cores) {
    SyntheticSpec base;
    if (from_file && !cfg.core_specs.empty()) base = cfg.core_specs.front();
    if (!from_file || given("--mpki")) base.mpki = a.mpki;
    if (!from_file || given("--footprint-mb")) {
      base.footprint_bytes =
          static_cast<std::uint64_t>(a.footprint_mb * (1 << 20));
    }
    if (!from_file || given("--bank-locality")) base.bank_locality = a.bank_locality;
    if (!from_file || given("--write-fraction")) base.write_fraction = a.write_fraction;
    cfg.trace_files.clear();
    cfg.core_specs.assign(static_cast<std::size_t>(cfg.cores), base);
    for (int i = 0; i < cfg.cores; ++i) {
      cfg.core_specs[static_cast<std::size_t>(i)].seed = core_seed(cfg.seed, i);
    }
  }

  cfg.collect_logs = true;
  cfg.collect_latencies = true;
  cfg.validate();

  const RunResult r = run_simulation(cfg);

  std::printf("policy=%s cores=%d cycles=%lld density=%dGb subarrays=%d%s\n",
              cfg.no_refresh ? "norefresh" : to_string(cfg.policy), cfg.cores,
              static_cast<long long>(r.stats.sim_cycles),
              cfg.org.density_gbit, cfg.org.subarrays_per_bank,
              r.sarp_active ? " (sarp)" : "");
  std::printf(
      "reads=%llu writes=%llu forwarded=%llu avg_read_latency=%s\n",
      static_cast<unsigned long long>(r.stats.reads_served),
      static_cast<unsigned long long>(r.stats.writes_served),
      static_cast<unsigned long long>(r.stats.reads_forwarded),
      fmt(r.stats.avg_read_latency).c_str());
  std::printf(
      "refab=%llu refpb=%llu postponed=%llu pulled_in=%llu debt=[%d,%d] "
      "refresh_busy=%lld\n",
      static_cast<unsigned long long>(r.stats.n_refab),
      static_cast<unsigned long long>(r.stats.n_refpb),
      static_cast<unsigned long long>(r.stats.postponed_refreshes),
      static_cast<unsigned long long>(r.stats.pulled_in_refreshes),
      r.stats.debt_min, r.stats.debt_max,
      static_cast<long long>(r.stats.refresh_busy_cycles));
  for (std::size_t i = 0; i < r.stats.cores.size(); ++i) {
    std::printf("core%zu ipc=%s\n", i, fmt(r.stats.cores[i].ipc).c_str());
  }
  const std::uint64_t accesses = r.stats.reads_served + r.stats.writes_served;
  std::printf("energy_nj total=%s background=%s activate=%s rd=%s wr=%s "
              "refresh=%s per_access=%s\n",
              fmt(r.energy.total_nj()).c_str(),
              fmt(r.energy.background_nj).c_str(),
              fmt(r.energy.activate_nj).c_str(), fmt(r.energy.read_nj).c_str(),
              fmt(r.energy.write_nj).c_str(), fmt(r.energy.refresh_nj).c_str(),
              fmt(accesses ? energy_per_access_nj(r.energy, accesses) : 0.0)
                  .c_str());

  ProtocolOptions opt;
  opt.sarp = r.sarp_active;
  const auto violations =
      verify_command_log(r.command_log, r.timing_used, cfg.org, opt);
  const bool verify_ok = report_verify(violations, a.max_print);
  bool audit_ok = true;
  if (!cfg.no_refresh) {
    const auto audit = retention_audit(r.refresh_log, cfg.org, r.timing_used,
                                       r.sim_start, r.sim_end);
    audit_ok = report_audit(audit, a.max_print);
  } else {
    std::printf("audit: skipped (refresh disabled)\n");
  }

  std::filesystem::create_directories(a.out_dir);
  const std::string base = a.out_dir + "/";
  write_text(base + "command_log.txt", log_to_text(r.command_log));
  write_text(base + "refresh_log.txt", log_to_text(r.refresh_log));
  write_latency_csv(base + "latency.csv", r.latencies);
  write_stats_csv(base + "stats.csv", cfg, r);
  std::printf("wrote %scommand_log.txt %srefresh_log.txt %slatency.csv "
              "%sstats.csv\n",
              base.c_str(), base.c_str(), base.c_str(), base.c_str());
  return verify_ok && audit_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// matrix / sweep
// ---------------------------------------------------------------------------

struct GridArgs {
  std::string mixes_path;
  std::uint64_t mix_seed = 1;
  int per_category = 4;
  int cores = 8;
  std::string policies =
      "refab,refpb,elastic,darp,sarp_ab,sarp_pb,dsarp,fgr2x,fgr4x";
  int density = 32;
  double retention = 32.0;
  int subarrays = 8;
  int tfaw = 20;
  int trrd = 4;
  std::int64_t cycles = 2'000'000;
  std::uint64_t seed = 1;
  std::size_t trace_records = 20000;
  bool include_norefresh = false;
  std::string out;
  std::string axis;  // sweep only
};

PointParams grid_point(const GridArgs& a) {
  PointParams p;
  p.org.density_gbit = a.density;
  p.org.subarrays_per_bank = a.subarrays;
  p.retention_ms = a.retention;
  p.tfaw = a.tfaw;
  p.trrd = a.trrd;
  p.sim_cycles = a.cycles;
  p.seed = a.seed;
  p.trace_records = a.trace_records;
  return p;
}

std::vector<WorkloadMix> grid_mixes(const GridArgs& a) {
  if (!a.mixes_path.empty()) {
    std::ifstream is(a.mixes_path);
    if (!is) throw ConfigError("cannot open mixes file '" + a.mixes_path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    auto mixes = parse_mixes(buf.str());
    if (mixes.empty()) throw ConfigError("no mixes in '" + a.mixes_path + "'");
    return mixes;
  }
  return gen_workload_mixes(a.mix_seed, a.per_category, a.cores);
}

int cmd_matrix(const GridArgs& a) {
  const PointParams p = grid_point(a);
  const auto mixes = grid_mixes(a);
  const auto policies = policy_list(a.policies);
  Runner runner;
  std::ostringstream os;
  write_matrix_csv(os, runner, p, mixes, policies, a.include_norefresh);
  const std::string out = a.out.empty() ? "matrix.csv" : a.out;
  write_text(out, os.str());
  std::istringstream echo(os.str());
  std::string line;
  while (std::getline(echo, line)) {
    if (line.rfind("gmean,", 0) == 0) std::printf("%s\n", line.c_str());
  }
  std::printf("wrote %s (%llu shared runs, %llu solo runs)\n", out.c_str(),
              static_cast<unsigned long long>(runner.shared_runs),
              static_cast<unsigned long long>(runner.alone_runs));
  return 0;
}

int cmd_sweep(const GridArgs& a) {
  const PointParams p = grid_point(a);
  Runner runner;
  std::ostringstream os;
  if (a.axis == "density") {
    write_density_sweep_csv(os, runner, p, grid_mixes(a),
                            policy_list(a.policies), true, {8, 16, 32});
  } else if (a.axis == "tfaw") {
    write_tfaw_sweep_csv(os, runner, p, grid_mixes(a));
  } else if (a.axis == "subarrays") {
    write_subarray_sweep_csv(os, runner, p, grid_mixes(a));
  } else if (a.axis == "retention") {
    write_retention_sweep_csv(os, runner, p, grid_mixes(a),
                              policy_list(a.policies));
  } else if (a.axis == "intensity") {
    write_intensity_sweep_csv(os, runner, p, a.mix_seed, a.per_category,
                              policy_list(a.policies));
  } else if (a.axis == "policy") {
    const auto mixes = grid_mixes(a);
    os << "policy,mean_ws,gain_vs_refab\n";
    const double base = runner.mean_ws(p, Policy::kRefAb, mixes);
    for (Policy pol : policy_list(a.policies)) {
      const double ws = runner.mean_ws(p, pol, mixes);
      os << to_string(pol) << ',' << fmt(ws) << ',' << fmt(ws / base) << '\n';
    }
    if (a.include_norefresh) {
      const double ws = runner.mean_ws(p, Policy::kRefAb, mixes, true);
      os << "norefresh," << fmt(ws) << ',' << fmt(ws / base) << '\n';
    }
  } else {
    throw ConfigError("unknown sweep axis '" + a.axis +
                      "' (density|tfaw|subarrays|retention|intensity|policy)");
  }
  const std::string out = a.out.empty() ? "sweep_" + a.axis + ".csv" : a.out;
  write_text(out, os.str());
  std::printf("wrote %s (%llu shared runs, %llu solo runs)\n", out.c_str(),
              static_cast<unsigned long long>(runner.shared_runs),
              static_cast<unsigned long long>(runner.alone_runs));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-level multi-core DRAM simulator for refresh policies"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand(
      "run", "Run one simulation; verifies its own command and refresh logs");
  run->add_option("--config", run_args.config_path, "INI-style config file");
  run->add_option("--out-dir", run_args.out_dir, "output directory");
  run->add_option("--policy", run_args.policy, "refresh policy");
  run->add_flag("--no-refresh", run_args.no_refresh, "disable refresh");
  run->add_option("--mapping", run_args.mapping, "interleaved|blocked");
  run->add_option("--cores", run_args.cores, "core count (0 = refresh only)");
  run->add_option("--cycles", run_args.cycles, "controller cycles");
  run->add_option("--density", run_args.density, "chip density in Gbit");
  run->add_option("--retention", run_args.retention, "retention window (ms)");
  run->add_option("--subarrays", run_args.subarrays, "subarrays per bank");
  run->add_option("--tfaw", run_args.tfaw, "tFAW in cycles");
  run->add_option("--trrd", run_args.trrd, "tRRD in cycles");
  run->add_option("--seed", run_args.seed, "master seed");
  run->add_option("--mpki", run_args.mpki, "misses per kilo-instruction");
  run->add_option("--footprint-mb", run_args.footprint_mb, "footprint (MiB)");
  run->add_option("--bank-locality", run_args.bank_locality,
                  "fraction of accesses pinned to one bank");
  run->add_option("--write-fraction", run_args.write_fraction,
                  "fraction of memory accesses that are writes");
  run->add_option("--trace-records", run_args.trace_records,
                  "synthetic trace length");
  run->add_option("--trace", run_args.traces,
                  "trace file per core (repeatable)");
  run->add_option("--max-print", run_args.max_print,
                  "violations to print before truncating");

  auto add_grid = [](CLI::App* sub, GridArgs& g) {
    sub->add_option("--mixes", g.mixes_path, "mix file (else generated)");
    sub->add_option("--mix-seed", g.mix_seed, "mix generation seed");
    sub->add_option("--per-category", g.per_category,
                    "mixes per intensity category");
    sub->add_option("--cores", g.cores, "cores per mix");
    sub->add_option("--policies", g.policies, "comma-separated policies");
    sub->add_option("--density", g.density, "chip density in Gbit");
    sub->add_option("--retention", g.retention, "retention window (ms)");
    sub->add_option("--subarrays", g.subarrays, "subarrays per bank");
    sub->add_option("--tfaw", g.tfaw, "tFAW in cycles");
    sub->add_option("--trrd", g.trrd, "tRRD in cycles");
    sub->add_option("--cycles", g.cycles, "controller cycles per run");
    sub->add_option("--seed", g.seed, "simulation seed");
    sub->add_option("--trace-records", g.trace_records,
                    "synthetic trace length");
    sub->add_flag("--include-norefresh", g.include_norefresh,
                  "also run with refresh disabled");
    sub->add_option("--out", g.out, "output CSV path");
  };

  GridArgs matrix_args;
  CLI::App* matrix = app.add_subcommand(
      "matrix", "Compare policies across workload mixes (CSV)");
  add_grid(matrix, matrix_args);

  GridArgs sweep_args;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Sweep one parameter axis (CSV)");
  sweep->add_option("--axis", sweep_args.axis,
                    "density|tfaw|subarrays|retention|intensity|policy")
      ->required();
  add_grid(sweep, sweep_args);

  struct {
    double mpki = 10.0;
    std::uint64_t footprint_bytes = 8ull << 20;
    double bank_locality = 0.0;
    double write_fraction = 0.3;
    std::size_t len = 20000;
    std::uint64_t seed = 1;
    int density = 8;
    std::string mapping = "interleaved";
    std::string out;
  } gt;
  CLI::App* gen_trace =
      app.add_subcommand("gen-trace", "Generate one synthetic trace file");
  gen_trace->add_option("--mpki", gt.mpki, "misses per kilo-instruction");
  gen_trace->add_option("--footprint-bytes", gt.footprint_bytes,
                        "working-set size in bytes");
  gen_trace->add_option("--bank-locality", gt.bank_locality,
                        "fraction of accesses pinned to one bank");
  gen_trace->add_option("--write-fraction", gt.write_fraction,
                        "fraction of accesses that are writes");
  gen_trace->add_option("--len", gt.len, "records to generate");
  gen_trace->add_option("--seed", gt.seed, "trace seed");
  gen_trace->add_option("--density", gt.density, "chip density in Gbit");
  gen_trace->add_option("--mapping", gt.mapping, "interleaved|blocked");
  gen_trace->add_option("--out", gt.out, "output path")->required();

  struct {
    std::uint64_t seed = 1;
    int per_category = 4;
    int cores = 8;
    int intensive = 0;
    std::string out;
  } gm;
  CLI::App* gen_mixes =
      app.add_subcommand("gen-mixes", "Generate a workload mix file");
  gen_mixes->add_option("--seed", gm.seed, "mix seed");
  gen_mixes->add_option("--per-category", gm.per_category,
                        "mixes per intensity category");
  gen_mixes->add_option("--cores", gm.cores, "cores per mix");
  gen_mixes->add_option("--intensive", gm.intensive,
                        "generate N all-intensive mixes instead");
  gen_mixes->add_option("--out", gm.out, "output path")->required();

  struct {
    std::string log;
    std::string policy = "refab";
    int density = 8;
    double retention = 32.0;
    int subarrays = 8;
    int tfaw = 20;
    int trrd = 4;
    double tck = 1.5;
    std::size_t max_print = 20;
  } vf;
  CLI::App* verify =
      app.add_subcommand("verify", "Replay a command log against the rules");
  verify->add_option("log", vf.log, "command log file")->required();
  verify->add_option("--policy", vf.policy, "policy the log was made with");
  verify->add_option("--density", vf.density, "chip density in Gbit");
  verify->add_option("--retention", vf.retention, "retention window (ms)");
  verify->add_option("--subarrays", vf.subarrays, "subarrays per bank");
  verify->add_option("--tfaw", vf.tfaw, "tFAW in cycles");
  verify->add_option("--trrd", vf.trrd, "tRRD in cycles");
  verify->add_option("--tck", vf.tck, "clock period (ns)");
  verify->add_option("--max-print", vf.max_print, "violations to print");

  struct {
    std::string log;
    std::string policy = "refab";
    int density = 8;
    double retention = 32.0;
    int subarrays = 8;
    double tck = 1.5;
    std::int64_t sim_start = 0;
    std::int64_t sim_cycles = 2'000'000;
    std::size_t max_print = 20;
  } au;
  CLI::App* audit =
      app.add_subcommand("audit", "Audit a refresh log for retention safety");
  audit->add_option("log", au.log, "refresh log file")->required();
  audit->add_option("--policy", au.policy, "policy the log was made with");
  audit->add_option("--density", au.density, "chip density in Gbit");
  audit->add_option("--retention", au.retention, "retention window (ms)");
  audit->add_option("--subarrays", au.subarrays, "subarrays per bank");
  audit->add_option("--tck", au.tck, "clock period (ns)");
  audit->add_option("--sim-start", au.sim_start, "first simulated cycle");
  audit->add_option("--sim-cycles", au.sim_cycles, "simulated cycle count");
  audit->add_option("--max-print", au.max_print, "violations to print");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_args, *run);
    if (matrix->parsed()) return cmd_matrix(matrix_args);
    if (sweep->parsed()) return cmd_sweep(sweep_args);
    if (gen_trace->parsed()) {
      SyntheticSpec spec;
      spec.mpki = gt.mpki;
      spec.footprint_bytes = gt.footprint_bytes;
      spec.bank_locality = gt.bank_locality;
      spec.write_fraction = gt.write_fraction;
      spec.seed = gt.seed;
      DramOrg org;
      org.density_gbit = gt.density;
      const auto recs =
          generate_trace(spec, org, mapping_or_throw(gt.mapping), gt.len);
      write_trace_file(gt.out, recs);
      std::printf("wrote %s (%zu records)\n", gt.out.c_str(), recs.size());
      return 0;
    }
    if (gen_mixes->parsed()) {
      const auto mixes =
          gm.intensive > 0
              ? gen_intensive_mixes(gm.seed, gm.intensive, gm.cores)
              : gen_workload_mixes(gm.seed, gm.per_category, gm.cores);
      write_text(gm.out, format_mixes(mixes));
      std::printf("wrote %s (%zu mixes)\n", gm.out.c_str(), mixes.size());
      return 0;
    }
    if (verify->parsed()) {
      const Policy pol = policy_or_throw(vf.policy);
      DramOrg org;
      org.density_gbit = vf.density;
      org.subarrays_per_bank = vf.subarrays;
      org.validate();
      TimingParams t = derive_timing(vf.density, vf.retention,
                                     refresh_mode(pol), fgr_mode(pol), vf.tck);
      t.tRRD = vf.trrd;
      t.tFAW = vf.tfaw;
      ProtocolOptions opt;
      opt.sarp = sarp_enabled(pol) && org.subarrays_per_bank > 1;
      if (opt.sarp) {
        const CurrentParams currents;
        const auto [faw_ref, rrd_ref] =
            sarp_scaled_constraints(t, currents, refresh_mode(pol));
        t.tFAW_ref = faw_ref;
        t.tRRD_ref = rrd_ref;
      } else {
        t.tFAW_ref = t.tFAW;
        t.tRRD_ref = t.tRRD;
      }
      t.validate();
      std::ifstream is(vf.log);
      if (!is) throw ConfigError("cannot open '" + vf.log + "'");
      const auto violations = verify_command_log_text(is, t, org, opt);
      return report_verify(violations, vf.max_print) ? 0 : 1;
    }
    if (audit->parsed()) {
      const Policy pol = policy_or_throw(au.policy);
      DramOrg org;
      org.density_gbit = au.density;
      org.subarrays_per_bank = au.subarrays;
      org.validate();
      const TimingParams t = derive_timing(
          au.density, au.retention, refresh_mode(pol), fgr_mode(pol), au.tck);
      const auto log = read_log_file(au.log);
      const auto violations = retention_audit(log, org, t, au.sim_start,
                                              au.sim_start + au.sim_cycles);
      return report_audit(violations, au.max_print) ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
