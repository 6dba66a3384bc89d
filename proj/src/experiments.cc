#include "refsim/experiments.h"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "refsim/timing.h"

namespace refsim {
namespace {

constexpr double kIntensiveMpkiThreshold = 10.0;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::uint64_t mix_hash(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

WorkloadMix draw_mix(std::mt19937_64& rng, const std::string& name,
                     int cores, int intensive_count) {
  static const double kIntensiveMpki[] = {15.0, 25.0, 40.0, 60.0};
  static const double kNormalMpki[] = {1.0, 2.0, 5.0, 8.0};
  static const std::uint64_t kIntensiveFpMb[] = {32, 64};
  static const std::uint64_t kNormalFpMb[] = {4, 8};

  WorkloadMix mix;
  mix.name = name;
  mix.seed = rng();
  mix.specs.resize(static_cast<std::size_t>(cores));
  for (int i = 0; i < cores; ++i) {
    SyntheticSpec& s = mix.specs[static_cast<std::size_t>(i)];
    const bool hot = i < intensive_count;
    s.mpki = hot ? kIntensiveMpki[rng() % 4] : kNormalMpki[rng() % 4];
    const std::uint64_t mb = hot ? kIntensiveFpMb[rng() % 2] : kNormalFpMb[rng() % 2];
    s.footprint_bytes = mb << 20;
    s.bank_locality = 0.0;
    s.write_fraction = 0.3;
    s.seed = core_seed(mix.seed, i);
    if (s.mpki >= kIntensiveMpkiThreshold) ++mix.intensive;
  }
  return mix;
}

}  // namespace

std::vector<WorkloadMix> gen_workload_mixes(std::uint64_t seed,
                                            int per_category, int cores) {
  if (per_category < 1 || cores < 1) {
    throw ConfigError("gen_workload_mixes: per_category and cores must be >= 1");
  }
  static const int kCategoriesPct[] = {0, 25, 50, 75, 100};
  std::vector<WorkloadMix> mixes;
  int idx = 0;
  for (int pct : kCategoriesPct) {
    const int n_intensive = cores * pct / 100;
    for (int k = 0; k < per_category; ++k, ++idx) {
      std::mt19937_64 rng(mix_hash(seed + static_cast<std::uint64_t>(idx)));
      char name[32];
      std::snprintf(name, sizeof name, "mix%02d_i%03d", idx, pct);
      mixes.push_back(draw_mix(rng, name, cores, n_intensive));
    }
  }
  return mixes;
}

std::vector<WorkloadMix> gen_intensive_mixes(std::uint64_t seed, int count,
                                             int cores) {
  if (count < 1 || cores < 1) {
    throw ConfigError("gen_intensive_mixes: count and cores must be >= 1");
  }
  std::vector<WorkloadMix> mixes;
  for (int idx = 0; idx < count; ++idx) {
    std::mt19937_64 rng(mix_hash(seed + 0x5151ULL + static_cast<std::uint64_t>(idx)));
    char name[32];
    std::snprintf(name, sizeof name, "imix%02d", idx);
    mixes.push_back(draw_mix(rng, name, cores, cores));
  }
  return mixes;
}

std::string format_mixes(const std::vector<WorkloadMix>& mixes) {
  std::ostringstream os;
  os << "# name mpki,... footprint_mb,... write_fraction bank_locality seed\n";
  for (const WorkloadMix& m : mixes) {
    os << m.name << ' ';
    for (std::size_t i = 0; i < m.specs.size(); ++i) {
      os << (i ? "," : "") << fmt(m.specs[i].mpki);
    }
    os << ' ';
    for (std::size_t i = 0; i < m.specs.size(); ++i) {
      os << (i ? "," : "") << (m.specs[i].footprint_bytes >> 20);
    }
    const double wf = m.specs.empty() ? 0.3 : m.specs.front().write_fraction;
    const double bl = m.specs.empty() ? 0.0 : m.specs.front().bank_locality;
    os << ' ' << fmt(wf) << ' ' << fmt(bl) << ' ' << m.seed << '\n';
  }
  return os.str();
}

std::vector<WorkloadMix> parse_mixes(std::string_view text) {
  std::vector<WorkloadMix> mixes;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::string name, mpkis, fps, wfs, bls, seeds;
    if (!(ls >> name)) continue;  // blank line
    if (!(ls >> mpkis >> fps >> wfs >> bls >> seeds)) {
      throw ParseError("mix line needs 6 fields", lineno);
    }
    std::string extra;
    if (ls >> extra) throw ParseError("trailing fields on mix line", lineno);

    auto split = [lineno](const std::string& csv) {
      std::vector<std::string> out;
      std::string item;
      std::istringstream cs(csv);
      while (std::getline(cs, item, ',')) out.push_back(item);
      if (out.empty()) throw ParseError("empty list in mix line", lineno);
      return out;
    };
    auto to_d = [lineno](const std::string& s) {
      try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
      } catch (const std::exception&) {
        throw ParseError("bad number '" + s + "' in mix line", lineno);
      }
    };

    const auto mpki_list = split(mpkis);
    const auto fp_list = split(fps);
    if (mpki_list.size() != fp_list.size()) {
      throw ParseError("mpki and footprint lists differ in length", lineno);
    }
    WorkloadMix mix;
    mix.name = name;
    const double wf = to_d(wfs);
    const double bl = to_d(bls);
    try {
      mix.seed = std::stoull(seeds);
    } catch (const std::exception&) {
      throw ParseError("bad seed '" + seeds + "' in mix line", lineno);
    }
    for (std::size_t i = 0; i < mpki_list.size(); ++i) {
      SyntheticSpec s;
      s.mpki = to_d(mpki_list[i]);
      s.footprint_bytes = static_cast<std::uint64_t>(to_d(fp_list[i]) * (1 << 20));
      s.write_fraction = wf;
      s.bank_locality = bl;
      s.seed = core_seed(mix.seed, static_cast<int>(i));
      if (s.mpki >= kIntensiveMpkiThreshold) ++mix.intensive;
      mix.specs.push_back(s);
    }
    mixes.push_back(std::move(mix));
  }
  return mixes;
}

SimConfig make_run_config(const PointParams& p, Policy policy,
                          const WorkloadMix& mix, bool no_refresh) {
  SimConfig cfg;
  cfg.org = p.org;
  cfg.timing = derive_timing(p.org.density_gbit, p.retention_ms,
                             refresh_mode(policy), fgr_mode(policy), p.tck_ns);
  cfg.timing.tRRD = p.trrd;
  cfg.timing.tFAW = p.tfaw;
  cfg.timing.tRRD_ref = p.trrd;
  cfg.timing.tFAW_ref = p.tfaw;
  cfg.timing.validate();
  cfg.currents = p.currents;
  cfg.power = p.power;
  cfg.policy = policy;
  cfg.no_refresh = no_refresh;
  cfg.mapping = p.mapping;
  cfg.cores = static_cast<int>(mix.specs.size());
  cfg.sim_cycles = p.sim_cycles;
  cfg.seed = p.seed;
  cfg.core_specs = mix.specs;
  cfg.trace_records = p.trace_records;
  cfg.collect_logs = p.collect_logs;
  return cfg;
}

RunResult Runner::run(const PointParams& p, Policy policy,
                      const WorkloadMix& mix, bool no_refresh) {
  ++shared_runs;
  return run_simulation(make_run_config(p, policy, mix, no_refresh));
}

double Runner::alone_ipc(const PointParams& p, const SyntheticSpec& spec) {
  // The baseline all-bank schedule is independent of the subarray count, so
  // the key omits it and subarray sweeps share one set of solo runs.
  char key[512];
  std::snprintf(
      key, sizeof key,
      "%d|%d|%d|%" PRId64 "|%d|%d|%d|%.6g|%.6g|%d|%d|%" PRId64
      "|%zu|%" PRIu64 "|%.6g|%" PRIu64 "|%.6g|%.6g|%" PRIu64,
      p.org.channels, p.org.ranks_per_channel, p.org.banks_per_rank,
      static_cast<std::int64_t>(p.org.rows_per_bank), p.org.columns_per_row,
      p.org.column_width_bytes, p.org.density_gbit, p.retention_ms, p.tck_ns,
      p.tfaw, p.trrd, static_cast<std::int64_t>(p.sim_cycles),
      p.trace_records, p.seed, spec.mpki, spec.footprint_bytes,
      spec.bank_locality, spec.write_fraction, spec.seed);
  key[sizeof key - 1] = '\0';
  if (const auto it = alone_cache_.find(key); it != alone_cache_.end()) {
    return it->second;
  }
  WorkloadMix solo;
  solo.name = "solo";
  solo.specs = {spec};
  ++alone_runs;
  const RunResult r = run_simulation(
      make_run_config(p, Policy::kRefAb, solo, /*no_refresh=*/false));
  const double ipc = r.stats.cores.at(0).ipc;
  alone_cache_.emplace(key, ipc);
  return ipc;
}

std::vector<double> Runner::alone_ipcs(const PointParams& p,
                                       const WorkloadMix& mix) {
  std::vector<double> out;
  out.reserve(mix.specs.size());
  for (const SyntheticSpec& s : mix.specs) out.push_back(alone_ipc(p, s));
  return out;
}

EvalRow Runner::evaluate(const PointParams& p, Policy policy,
                         const WorkloadMix& mix, bool no_refresh) {
  const RunResult r = run(p, policy, mix, no_refresh);
  const std::vector<double> alone = alone_ipcs(p, mix);
  EvalRow row;
  row.mix = mix.name;
  row.policy = no_refresh ? "norefresh" : std::string(to_string(policy));
  row.shared_ipc.reserve(r.stats.cores.size());
  for (const CoreStats& c : r.stats.cores) row.shared_ipc.push_back(c.ipc);
  row.ws = weighted_speedup(row.shared_ipc, alone);
  row.hs = harmonic_speedup(row.shared_ipc, alone);
  row.ms = max_slowdown(row.shared_ipc, alone);
  row.energy_nj = r.energy.total_nj();
  row.accesses = r.stats.reads_served + r.stats.writes_served;
  row.energy_per_access_nj =
      row.accesses ? energy_per_access_nj(r.energy, row.accesses) : 0.0;
  row.avg_read_latency = r.stats.avg_read_latency;
  row.refab = r.stats.n_refab;
  row.refpb = r.stats.n_refpb;
  return row;
}

double Runner::mean_ws(const PointParams& p, Policy policy,
                       const std::vector<WorkloadMix>& mixes,
                       bool no_refresh) {
  if (mixes.empty()) throw ConfigError("mean_ws: no mixes");
  double sum = 0.0;
  for (const WorkloadMix& m : mixes) {
    sum += evaluate(p, policy, m, no_refresh).ws;
  }
  return sum / static_cast<double>(mixes.size());
}

void write_matrix_csv(std::ostream& os, Runner& runner, const PointParams& p,
                      const std::vector<WorkloadMix>& mixes,
                      const std::vector<Policy>& policies,
                      bool include_norefresh) {
  os << "mix,policy,ws,hs,max_slowdown,ws_vs_refab,ws_vs_refpb,"
        "energy_nj,energy_per_access_nj,avg_read_latency,refab,refpb\n";
  struct Cell {
    EvalRow row;
    double vs_refab = 0.0, vs_refpb = 0.0;
  };
  std::vector<std::string> labels;
  std::map<std::string, std::vector<double>> ratio_ab, ratio_pb;
  for (const WorkloadMix& mix : mixes) {
    const EvalRow base_ab = runner.evaluate(p, Policy::kRefAb, mix);
    const EvalRow base_pb = runner.evaluate(p, Policy::kRefPb, mix);
    std::vector<EvalRow> rows;
    for (Policy pol : policies) rows.push_back(runner.evaluate(p, pol, mix));
    if (include_norefresh) {
      rows.push_back(runner.evaluate(p, Policy::kRefAb, mix, true));
    }
    for (const EvalRow& row : rows) {
      const double va = row.ws / base_ab.ws;
      const double vp = row.ws / base_pb.ws;
      if (ratio_ab.find(row.policy) == ratio_ab.end()) {
        labels.push_back(row.policy);
      }
      ratio_ab[row.policy].push_back(va);
      ratio_pb[row.policy].push_back(vp);
      os << row.mix << ',' << row.policy << ',' << fmt(row.ws) << ','
         << fmt(row.hs) << ',' << fmt(row.ms) << ',' << fmt(va) << ','
         << fmt(vp) << ',' << fmt(row.energy_nj) << ','
         << fmt(row.energy_per_access_nj) << ',' << fmt(row.avg_read_latency)
         << ',' << row.refab << ',' << row.refpb << '\n';
    }
  }
  for (const std::string& label : labels) {
    os << "gmean," << label << ",,,," << fmt(gmean(ratio_ab[label])) << ','
       << fmt(gmean(ratio_pb[label])) << ",,,,,\n";
  }
}

void write_density_sweep_csv(std::ostream& os, Runner& runner, PointParams p,
                             const std::vector<WorkloadMix>& mixes,
                             const std::vector<Policy>& policies,
                             bool include_norefresh,
                             const std::vector<int>& densities) {
  os << "density_gbit,policy,mean_ws,ws_vs_norefresh\n";
  for (int d : densities) {
    p.org.density_gbit = d;
    const double base =
        runner.mean_ws(p, Policy::kRefAb, mixes, /*no_refresh=*/true);
    if (include_norefresh) {
      os << d << ",norefresh," << fmt(base) << ",1\n";
    }
    for (Policy pol : policies) {
      const double ws = runner.mean_ws(p, pol, mixes);
      os << d << ',' << to_string(pol) << ',' << fmt(ws) << ','
         << fmt(ws / base) << '\n';
    }
  }
}

void write_tfaw_sweep_csv(std::ostream& os, Runner& runner, PointParams p,
                          const std::vector<WorkloadMix>& mixes) {
  os << "tfaw,trrd,policy,mean_ws,gain_vs_refpb\n";
  static const int kPairs[][2] = {{5, 1},  {10, 2}, {15, 3},
                                  {20, 4}, {25, 5}, {30, 6}};
  for (const auto& pair : kPairs) {
    p.tfaw = pair[0];
    p.trrd = pair[1];
    const double base = runner.mean_ws(p, Policy::kRefPb, mixes);
    const double sarp = runner.mean_ws(p, Policy::kSarpPb, mixes);
    os << p.tfaw << ',' << p.trrd << ",refpb," << fmt(base) << ",1\n";
    os << p.tfaw << ',' << p.trrd << ",sarp_pb," << fmt(sarp) << ','
       << fmt(sarp / base) << '\n';
  }
}

void write_subarray_sweep_csv(std::ostream& os, Runner& runner,
                              PointParams p,
                              const std::vector<WorkloadMix>& mixes) {
  os << "subarrays_per_bank,policy,mean_ws,gain_vs_refpb\n";
  for (int n : {1, 2, 4, 8, 16, 32, 64}) {
    p.org.subarrays_per_bank = n;
    const double base = runner.mean_ws(p, Policy::kRefPb, mixes);
    const double sarp = runner.mean_ws(p, Policy::kSarpPb, mixes);
    os << n << ",refpb," << fmt(base) << ",1\n";
    os << n << ",sarp_pb," << fmt(sarp) << ',' << fmt(sarp / base) << '\n';
  }
}

void write_retention_sweep_csv(std::ostream& os, Runner& runner,
                               PointParams p,
                               const std::vector<WorkloadMix>& mixes,
                               const std::vector<Policy>& policies) {
  os << "retention_ms,policy,mean_ws\n";
  for (double ms : {32.0, 64.0}) {
    p.retention_ms = ms;
    for (Policy pol : policies) {
      os << fmt(ms) << ',' << to_string(pol) << ','
         << fmt(runner.mean_ws(p, pol, mixes)) << '\n';
    }
  }
}

void write_intensity_sweep_csv(std::ostream& os, Runner& runner,
                               const PointParams& p, std::uint64_t mix_seed,
                               int per_category,
                               const std::vector<Policy>& policies) {
  const std::vector<WorkloadMix> mixes =
      gen_workload_mixes(mix_seed, per_category);
  os << "intensive_pct,policy,mean_ws\n";
  static const int kCategoriesPct[] = {0, 25, 50, 75, 100};
  for (std::size_t c = 0; c < 5; ++c) {
    const std::vector<WorkloadMix> slice(
        mixes.begin() + static_cast<std::ptrdiff_t>(c * per_category),
        mixes.begin() + static_cast<std::ptrdiff_t>((c + 1) * per_category));
    for (Policy pol : policies) {
      os << kCategoriesPct[c] << ',' << to_string(pol) << ','
         << fmt(runner.mean_ws(p, pol, slice)) << '\n';
    }
  }
}

}  // namespace refsim
