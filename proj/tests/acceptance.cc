// Acceptance gate: one binary that exercises the whole system end to end and
// prints one [PASS]/[FAIL] line per criterion.  The exit code is the number
// of failed criteria, so CI can gate on it directly.
//
// The structural criteria (timing tables, scaled constraints, energy closed
// forms, refresh cadence) are exact; the workload criteria gate signs and
// orderings of policy comparisons on synthetic memory-intensive mixes, never
// absolute percentages, which depend on trace selection.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "refsim/experiments.h"
#include "refsim/sim.h"
#include "refsim/timing.h"
#include "refsim/verify.h"

namespace {

using namespace refsim;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt1(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::vector<Policy> kAllPolicies = {
    Policy::kRefAb, Policy::kRefPb,  Policy::kElastic,
    Policy::kDarp,  Policy::kSarpAb, Policy::kSarpPb,
    Policy::kDsarp, Policy::kFgr2x,  Policy::kFgr4x,
};

void progress(const std::string& msg) {
  std::fprintf(stderr, "[acceptance] %s\n", msg.c_str());
  std::fflush(stderr);
}

// ---------------------------------------------------------------------------
// Criteria 1 + 2: the legality/safety matrix.
// ---------------------------------------------------------------------------

SimConfig matrix_config(int density, Policy policy, std::uint64_t seed) {
  SimConfig cfg;
  cfg.org.channels = 1;
  cfg.org.ranks_per_channel = 2;
  cfg.org.density_gbit = density;
  cfg.timing = derive_timing(density, 32.0, refresh_mode(policy),
                             fgr_mode(policy));
  cfg.policy = policy;
  cfg.cores = 1;
  cfg.core_ratio = 2;
  cfg.sim_cycles = 2'000'000;
  cfg.seed = seed;
  SyntheticSpec spec;
  spec.mpki = 30.0;
  spec.footprint_bytes = 4ULL << 20;
  spec.write_fraction = 0.3;
  spec.seed = core_seed(seed, 0);
  cfg.core_specs = {spec};
  cfg.collect_logs = true;
  return cfg;
}

struct MatrixOutcome {
  int runs = 0;
  int verify_bad = 0;
  int audit_bad = 0;
  int debt_bad = 0;
  double elapsed = 0.0;
  std::string first_verify;
  std::string first_audit;
  std::string first_debt;
};

MatrixOutcome run_legality_matrix() {
  MatrixOutcome out;
  const auto t0 = Clock::now();
  for (int density : {8, 16, 32}) {
    progress("matrix density " + std::to_string(density) +
             " Gbit (9 policies x 10 seeds, 2M cycles each)");
    for (Policy policy : kAllPolicies) {
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SimConfig cfg = matrix_config(density, policy, seed);
        const RunResult r = run_simulation(cfg);
        ++out.runs;
        const std::string tag = std::string(to_string(policy)) + "/" +
                                std::to_string(density) + "Gb/seed" +
                                std::to_string(seed);

        ProtocolOptions opt;
        opt.sarp = r.sarp_active;
        const auto v =
            verify_command_log(r.command_log, r.timing_used, cfg.org, opt);
        if (!v.empty()) {
          ++out.verify_bad;
          if (out.first_verify.empty()) {
            out.first_verify = tag + ": " + std::to_string(v.size()) +
                               " violations, first at cycle " +
                               std::to_string(v.front().cycle) + ": " +
                               v.front().message;
          }
        }

        const auto a = retention_audit(r.refresh_log, cfg.org, r.timing_used,
                                       r.sim_start, r.sim_end);
        if (!a.empty()) {
          ++out.audit_bad;
          if (out.first_audit.empty()) {
            out.first_audit = tag + ": " + std::to_string(a.size()) +
                              " violations, first: " + a.front().message;
          }
        }

        if (r.stats.debt_min < -8 || r.stats.debt_max > 8) {
          ++out.debt_bad;
          if (out.first_debt.empty()) {
            out.first_debt = tag + ": debt range [" +
                             std::to_string(r.stats.debt_min) + ", " +
                             std::to_string(r.stats.debt_max) + "]";
          }
        }
      }
    }
  }
  out.elapsed = seconds_since(t0);
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 3: per-bank refresh serialization on a single-bank read stream.
// ---------------------------------------------------------------------------

Outcome pathological_refpb() {
  SimConfig cfg;
  cfg.org.channels = 1;
  cfg.org.ranks_per_channel = 1;
  cfg.timing = derive_timing(8, 32.0, RefreshMode::kPerBank);
  cfg.policy = Policy::kRefPb;
  cfg.cores = 1;
  cfg.core_ratio = 2;
  cfg.sim_cycles = 500'000;
  cfg.seed = 7;
  SyntheticSpec spec;
  spec.mpki = 1000.0;
  spec.footprint_bytes = 1ULL << 20;
  spec.write_fraction = 0.0;
  spec.bank_locality = 1.0;  // every access lands in one bank
  spec.seed = core_seed(7, 0);
  cfg.core_specs = {spec};

  const RunResult r = run_simulation(cfg);
  if (r.stats.n_refpb < 64) {
    return {false, "only " + std::to_string(r.stats.n_refpb) +
                       " per-bank refreshes issued"};
  }
  const double measured = 8.0 *
                          static_cast<double>(r.stats.refresh_busy_cycles) /
                          static_cast<double>(r.stats.n_refpb);
  const double target = 3.478 * static_cast<double>(r.timing_used.tRFCab);
  const double rel = std::abs(measured / target - 1.0);
  std::ostringstream d;
  d << "busy per 8-bank refresh round " << fmt1(measured) << " cycles vs "
    << fmt1(target) << " (3.478x tRFCab), rel err " << fmt1(rel * 100.0)
    << "%, reads served " << r.stats.reads_served;
  return {rel <= 0.02, d.str()};
}

// ---------------------------------------------------------------------------
// Criterion 4: the refresh timing derivation table.
// ---------------------------------------------------------------------------

Outcome timing_table() {
  struct Row {
    int density;
    double rfc_ns;
  };
  const Row rows[] = {{8, 350.0}, {16, 530.0}, {32, 890.0}};
  const double refi_ns = 3906.25;
  const auto cyc = [](double ns) {
    return static_cast<Cycle>(std::ceil(ns / 1.5 - 1e-9));
  };

  std::ostringstream bad;
  for (const Row& row : rows) {
    const TimingParams t = derive_timing(row.density, 32.0,
                                         RefreshMode::kPerBank);
    if (t.tRFCab_ns != row.rfc_ns)
      bad << " tRFCab_ns(" << row.density << ")=" << t.tRFCab_ns;
    if (t.tREFI_ns != refi_ns)
      bad << " tREFI_ns(" << row.density << ")=" << t.tREFI_ns;
    if (t.tRFCab != cyc(row.rfc_ns))
      bad << " tRFCab(" << row.density << ")=" << t.tRFCab;
    if (t.tREFI != cyc(refi_ns))
      bad << " tREFI(" << row.density << ")=" << t.tREFI;
    if (std::abs(t.tRFCpb - static_cast<double>(t.tRFCab) / 2.3) > 1.0)
      bad << " tRFCpb(" << row.density << ")=" << t.tRFCpb;

    const TimingParams t2 =
        derive_timing(row.density, 32.0, RefreshMode::kAllBank, FgrMode::kX2);
    const TimingParams t4 =
        derive_timing(row.density, 32.0, RefreshMode::kAllBank, FgrMode::kX4);
    if (t2.tREFI_ns != refi_ns / 2.0 || t4.tREFI_ns != refi_ns / 4.0)
      bad << " fgr tREFI_ns(" << row.density << ")";
    if (t2.tRFCab_ns != row.rfc_ns / 1.35 || t4.tRFCab_ns != row.rfc_ns / 1.63)
      bad << " fgr tRFCab_ns(" << row.density << ")";
    if (t2.tREFI != cyc(refi_ns / 2.0) || t4.tREFI != cyc(refi_ns / 4.0) ||
        t2.tRFCab != cyc(row.rfc_ns / 1.35) ||
        t4.tRFCab != cyc(row.rfc_ns / 1.63))
      bad << " fgr cycles(" << row.density << ")";
  }
  if (!bad.str().empty()) return {false, "mismatches:" + bad.str()};
  return {true,
          "350/530/890 ns -> 234/354/594 cycles, tREFI 3906.25 ns -> 2605, "
          "per-bank within 1 cycle of /2.3, fine-granularity factors "
          "2/4 and 1.35/1.63 exact"};
}

// ---------------------------------------------------------------------------
// Criterion 5: scaled activation constraints while refreshing.
// ---------------------------------------------------------------------------

Outcome scaled_constraints() {
  const TimingParams t = derive_timing(8, 32.0, RefreshMode::kAllBank);
  if (t.tFAW != 20 || t.tRRD != 4) {
    return {false, "base pair is (" + std::to_string(t.tFAW) + ", " +
                       std::to_string(t.tRRD) + "), expected (20, 4)"};
  }
  const CurrentParams c;
  const auto ab = sarp_scaled_constraints(t, c, RefreshMode::kAllBank);
  const auto pb = sarp_scaled_constraints(t, c, RefreshMode::kPerBank);
  std::ostringstream d;
  d << "all-bank (" << ab.first << ", " << ab.second << "), per-bank ("
    << pb.first << ", " << pb.second << ") from base (20, 4)";
  const bool pass = ab == std::pair<int, int>{42, 9} &&
                    pb == std::pair<int, int>{23, 5};
  return {pass, d.str()};
}

// ---------------------------------------------------------------------------
// Shared context for the workload-trend criteria (6..10, 12, 13).
// ---------------------------------------------------------------------------

struct Context {
  Runner runner;
  std::vector<WorkloadMix> mixes16;
  std::vector<WorkloadMix> mixes4;
  PointParams p32;
  // Per-policy evaluation rows over mixes16 at p32, filled by criterion 6.
  std::map<std::string, std::vector<EvalRow>> trend_rows;
  // All-bank baseline rows over mixes4 at p32, filled by criterion 10.
  std::vector<EvalRow> refab_rows4;

  Context() {
    mixes16 = gen_intensive_mixes(11, 16, 8);
    mixes4.assign(mixes16.begin(), mixes16.begin() + 4);
    p32.org.density_gbit = 32;
    p32.sim_cycles = 1'000'000;
    p32.seed = 1;
  }
};

double mean_ws(const std::vector<EvalRow>& rows, std::size_t n = 0) {
  const std::size_t count = n == 0 ? rows.size() : n;
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) sum += rows[i].ws;
  return sum / static_cast<double>(count);
}

double mean_epa(const std::vector<EvalRow>& rows) {
  double sum = 0.0;
  for (const EvalRow& r : rows) sum += r.energy_per_access_nj;
  return sum / static_cast<double>(rows.size());
}

// Criterion 6: weighted-speedup ordering across the refresh schedulers.
Outcome trend_ordering(Context& ctx, double* elapsed_out) {
  const auto t0 = Clock::now();
  for (Policy pol :
       {Policy::kRefPb, Policy::kDarp, Policy::kSarpPb, Policy::kDsarp}) {
    progress(std::string("trend mixes under ") + to_string(pol));
    auto& rows = ctx.trend_rows[to_string(pol)];
    for (const WorkloadMix& mix : ctx.mixes16) {
      rows.push_back(ctx.runner.evaluate(ctx.p32, pol, mix));
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed_out) *elapsed_out = elapsed;

  const double m_refpb = mean_ws(ctx.trend_rows["refpb"]);
  const double m_darp = mean_ws(ctx.trend_rows["darp"]);
  const double m_sarp = mean_ws(ctx.trend_rows["sarp_pb"]);
  const double m_dsarp = mean_ws(ctx.trend_rows["dsarp"]);

  std::ostringstream d;
  d << "mean WS refpb " << fmt1(m_refpb) << ", darp " << fmt1(m_darp)
    << ", sarp_pb " << fmt1(m_sarp) << ", dsarp " << fmt1(m_dsarp) << " (+"
    << fmt1((m_dsarp / m_refpb - 1.0) * 100.0) << "% over refpb), "
    << fmt1(elapsed) << " s";
  const bool pass = m_dsarp >= m_sarp && m_sarp >= m_refpb &&
                    m_dsarp >= m_darp && m_darp >= m_refpb &&
                    m_dsarp >= 1.03 * m_refpb && elapsed < 900.0;
  return {pass, d.str()};
}

// Criterion 7: all-bank refresh hurts more as density grows.
Outcome density_trend(Context& ctx) {
  std::vector<double> deg;
  std::ostringstream d;
  for (int density : {8, 16, 32}) {
    progress("density trend at " + std::to_string(density) + " Gbit");
    PointParams p = ctx.p32;
    p.org.density_gbit = density;
    double noref = 0.0;
    double ab = 0.0;
    for (const WorkloadMix& mix : ctx.mixes4) {
      noref += ctx.runner.evaluate(p, Policy::kRefAb, mix, true).ws;
      ab += ctx.runner.evaluate(p, Policy::kRefAb, mix).ws;
    }
    deg.push_back(1.0 - ab / noref);
    d << density << "Gb " << fmt1(deg.back() * 100.0) << "% ";
  }
  const bool pass = deg[0] < deg[1] && deg[1] < deg[2];
  return {pass, "degradation vs disabled refresh: " + d.str()};
}

// Criterion 8: subarray-count sweep; gain over the per-bank baseline.
Outcome subarray_sweep(Context& ctx) {
  const double refpb4 = mean_ws(ctx.trend_rows["refpb"], 4);
  std::vector<double> gains;
  std::ostringstream d;
  for (int s : {1, 2, 4, 8, 16, 32, 64}) {
    double m = 0.0;
    if (s == 8) {
      m = mean_ws(ctx.trend_rows["sarp_pb"], 4);
    } else {
      progress("subarray sweep at " + std::to_string(s));
      PointParams p = ctx.p32;
      p.org.subarrays_per_bank = s;
      std::vector<EvalRow> rows;
      for (const WorkloadMix& mix : ctx.mixes4) {
        rows.push_back(ctx.runner.evaluate(p, Policy::kSarpPb, mix));
      }
      m = mean_ws(rows);
    }
    gains.push_back(m / refpb4 - 1.0);
    d << s << ":" << fmt1(gains.back() * 100.0) << "% ";
  }
  bool monotone = true;
  for (std::size_t i = 1; i < gains.size(); ++i) {
    if (gains[i] < gains[i - 1]) monotone = false;
  }
  const bool zero_at_one = gains.front() == 0.0;
  std::string detail = "gain over refpb by subarray count: " + d.str();
  if (!zero_at_one) detail += "(nonzero gain at a single subarray)";
  return {zero_at_one && monotone, detail};
}

// Criterion 9: gain shrinks as the activation window constraints tighten in
// relative terms — as tFAW/tRRD grow, the four-ACT window throttles both
// schedulers and parallelization buys less.  The sweep uses mixes with some
// bank locality so that bank conflicts, not raw bus occupancy, set the
// bottleneck across the whole range; fully uniform traffic saturates the
// data bus at small tFAW and flattens the left end of the curve.
Outcome tfaw_sweep(Context& ctx) {
  const std::vector<std::pair<int, int>> pairs = {{5, 1},  {10, 2}, {15, 3},
                                                  {20, 4}, {25, 5}, {30, 6}};
  std::vector<WorkloadMix> mixes = ctx.mixes4;
  for (WorkloadMix& mix : mixes) {
    for (SyntheticSpec& spec : mix.specs) spec.bank_locality = 0.3;
  }
  std::vector<double> gains;
  std::ostringstream d;
  for (const auto& [faw, rrd] : pairs) {
    progress("tFAW/tRRD sweep at " + std::to_string(faw) + "/" +
             std::to_string(rrd));
    PointParams p = ctx.p32;
    p.tfaw = faw;
    p.trrd = rrd;
    std::vector<EvalRow> ref_rows;
    std::vector<EvalRow> sarp_rows;
    for (const WorkloadMix& mix : mixes) {
      ref_rows.push_back(ctx.runner.evaluate(p, Policy::kRefPb, mix));
      sarp_rows.push_back(ctx.runner.evaluate(p, Policy::kSarpPb, mix));
    }
    const double m_ref = mean_ws(ref_rows);
    const double m_sarp = mean_ws(sarp_rows);
    gains.push_back(m_sarp / m_ref - 1.0);
    d << faw << "/" << rrd << ":" << fmt1(gains.back() * 100.0) << "% ";
  }
  bool monotone = true;
  for (std::size_t i = 1; i < gains.size(); ++i) {
    if (gains[i] > gains[i - 1]) monotone = false;
  }
  return {monotone, "gain over refpb by tFAW/tRRD: " + d.str()};
}

// Criterion 10: finer-granularity refresh slows the system down.
Outcome fgr_ordering(Context& ctx) {
  progress("fine-granularity refresh comparison");
  for (const WorkloadMix& mix : ctx.mixes4) {
    ctx.refab_rows4.push_back(ctx.runner.evaluate(ctx.p32, Policy::kRefAb, mix));
  }
  std::vector<EvalRow> g2;
  std::vector<EvalRow> g4;
  for (const WorkloadMix& mix : ctx.mixes4) {
    g2.push_back(ctx.runner.evaluate(ctx.p32, Policy::kFgr2x, mix));
    g4.push_back(ctx.runner.evaluate(ctx.p32, Policy::kFgr4x, mix));
  }
  const double m_ab = mean_ws(ctx.refab_rows4);
  const double m_2x = mean_ws(g2);
  const double m_4x = mean_ws(g4);
  std::ostringstream d;
  d << "mean WS refab " << fmt1(m_ab) << " > fgr2x " << fmt1(m_2x)
    << " > fgr4x " << fmt1(m_4x);
  return {m_2x < m_ab && m_4x < m_2x, d.str()};
}

// ---------------------------------------------------------------------------
// Criterion 11: refresh cadence over a window with zero boundary debt.
// ---------------------------------------------------------------------------

Outcome refresh_accounting() {
  const Cycle window = 2'000'000;
  std::ostringstream d;
  bool pass = true;

  {  // all-bank: one record per rank per interval
    SimConfig cfg;
    cfg.org.channels = 1;
    cfg.org.ranks_per_channel = 2;
    cfg.timing = derive_timing(8, 32.0, RefreshMode::kAllBank);
    cfg.policy = Policy::kRefAb;
    cfg.cores = 0;
    cfg.sim_cycles = window;
    const RunResult r = run_simulation(cfg);
    const double nominal =
        static_cast<double>(window) / static_cast<double>(cfg.timing.tREFI);
    std::map<int, long> per_rank;
    for (const Command& cmd : r.refresh_log) {
      if (cmd.kind == CommandKind::kRefAb) ++per_rank[cmd.rank];
    }
    if (per_rank.size() != 2) pass = false;
    long lo = 1L << 30, hi = -1;
    for (const auto& [rank, count] : per_rank) {
      lo = std::min(lo, count);
      hi = std::max(hi, count);
      if (std::abs(static_cast<double>(count) - nominal) > 1.0) pass = false;
    }
    d << "all-bank per rank " << lo << ".." << hi << " vs " << fmt1(nominal);
  }

  {  // per-bank: one record per bank per interval
    SimConfig cfg;
    cfg.org.channels = 1;
    cfg.org.ranks_per_channel = 2;
    cfg.timing = derive_timing(8, 32.0, RefreshMode::kPerBank);
    cfg.policy = Policy::kRefPb;
    cfg.cores = 0;
    cfg.sim_cycles = window;
    const RunResult r = run_simulation(cfg);
    const double nominal =
        static_cast<double>(window) / static_cast<double>(cfg.timing.tREFI);
    std::map<std::pair<int, int>, long> per_bank;
    for (const Command& cmd : r.refresh_log) {
      if (cmd.kind == CommandKind::kRefPb) ++per_bank[{cmd.rank, cmd.bank}];
    }
    if (per_bank.size() != 16) pass = false;
    long lo = 1L << 30, hi = -1;
    for (const auto& [key, count] : per_bank) {
      lo = std::min(lo, count);
      hi = std::max(hi, count);
      if (std::abs(static_cast<double>(count) - nominal) > 1.0) pass = false;
    }
    d << "; per-bank per bank " << lo << ".." << hi << " vs " << fmt1(nominal);
  }
  return {pass, d.str()};
}

// ---------------------------------------------------------------------------
// Criterion 12: energy model closed forms + per-access ordering.
// ---------------------------------------------------------------------------

Outcome energy_checks(Context& ctx) {
  // Hand-computed closed forms for one rank over 1000 cycles.
  RankCounters rc;
  rc.n_act = 10;
  rc.n_rd = 20;
  rc.n_wr = 5;
  rc.n_refab = 2;
  rc.n_refpb = 8;
  rc.active_cycles = 250;
  const TimingParams t = derive_timing(8, 32.0, RefreshMode::kPerBank);
  const EnergyBreakdown e = dram_energy({rc}, 1000, t, PowerParams{});
  const auto rel = [](double got, double want) {
    return std::abs(got - want) / want;
  };
  const double tol = 1e-9;
  const bool forms_ok = rel(e.background_nj, 75.375) <= tol &&
                        rel(e.activate_nj, 13.8375) <= tol &&
                        rel(e.read_nj, 21.42) <= tol &&
                        rel(e.write_nj, 4.05) <= tol &&
                        rel(e.refresh_nj, 279.5715) <= tol &&
                        rel(e.total_nj(), 394.254) <= tol;

  if (ctx.refab_rows4.empty() || ctx.trend_rows["dsarp"].empty()) {
    return {false, "baseline rows missing (earlier criterion failed to run)"};
  }
  std::vector<EvalRow> dsarp4(ctx.trend_rows["dsarp"].begin(),
                              ctx.trend_rows["dsarp"].begin() + 4);
  const double epa_ab = mean_epa(ctx.refab_rows4);
  const double epa_ds = mean_epa(dsarp4);
  std::ostringstream d;
  d << "closed forms " << (forms_ok ? "exact" : "WRONG")
    << "; energy/access dsarp " << fmt1(epa_ds) << " nJ < refab "
    << fmt1(epa_ab) << " nJ";
  return {forms_ok && epa_ds < epa_ab, d.str()};
}

// ---------------------------------------------------------------------------
// Criterion 13: byte-identical reruns.
// ---------------------------------------------------------------------------

Outcome determinism(Context& ctx) {
  progress("determinism rerun (matrix CSV + logs)");
  PointParams p = ctx.p32;
  p.sim_cycles = 500'000;
  p.collect_logs = true;
  const std::vector<WorkloadMix> m2(ctx.mixes16.begin(),
                                    ctx.mixes16.begin() + 2);
  const std::vector<Policy> pols = {Policy::kRefPb, Policy::kDsarp};

  std::ostringstream csv1, csv2;
  {
    Runner r1;
    write_matrix_csv(csv1, r1, p, m2, pols, false);
  }
  {
    Runner r2;
    write_matrix_csv(csv2, r2, p, m2, pols, false);
  }
  const bool csv_ok = !csv1.str().empty() && csv1.str() == csv2.str();

  const SimConfig cfg = make_run_config(p, Policy::kDsarp, m2[0]);
  const auto render = [](const RunResult& r) {
    std::string s;
    for (const Command& cmd : r.command_log) {
      s += format_log_record(cmd);
      s += '\n';
    }
    for (const Command& cmd : r.refresh_log) {
      s += format_log_record(cmd);
      s += '\n';
    }
    return s;
  };
  const std::string log1 = render(run_simulation(cfg));
  const std::string log2 = render(run_simulation(cfg));
  const bool log_ok = !log1.empty() && log1 == log2;

  std::ostringstream d;
  d << "matrix CSV " << csv1.str().size() << " bytes "
    << (csv_ok ? "identical" : "DIFFER") << "; logs " << log1.size()
    << " bytes " << (log_ok ? "identical" : "DIFFER");
  return {csv_ok && log_ok, d.str()};
}

}  // namespace

int main() {
  struct Line {
    std::string name;
    Outcome outcome;
  };
  std::vector<Line> lines(13);
  lines[0].name = "protocol legality across 9 policies x 10 seeds x 3 densities";
  lines[1].name = "retention safety and debt bounds on the same matrix";
  lines[2].name = "per-bank refresh serialization on a single-bank stream";
  lines[3].name = "refresh timing derivation table";
  lines[4].name = "scaled activation constraints during refresh";
  lines[5].name = "weighted-speedup ordering on intensive mixes";
  lines[6].name = "refresh degradation grows with density";
  lines[7].name = "subarray-count sweep monotonicity";
  lines[8].name = "tFAW/tRRD sweep monotonicity";
  lines[9].name = "fine-granularity refresh slowdown ordering";
  lines[10].name = "refresh cadence over a debt-free window";
  lines[11].name = "energy closed forms and per-access ordering";
  lines[12].name = "byte-identical rerun";

  const auto guarded = [](Outcome (*fn)()) {
    try {
      return fn();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };

  const auto t_all = Clock::now();

  // Structural criteria first: cheap and independent.
  lines[3].outcome = guarded(timing_table);
  lines[4].outcome = guarded(scaled_constraints);
  lines[10].outcome = guarded(refresh_accounting);
  lines[2].outcome = guarded(pathological_refpb);

  // The legality/safety matrix (criteria 1 and 2 share the runs).
  try {
    const MatrixOutcome m = run_legality_matrix();
    {
      std::ostringstream d;
      d << m.runs << " runs, " << m.verify_bad << " with violations, "
        << fmt1(m.elapsed) << " s";
      if (!m.first_verify.empty()) d << "; first: " << m.first_verify;
      lines[0].outcome = {m.verify_bad == 0 && m.elapsed < 300.0, d.str()};
    }
    {
      std::ostringstream d;
      d << m.runs << " runs, " << m.audit_bad << " audit failures, "
        << m.debt_bad << " debt-bound breaches";
      if (!m.first_audit.empty()) d << "; first: " << m.first_audit;
      if (!m.first_debt.empty()) d << "; first debt: " << m.first_debt;
      lines[1].outcome = {m.audit_bad == 0 && m.debt_bad == 0, d.str()};
    }
  } catch (const std::exception& e) {
    lines[0].outcome = {false, std::string("exception: ") + e.what()};
    lines[1].outcome = {false, std::string("exception: ") + e.what()};
  }

  // Workload-trend criteria share one runner so solo baselines are cached.
  Context ctx;
  const auto ctx_guarded = [&ctx](Outcome (*fn)(Context&)) {
    try {
      return fn(ctx);
    } catch (const std::exception& e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };

  try {
    double elapsed = 0.0;
    lines[5].outcome = trend_ordering(ctx, &elapsed);
  } catch (const std::exception& e) {
    lines[5].outcome = {false, std::string("exception: ") + e.what()};
  }
  lines[6].outcome = ctx_guarded(density_trend);
  lines[7].outcome = ctx_guarded(subarray_sweep);
  lines[8].outcome = ctx_guarded(tfaw_sweep);
  lines[9].outcome = ctx_guarded(fgr_ordering);
  lines[11].outcome = ctx_guarded(energy_checks);
  lines[12].outcome = ctx_guarded(determinism);

  int failures = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const bool pass = lines[i].outcome.pass;
    if (!pass) ++failures;
    std::printf("[%s] criterion %2zu: %s — %s\n", pass ? "PASS" : "FAIL",
                i + 1, lines[i].name.c_str(), lines[i].outcome.detail.c_str());
  }
  std::printf("acceptance: %d/13 criteria passed, %.1f s total, shared runs "
              "%llu, solo runs %llu\n",
              13 - failures, seconds_since(t_all),
              static_cast<unsigned long long>(ctx.runner.shared_runs),
              static_cast<unsigned long long>(ctx.runner.alone_runs));
  return failures;
}
