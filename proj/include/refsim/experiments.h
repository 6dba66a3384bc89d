// Experiment orchestration: workload-mix generation, solo baselines for
// per-core alone-IPC, policy comparison matrices, and parameter sweeps,
// emitted as plot-ready CSV.
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "refsim/sim.h"

namespace refsim {

/// An n-core bundle of synthetic workloads.
struct WorkloadMix {
  std::string name;
  std::vector<SyntheticSpec> specs;
  int intensive = 0;        ///< members with MPKI >= 10
  std::uint64_t seed = 1;   ///< mix seed; per-core trace seeds derive from it
};

/// Draws `per_category` mixes for each intensity category (0/25/50/75/100 %
/// of cores memory-intensive), reproducibly from `seed`.
std::vector<WorkloadMix> gen_workload_mixes(std::uint64_t seed,
                                            int per_category = 4,
                                            int cores = 8);

/// All-intensive mixes (every member MPKI >= 10).
std::vector<WorkloadMix> gen_intensive_mixes(std::uint64_t seed, int count,
                                             int cores = 8);

/// One line per mix: `name mpki,... footprint_mb,... write_fraction
/// bank_locality seed`.  Per-core trace seeds derive from the mix seed.
std::string format_mixes(const std::vector<WorkloadMix>& mixes);
std::vector<WorkloadMix> parse_mixes(std::string_view text);

/// One point in the sweep space; everything except policy and workload.
struct PointParams {
  DramOrg org;
  double retention_ms = 32.0;
  double tck_ns = 1.5;
  int tfaw = 20;
  int trrd = 4;
  Cycle sim_cycles = 2'000'000;
  std::uint64_t seed = 1;
  AddressMapping mapping = AddressMapping::kChannelInterleaved;
  CurrentParams currents;
  PowerParams power;
  std::size_t trace_records = 20000;
  bool collect_logs = false;
};

/// Expands a point + policy + mix into a runnable configuration (derives the
/// policy's refresh timing and applies the point's tFAW/tRRD pair).
SimConfig make_run_config(const PointParams& p, Policy policy,
                          const WorkloadMix& mix, bool no_refresh = false);

struct EvalRow {
  std::string mix;
  std::string policy;  ///< "norefresh" for disabled-refresh runs
  double ws = 0.0;
  double hs = 0.0;
  double ms = 0.0;
  double energy_nj = 0.0;
  double energy_per_access_nj = 0.0;
  double avg_read_latency = 0.0;
  std::uint64_t refab = 0;
  std::uint64_t refpb = 0;
  std::uint64_t accesses = 0;
  std::vector<double> shared_ipc;
};

/// Runs simulations and computes speedup metrics against cached solo
/// baselines.  Alone-IPC uses the plain all-bank baseline policy for every
/// core, so policy comparisons share one denominator; the cache key excludes
/// the subarray count, which the baseline schedule does not depend on.
class Runner {
 public:
  RunResult run(const PointParams& p, Policy policy, const WorkloadMix& mix,
                bool no_refresh = false);
  std::vector<double> alone_ipcs(const PointParams& p,
                                 const WorkloadMix& mix);
  EvalRow evaluate(const PointParams& p, Policy policy,
                   const WorkloadMix& mix, bool no_refresh = false);
  double mean_ws(const PointParams& p, Policy policy,
                 const std::vector<WorkloadMix>& mixes,
                 bool no_refresh = false);

  std::uint64_t shared_runs = 0;
  std::uint64_t alone_runs = 0;

 private:
  double alone_ipc(const PointParams& p, const SyntheticSpec& spec);
  std::map<std::string, double> alone_cache_;
};

/// Per-(mix, policy) comparison rows with improvements over the all-bank and
/// per-bank baselines, plus a geometric-mean summary row per policy.
void write_matrix_csv(std::ostream& os, Runner& runner, const PointParams& p,
                      const std::vector<WorkloadMix>& mixes,
                      const std::vector<Policy>& policies,
                      bool include_norefresh);

void write_density_sweep_csv(std::ostream& os, Runner& runner,
                             PointParams p,
                             const std::vector<WorkloadMix>& mixes,
                             const std::vector<Policy>& policies,
                             bool include_norefresh,
                             const std::vector<int>& densities);
void write_tfaw_sweep_csv(std::ostream& os, Runner& runner, PointParams p,
                          const std::vector<WorkloadMix>& mixes);
void write_subarray_sweep_csv(std::ostream& os, Runner& runner,
                              PointParams p,
                              const std::vector<WorkloadMix>& mixes);
void write_retention_sweep_csv(std::ostream& os, Runner& runner,
                               PointParams p,
                               const std::vector<WorkloadMix>& mixes,
                               const std::vector<Policy>& policies);
void write_intensity_sweep_csv(std::ostream& os, Runner& runner,
                               const PointParams& p, std::uint64_t mix_seed,
                               int per_category,
                               const std::vector<Policy>& policies);

}  // namespace refsim
