// Whole-system simulation: cores driving per-channel controllers for a fixed
// number of controller cycles, with deterministic results for a given
// configuration and seed.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "refsim/address.h"
#include "refsim/controller.h"
#include "refsim/core.h"
#include "refsim/metrics.h"
#include "refsim/trace_gen.h"
#include "refsim/types.h"

namespace refsim {

struct SimConfig {
  DramOrg org;
  TimingParams timing;
  CurrentParams currents;
  PowerParams power;
  Policy policy = Policy::kRefAb;
  bool no_refresh = false;
  AddressMapping mapping = AddressMapping::kChannelInterleaved;

  int cores = 8;  ///< 0 is allowed: refresh-only run with no demand traffic
  Cycle sim_cycles = 2'000'000;
  int core_ratio = 6;  ///< core cycles per controller cycle
  CoreParams core_params;
  int read_queue_cap = 64;
  int write_queue_cap = 64;
  int drain_high = 48;
  int drain_low = 32;
  std::uint64_t seed = 1;

  /// Per-core synthetic workloads (size must equal `cores`), unless trace
  /// files are given instead.
  std::vector<SyntheticSpec> core_specs;
  std::vector<std::string> trace_files;
  std::size_t trace_records = 20000;

  bool collect_logs = false;
  bool collect_latencies = false;

  /// Throws ConfigError on inconsistencies (sizes, ranges).
  void validate() const;
};

struct RunResult {
  RunStats stats;
  EnergyBreakdown energy;
  TimingParams timing_used;  ///< includes refresh-pacing inflation if applied
  bool sarp_active = false;
  Cycle sim_start = 0;
  Cycle sim_end = 0;
  std::vector<Command> command_log;  ///< populated when collect_logs
  std::vector<Command> refresh_log;  ///< always populated
  std::vector<LatencyRecord> latencies;
};

/// Runs one simulation to completion.
RunResult run_simulation(const SimConfig& cfg);

/// Per-core seed derivation used when one spec is fanned out to many cores.
std::uint64_t core_seed(std::uint64_t base_seed, int core);

}  // namespace refsim
