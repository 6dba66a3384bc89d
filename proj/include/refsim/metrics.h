// Multi-programmed performance metrics and the DRAM energy model.
#pragma once

#include <cstdint>
#include <vector>

#include "refsim/types.h"

namespace refsim {

/// Counters kept per rank for the energy model and refresh accounting.
struct RankCounters {
  std::uint64_t n_act = 0;
  std::uint64_t n_rd = 0;
  std::uint64_t n_wr = 0;
  std::uint64_t n_refab = 0;
  std::uint64_t n_refpb = 0;
  Cycle active_cycles = 0;        ///< >= 1 bank busy or refreshing
  Cycle refresh_busy_cycles = 0;  ///< a refresh in flight in the rank
};

struct CoreStats {
  std::uint64_t instructions = 0;
  std::uint64_t cycles = 0;  ///< core cycles
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  double ipc = 0.0;
};

/// Everything a finished run reports.
struct RunStats {
  Cycle sim_cycles = 0;
  std::vector<CoreStats> cores;
  std::vector<RankCounters> ranks;  ///< channel-major order
  std::uint64_t reads_served = 0;
  std::uint64_t writes_served = 0;
  std::uint64_t reads_forwarded = 0;
  std::uint64_t n_refab = 0;
  std::uint64_t n_refpb = 0;
  std::uint64_t postponed_refreshes = 0;
  std::uint64_t pulled_in_refreshes = 0;
  Cycle refresh_busy_cycles = 0;  ///< summed over ranks
  int debt_min = 0;
  int debt_max = 0;
  std::uint64_t starvation_breaches = 0;
  Cycle max_request_wait = 0;
  double avg_read_latency = 0.0;  ///< DRAM-served reads, in cycles
  std::uint64_t drain_entries = 0;
};

/// Sum of per-core speedups over a private-memory baseline.  Throws
/// std::invalid_argument on size mismatch, empty input, or non-positive
/// baseline IPC.
double weighted_speedup(const std::vector<double>& shared_ipc,
                        const std::vector<double>& alone_ipc);

/// N / sum(alone/shared): the harmonic mean of per-core speedups.  Shared
/// IPCs must be positive.
double harmonic_speedup(const std::vector<double>& shared_ipc,
                        const std::vector<double>& alone_ipc);

/// Largest per-core slowdown, max(alone/shared).
double max_slowdown(const std::vector<double>& shared_ipc,
                    const std::vector<double>& alone_ipc);

/// Geometric mean of positive values.
double gmean(const std::vector<double>& values);

/// IDD-style current parameters (mA) and supply voltage (V).
struct PowerParams {
  double vdd = 1.5;
  double idd0 = 55.0;    ///< one ACT-PRE cycle average
  double idd2n = 32.0;   ///< precharge standby
  double idd3n = 38.0;   ///< active standby
  double idd4r = 157.0;  ///< read burst
  double idd4w = 128.0;  ///< write burst
  double idd5b = 215.0;  ///< refresh
};

struct EnergyBreakdown {
  double background_nj = 0.0;
  double activate_nj = 0.0;
  double read_nj = 0.0;
  double write_nj = 0.0;
  double refresh_nj = 0.0;
  double total_nj() const {
    return background_nj + activate_nj + read_nj + write_nj + refresh_nj;
  }
};

/// Charge-based energy over a run.  Background current switches between
/// active and precharge standby by each rank's busy fraction; activate
/// energy is the IDD0 cycle net of the standby floor; read/write bursts and
/// refreshes add their increments over active standby.  A per-bank refresh
/// is charged 1/8 of an all-bank refresh.
EnergyBreakdown dram_energy(const std::vector<RankCounters>& ranks,
                            Cycle sim_cycles, const TimingParams& t,
                            const PowerParams& p);

/// Total energy divided by served reads+writes; throws std::invalid_argument
/// when there were no accesses.
double energy_per_access_nj(const EnergyBreakdown& e,
                            std::uint64_t accesses);

}  // namespace refsim
