// Derivation of refresh-rate dependent timing from device density, retention
// window, refresh granularity, and the current-model scaling for refresh-access
// parallelization.
#pragma once

#include <utility>

#include "refsim/types.h"

namespace refsim {

/// Builds the full timing set for one configuration.
///
/// - tREFI derives from the retention window spread over 8192 refresh
///   commands (32 ms -> 3906.25 ns), tightened by the FGR factor (2x, 4x).
/// - tRFCab is the density-dependent all-bank refresh latency
///   (8 Gb: 350 ns, 16 Gb: 530 ns, 32 Gb: 890 ns), shortened by the FGR
///   latency factor (1.35 at 2x, 1.63 at 4x).
/// - tRFCpb is tRFCab / 2.3 rounded to the nearest whole cycle.
/// - Nanosecond values convert to cycles by ceiling division with tck_ns.
///
/// FGR applies to all-bank refresh only; requesting it with per-bank mode
/// throws ConfigError, as do unsupported densities/retention windows.
TimingParams derive_timing(int density_gbit, double retention_ms,
                           RefreshMode mode, FgrMode fgr = FgrMode::kOff,
                           double tck_ns = 1.5);

/// ACT pacing while a refresh is in flight, scaled so that peak current with
/// refresh + parallel activations stays within the four-ACT envelope:
///   overhead = (4 * i_act + i_ref) / (4 * i_act)
///   tFAW_ref = ceil(tFAW * overhead), tRRD_ref = ceil(tRRD * overhead)
/// where i_ref is the draw of the refresh kind being parallelized with.
/// Returns {tFAW_ref, tRRD_ref}.
std::pair<int, int> sarp_scaled_constraints(const TimingParams& t,
                                            const CurrentParams& c,
                                            RefreshMode mode);

}  // namespace refsim
