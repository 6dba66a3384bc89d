// INI-style experiment configuration: [section] headers with key=value
// lines, `#` or `;` comments.  Produces a fully expanded SimConfig.
#pragma once

#include <string>
#include <string_view>

#include "refsim/sim.h"

namespace refsim {

/// Parses configuration text.  Unknown sections or keys, malformed values,
/// and inconsistent results raise ConfigError (with a line number) or
/// ParseError.  All keys are optional; defaults mirror SimConfig.
///
/// Sections and keys:
///   [dram]     channels, ranks, banks, subarrays, rows, columns,
///              line_bytes, density_gbit, retention_ms, tck_ns
///   [timing]   trcd trp tcl tcwl tras twr twtr trtp tburst trrd tfaw
///              (cycle overrides; trc tracks tras + trp)
///   [currents] i_act, i_ref_ab, i_ref_pb
///   [power]    vdd, idd0, idd2n, idd3n, idd4r, idd4w, idd5b
///   [sim]      policy, no_refresh, mapping, cores, sim_cycles, core_ratio,
///              issue_width, window, mshrs, read_queue, write_queue,
///              drain_high, drain_low, seed, collect_logs, collect_latencies
///   [workload] mpki (single value or one per core, comma separated),
///              footprint_mb, bank_locality, write_fraction, trace_records,
///              traces (comma-separated files, overrides synthetic)
SimConfig parse_sim_config(std::string_view text);

SimConfig load_sim_config(const std::string& path);

}  // namespace refsim
