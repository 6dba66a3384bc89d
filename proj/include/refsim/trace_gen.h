// Synthetic trace generation: memory intensity (MPKI), footprint,
// bank locality, and write fraction are all tunable and reproducible from a
// seed.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "refsim/address.h"
#include "refsim/core.h"
#include "refsim/types.h"

namespace refsim {

struct SyntheticSpec {
  double mpki = 10.0;            ///< read misses per kilo-instruction
  std::uint64_t footprint_bytes = 8ULL << 20;
  double bank_locality = 0.0;    ///< probability an access maps to the home bank
  double write_fraction = 0.3;   ///< probability a record carries a write
  std::uint64_t seed = 1;
};

/// Generates `n_records` trace records.  Accesses draw from a fixed set of
/// `footprint_bytes / 64` cache lines hashed across the whole address space;
/// with probability `bank_locality` an access is re-homed onto one
/// seed-derived (channel, rank, bank) triple.
std::vector<TraceRecord> generate_trace(const SyntheticSpec& spec,
                                        const DramOrg& org,
                                        AddressMapping mapping,
                                        std::size_t n_records);

/// Writes records in the text trace format (one `bubbles read [write]` line
/// per record, decimal).
void write_trace_file(const std::string& path,
                      const std::vector<TraceRecord>& records);

}  // namespace refsim
