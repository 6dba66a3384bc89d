// Physical address <-> DRAM coordinate mapping. Mappings are bijections over
// the configured capacity, built from an ordered list of coordinate fields
// (least significant first).
#pragma once

#include <cstdint>

#include "refsim/types.h"

namespace refsim {

enum class AddressMapping {
  /// column-offset, channel, bank, rank, column-high, row (low -> high).
  /// Adjacent lines stripe across channels then banks; rows occupy the top
  /// bits so a working set spans few rows per bank.
  kChannelInterleaved,
  /// column-offset, bank, rank, column-high, row, channel (low -> high).
  /// Each channel owns a contiguous half of the address space.
  kChannelBlocked,
};

const char* to_string(AddressMapping mapping);
std::optional<AddressMapping> address_mapping_from_string(std::string_view name);

/// Coordinates of one column access. `subarray` is derived from `row`.
struct DecodedAddr {
  int channel = 0;
  int rank = 0;
  int bank = 0;
  int row = 0;
  int column = 0;
  int subarray = 0;

  bool operator==(const DecodedAddr&) const = default;
};

/// Splits a byte address into DRAM coordinates. Throws ConfigError when the
/// address lies beyond org.capacity_bytes().
DecodedAddr decode_address(std::uint64_t addr, const DramOrg& org,
                           AddressMapping mapping =
                               AddressMapping::kChannelInterleaved);

/// Inverse of decode_address (up to the byte offset within a column, which
/// decode discards); returns the address of the column's first byte.
std::uint64_t encode_address(const DecodedAddr& dec, const DramOrg& org,
                             AddressMapping mapping =
                                 AddressMapping::kChannelInterleaved);

}  // namespace refsim
