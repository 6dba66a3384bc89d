#include "refsim/address.h"

#include <array>

namespace refsim {
namespace {

enum class Field { kChannel, kRank, kBank, kRow, kColumn };

// Low -> high order of coordinate fields (after the column byte offset).
using FieldOrder = std::array<Field, 5>;

FieldOrder field_order(AddressMapping mapping) {
  switch (mapping) {
    case AddressMapping::kChannelInterleaved:
      return {Field::kChannel, Field::kBank, Field::kRank, Field::kColumn,
              Field::kRow};
    case AddressMapping::kChannelBlocked:
      return {Field::kBank, Field::kRank, Field::kColumn, Field::kRow,
              Field::kChannel};
  }
  throw ConfigError("unknown address mapping");
}

std::uint64_t field_size(Field f, const DramOrg& org) {
  switch (f) {
    case Field::kChannel:
      return org.channels;
    case Field::kRank:
      return org.ranks_per_channel;
    case Field::kBank:
      return org.banks_per_rank;
    case Field::kRow:
      return org.rows_per_bank;
    case Field::kColumn:
      return org.columns_per_row;
  }
  return 1;
}

int& field_ref(Field f, DecodedAddr& dec) {
  switch (f) {
    case Field::kChannel:
      return dec.channel;
    case Field::kRank:
      return dec.rank;
    case Field::kBank:
      return dec.bank;
    case Field::kRow:
      return dec.row;
    case Field::kColumn:
      return dec.column;
  }
  throw ConfigError("unknown address field");
}

int field_val(Field f, const DecodedAddr& dec) {
  switch (f) {
    case Field::kChannel:
      return dec.channel;
    case Field::kRank:
      return dec.rank;
    case Field::kBank:
      return dec.bank;
    case Field::kRow:
      return dec.row;
    case Field::kColumn:
      return dec.column;
  }
  throw ConfigError("unknown address field");
}

}  // namespace

const char* to_string(AddressMapping mapping) {
  switch (mapping) {
    case AddressMapping::kChannelInterleaved:
      return "channel_interleaved";
    case AddressMapping::kChannelBlocked:
      return "channel_blocked";
  }
  return "?";
}

std::optional<AddressMapping> address_mapping_from_string(
    std::string_view name) {
  if (name == "channel_interleaved") return AddressMapping::kChannelInterleaved;
  if (name == "channel_blocked") return AddressMapping::kChannelBlocked;
  return std::nullopt;
}

DecodedAddr decode_address(std::uint64_t addr, const DramOrg& org,
                           AddressMapping mapping) {
  if (addr >= org.capacity_bytes())
    throw ConfigError("address " + std::to_string(addr) + " beyond capacity");
  std::uint64_t unit = addr / org.column_width_bytes;
  DecodedAddr dec;
  for (Field f : field_order(mapping)) {
    std::uint64_t size = field_size(f, org);
    field_ref(f, dec) = static_cast<int>(unit % size);
    unit /= size;
  }
  dec.subarray = subarray_of(dec.row, org);
  return dec;
}

std::uint64_t encode_address(const DecodedAddr& dec, const DramOrg& org,
                             AddressMapping mapping) {
  const FieldOrder order = field_order(mapping);
  std::uint64_t unit = 0;
  for (int i = 4; i >= 0; --i) {
    Field f = order[i];
    std::uint64_t size = field_size(f, org);
    auto v = static_cast<std::uint64_t>(field_val(f, dec));
    if (field_val(f, dec) < 0 || v >= size)
      throw ConfigError("coordinate out of range");
    unit = unit * size + v;
  }
  return unit * org.column_width_bytes;
}

}  // namespace refsim
