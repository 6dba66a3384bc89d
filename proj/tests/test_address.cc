#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "refsim/address.h"

using namespace refsim;

TEST_CASE("interleaved mapping stripes adjacent lines across channels") {
  const DramOrg org;  // 2 channels, 64-byte columns
  const DecodedAddr a = decode_address(0, org);
  const DecodedAddr b = decode_address(64, org);
  const DecodedAddr c = decode_address(128, org);
  CHECK(a.channel == 0);
  CHECK(b.channel == 1);
  CHECK(c.channel == 0);
  CHECK(a.row == 0);
  CHECK(b.row == 0);
  // Byte offset within a column does not change the coordinates.
  CHECK(decode_address(63, org) == a);
}

TEST_CASE("blocked mapping gives each channel a contiguous half") {
  const DramOrg org;
  const auto half = org.capacity_bytes() / 2;
  CHECK(decode_address(0, org, AddressMapping::kChannelBlocked).channel == 0);
  CHECK(decode_address(half - 1, org, AddressMapping::kChannelBlocked).channel ==
        0);
  CHECK(decode_address(half, org, AddressMapping::kChannelBlocked).channel == 1);
}

TEST_CASE("decode/encode round-trip over random addresses") {
  DramOrg org;
  org.channels = 2;
  org.ranks_per_channel = 2;
  org.banks_per_rank = 8;
  org.rows_per_bank = 65536;
  std::mt19937_64 rng(7);
  for (AddressMapping m :
       {AddressMapping::kChannelInterleaved, AddressMapping::kChannelBlocked}) {
    for (int i = 0; i < 2000; ++i) {
      const std::uint64_t addr = rng() % org.capacity_bytes();
      const DecodedAddr dec = decode_address(addr, org, m);
      CHECK(dec.channel < org.channels);
      CHECK(dec.rank < org.ranks_per_channel);
      CHECK(dec.bank < org.banks_per_rank);
      CHECK(dec.row < org.rows_per_bank);
      CHECK(dec.column < org.columns_per_row);
      CHECK(dec.subarray == subarray_of(dec.row, org));
      const std::uint64_t line =
          addr / org.column_width_bytes * org.column_width_bytes;
      CHECK(encode_address(dec, org, m) == line);
      CHECK(decode_address(encode_address(dec, org, m), org, m) == dec);
    }
  }
}

TEST_CASE("subarray index is the row's contiguous block") {
  DramOrg org;  // 65536 rows, 8 subarrays -> 8192 rows per subarray
  CHECK(subarray_of(0, org) == 0);
  CHECK(subarray_of(8191, org) == 0);
  CHECK(subarray_of(8192, org) == 1);
  CHECK(subarray_of(65535, org) == 7);
  CHECK_THROWS_AS(subarray_of(65536, org), ConfigError);
  CHECK_THROWS_AS(subarray_of(-1, org), ConfigError);
}

TEST_CASE("addresses beyond capacity are rejected") {
  const DramOrg org;
  CHECK_NOTHROW(decode_address(org.capacity_bytes() - 1, org));
  CHECK_THROWS_AS(decode_address(org.capacity_bytes(), org), ConfigError);
}

TEST_CASE("organization validation") {
  DramOrg org;
  CHECK_NOTHROW(org.validate());
  org.subarrays_per_bank = 3;
  CHECK_THROWS_AS(org.validate(), ConfigError);
  org.subarrays_per_bank = 8;
  org.rows_per_bank = 8191;
  CHECK_THROWS_AS(org.validate(), ConfigError);
  org.rows_per_bank = 65536;
  org.density_gbit = 12;
  CHECK_THROWS_AS(org.validate(), ConfigError);
}
