#include "refsim/trace_gen.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

namespace refsim {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

}  // namespace

std::vector<TraceRecord> generate_trace(const SyntheticSpec& spec,
                                        const DramOrg& org,
                                        AddressMapping mapping,
                                        std::size_t n_records) {
  if (!(spec.mpki > 0.0)) throw ConfigError("mpki must be positive");
  const std::uint64_t line_bytes =
      static_cast<std::uint64_t>(org.column_width_bytes);
  if (spec.footprint_bytes < line_bytes)
    throw ConfigError("footprint smaller than one cache line");
  if (spec.bank_locality < 0.0 || spec.bank_locality > 1.0)
    throw ConfigError("bank_locality must be in [0,1]");
  if (spec.write_fraction < 0.0 || spec.write_fraction > 1.0)
    throw ConfigError("write_fraction must be in [0,1]");

  std::mt19937_64 rng(spec.seed);
  const std::uint64_t capacity = org.capacity_bytes();
  const std::uint64_t total_lines = capacity / line_bytes;
  std::uint64_t lines = spec.footprint_bytes / line_bytes;
  if (lines > total_lines) lines = total_lines;
  const std::uint64_t salt = splitmix64(spec.seed ^ 0x5eed5a17u);

  // Home bank for locality-directed accesses.
  const std::uint64_t home = splitmix64(spec.seed ^ 0x48304d45ULL);
  const int home_channel = static_cast<int>(home % org.channels);
  const int home_rank =
      static_cast<int>((home >> 8) % org.ranks_per_channel);
  const int home_bank = static_cast<int>((home >> 16) % org.banks_per_rank);

  // Mean bubble run keeps MPKI: each record is (bubbles + 1 read +
  // write_fraction writes) instructions, so reads/instruction = mpki/1000.
  const double mean_bubbles =
      std::max(0.0, 1000.0 / spec.mpki - 1.0 - spec.write_fraction);
  const std::uint64_t bubble_span =
      static_cast<std::uint64_t>(std::llround(2.0 * mean_bubbles)) + 1;

  auto pick_addr = [&]() -> std::uint64_t {
    const std::uint64_t line = rng() % lines;
    std::uint64_t addr =
        (splitmix64(line ^ salt) % total_lines) * line_bytes;
    if (spec.bank_locality > 0.0 && u01(rng) < spec.bank_locality) {
      DecodedAddr dec = decode_address(addr, org, mapping);
      dec.channel = home_channel;
      dec.rank = home_rank;
      dec.bank = home_bank;
      addr = encode_address(dec, org, mapping);
    }
    return addr;
  };

  std::vector<TraceRecord> out;
  out.reserve(n_records);
  for (std::size_t i = 0; i < n_records; ++i) {
    TraceRecord rec;
    rec.bubbles = static_cast<std::int64_t>(rng() % bubble_span);
    rec.read_addr = pick_addr();
    rec.has_write = u01(rng) < spec.write_fraction;
    if (rec.has_write) rec.write_addr = pick_addr();
    out.push_back(rec);
  }
  return out;
}

void write_trace_file(const std::string& path,
                      const std::vector<TraceRecord>& records) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open trace file for write: " + path);
  for (const TraceRecord& rec : records) {
    out << rec.bubbles << ' ' << rec.read_addr;
    if (rec.has_write) out << ' ' << rec.write_addr;
    out << '\n';
  }
}

}  // namespace refsim
