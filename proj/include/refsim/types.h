// Shared value types for the refresh-mechanism simulator: DRAM organization,
// timing parameters, decoded addresses, commands, and the policy taxonomy.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace refsim {

/// Controller clock cycle count. Signed so that "long before the start of
/// time" sentinels ( kFarPast ) behave under subtraction.
using Cycle = std::int64_t;

inline constexpr Cycle kFarPast = -(1LL << 40);

/// Raised for invalid organization/timing/experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised for malformed trace/log/mix input files.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

enum class CommandKind : std::uint8_t {
  kAct,    ///< row activation
  kRead,   ///< column read (auto-precharge under the closed-row policy)
  kWrite,  ///< column write (auto-precharge under the closed-row policy)
  kPre,    ///< explicit precharge (unused by the scheduler; legal in logs)
  kRefAb,  ///< all-bank refresh, locks every bank of the rank for tRFCab
  kRefPb,  ///< per-bank refresh, locks one bank for tRFCpb
};

const char* to_string(CommandKind kind);
std::optional<CommandKind> command_kind_from_string(std::string_view name);

/// One DRAM command as it appears on a channel's command bus (and in the
/// command/refresh logs). Column addresses are irrelevant to protocol
/// legality, so commands carry bank/row coordinates only.
struct Command {
  Cycle cycle = 0;  ///< issue cycle, controller clock
  CommandKind kind = CommandKind::kAct;
  int channel = 0;
  int rank = 0;
  int bank = 0;  ///< REFab is logged once per rank with bank 0 by convention
  int row = 0;   ///< ACT/RD/WR: target row; REFab/REFpb: first refreshed row
  int subarray = 0;  ///< subarray of `row`
};

// ---------------------------------------------------------------------------
// Organization
// ---------------------------------------------------------------------------

/// Physical organization of the simulated memory system. The per-device
/// density (Gbit) selects refresh latencies; the geometry below is the
/// simulated address space and is deliberately independent of it.
struct DramOrg {
  int channels = 2;
  int ranks_per_channel = 2;
  int banks_per_rank = 8;
  int subarrays_per_bank = 8;   ///< power of two dividing rows_per_bank
  int rows_per_bank = 65536;    ///< must be a multiple of 8192 refresh bins
  int columns_per_row = 128;
  int column_width_bytes = 64;  ///< one cache line per column access
  int density_gbit = 8;         ///< 8, 16, or 32; drives tRFC selection

  /// Throws ConfigError when any field is out of range or inconsistent.
  void validate() const;

  int rows_per_subarray() const { return rows_per_bank / subarrays_per_bank; }
  /// Rows restored by one refresh command in one bank (8192 commands cover
  /// the whole bank once per retention window).
  int rows_per_refresh() const { return rows_per_bank / 8192; }
  int banks_per_channel() const { return ranks_per_channel * banks_per_rank; }
  std::uint64_t rows_total() const {
    return static_cast<std::uint64_t>(channels) * ranks_per_channel *
           banks_per_rank * rows_per_bank;
  }
  std::uint64_t capacity_bytes() const {
    return rows_total() * columns_per_row * column_width_bytes;
  }
};

/// Subarray index of a row: rows are contiguous blocks per subarray.
int subarray_of(int row, const DramOrg& org);

// ---------------------------------------------------------------------------
// Timing
// ---------------------------------------------------------------------------

enum class RefreshMode { kAllBank, kPerBank };

/// DDR4-style fine-granularity refresh: more frequent, shorter all-bank
/// refreshes (tREFI / {2,4}, tRFC / {1.35,1.63}).
enum class FgrMode { kOff, kX2, kX4 };

/// All values in controller clock cycles unless suffixed _ns. Defaults are
/// the DDR3-1333 base grade used throughout; derive_timing() fills the
/// refresh-rate dependent fields.
struct TimingParams {
  double tck_ns = 1.5;  ///< controller/DRAM command clock period

  int tRCD = 9;    ///< ACT to column command
  int tRP = 9;     ///< precharge latency
  int tCL = 9;     ///< read column command to first data
  int tCWL = 7;    ///< write column command to first data
  int tRAS = 24;   ///< ACT to internal precharge, minimum
  int tRC = 33;    ///< ACT to ACT, same bank (= tRAS + tRP)
  int tWR = 10;    ///< write recovery after last write data
  int tWTR = 5;    ///< end of write data to read command, same rank
  int tRTP = 5;    ///< read command to internal precharge
  int tBURST = 4;  ///< data burst length on the bus (BL8, DDR)
  int tRRD = 4;    ///< ACT to ACT, same rank
  int tFAW = 20;   ///< rolling window for at most four ACTs per rank

  Cycle tREFI = 0;    ///< refresh command interval (all-bank cadence)
  Cycle tREFIpb = 0;  ///< per-bank refresh cadence (tREFI / banks)
  int tRFCab = 0;     ///< all-bank refresh latency
  int tRFCpb = 0;     ///< per-bank refresh latency

  /// ACT pacing while any refresh is in flight in the rank. Equal to
  /// tRRD/tFAW unless refresh-access parallelization is enabled, in which
  /// case sarp_scaled_constraints() inflates them to cap peak current.
  int tRRD_ref = 4;
  int tFAW_ref = 20;

  double retention_ms = 32.0;  ///< full-array refresh period
  double tREFI_ns = 0.0;       ///< exact pre-rounding value
  double tRFCab_ns = 0.0;      ///< exact pre-rounding value

  /// Throws ConfigError on inconsistent values (e.g. tRC != tRAS + tRP, or
  /// per-bank latency drifting more than one cycle from the 2.3x ratio).
  void validate() const;

  Cycle ns_to_cycles(double ns) const;        ///< ceiling conversion
  Cycle retention_cycles() const;             ///< retention_ms in cycles
};

/// Peak-current model used to scale ACT pacing during parallelized refresh.
/// Values are relative; only ratios matter.
struct CurrentParams {
  double i_act = 100.0;     ///< current draw of one row activation
  double i_ref_ab = 440.0;  ///< all-bank refresh draw (~4.4 activations)
  double i_ref_pb = 55.2;   ///< per-bank refresh draw (~0.55 activations)
};

// ---------------------------------------------------------------------------
// Refresh policies
// ---------------------------------------------------------------------------

enum class Policy {
  kRefAb,    ///< baseline all-bank refresh at every tREFI
  kRefPb,    ///< baseline per-bank refresh, strict round-robin
  kElastic,  ///< all-bank refresh scheduled into predicted idle periods
  kDarp,     ///< out-of-order per-bank refresh + write-drain parallelization
  kSarpAb,   ///< all-bank refresh with subarray-level access parallelization
  kSarpPb,   ///< round-robin per-bank refresh with subarray parallelization
  kDsarp,    ///< kDarp scheduling combined with kSarpPb parallelization
  kFgr2x,    ///< fine-granularity refresh, 2x rate
  kFgr4x,    ///< fine-granularity refresh, 4x rate
};

const char* to_string(Policy policy);
std::optional<Policy> policy_from_string(std::string_view name);

/// Whether the policy issues per-bank (vs all-bank) refresh commands.
RefreshMode refresh_mode(Policy policy);
/// Whether the policy serves accesses to idle subarrays of a refreshing bank.
bool sarp_enabled(Policy policy);
FgrMode fgr_mode(Policy policy);

}  // namespace refsim
