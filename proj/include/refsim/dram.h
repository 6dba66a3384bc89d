// DRAM bank/rank/channel state machine: command legality and application
// under the closed-row policy, including per-bank refresh, all-bank refresh,
// and subarray-level refresh-access parallelization.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "refsim/types.h"

namespace refsim {

inline constexpr int kMaxBanks = 16;

/// State of one bank. The demand path (activate/read/write/precharge) and
/// the refresh path are orthogonal: they can overlap only when subarray
/// parallelization is enabled and target different subarrays.
struct BankState {
  enum class Fsm : std::uint8_t {
    kIdle,         ///< precharged, ready for ACT or refresh
    kActivating,   ///< ACT issued, row open after tRCD
    kActive,       ///< row open, ready for a column command
    kPrecharging,  ///< auto/explicit precharge in flight
    kRefreshing,   ///< refresh in flight and demand path idle
  };

  Fsm demand = Fsm::kIdle;     ///< demand-path stage (never kRefreshing)
  int active_row = -1;         ///< row targeted by the current activation
  Cycle active_at = 0;         ///< when kActivating becomes kActive
  Cycle idle_at = 0;           ///< when kPrecharging becomes kIdle
  Cycle last_act = kFarPast;   ///< issue cycle of the most recent ACT

  int refreshing_subarray = -1;   ///< -1 when no refresh in flight
  Cycle refresh_until = 0;        ///< refresh completion cycle
  int refresh_row_counter = 0;    ///< next row this bank will refresh

  /// Collapsed view: kRefreshing while a refresh is in flight and the
  /// demand path is idle, else the demand-path stage.
  Fsm fsm() const {
    return refreshing_subarray >= 0 && demand == Fsm::kIdle ? Fsm::kRefreshing
                                                            : demand;
  }
  bool refreshing() const { return refreshing_subarray >= 0; }
  /// Position of this bank's refresh pointer as (subarray, local row).
  int refresh_subarray(const DramOrg& org) const {
    return refresh_row_counter / org.rows_per_subarray();
  }
  int refresh_local_row(const DramOrg& org) const {
    return refresh_row_counter % org.rows_per_subarray();
  }
};

/// State of one rank: banks plus rank-wide ACT pacing and refresh tracking.
struct RankState {
  std::vector<BankState> banks;

  std::array<Cycle, 4> act_window{kFarPast, kFarPast, kFarPast, kFarPast};
  int act_window_pos = 0;     ///< ring index of the oldest recorded ACT
  Cycle last_act = kFarPast;  ///< most recent ACT in the rank

  int refpb_bank = -1;        ///< bank of the per-bank refresh in flight
  Cycle refpb_until = 0;
  Cycle refab_until = 0;      ///< all-bank refresh completion (0 = none)

  Cycle last_write_data_end = kFarPast;  ///< for write-to-read turnaround

  /// All-bank refresh position (meaningful while banks move in lockstep).
  int refresh_subarray_counter = 0;
  int local_row_counter = 0;

  bool refresh_in_flight(Cycle now) const {
    return refab_until > now || (refpb_bank >= 0 && refpb_until > now);
  }
  Cycle oldest_act_in_window() const { return act_window[act_window_pos]; }
};

/// State of one channel: its ranks plus the shared data bus.
struct ChannelState {
  explicit ChannelState(const DramOrg& org);

  std::vector<RankState> ranks;
  Cycle bus_busy_until = 0;    ///< end of the latest scheduled data burst
  Cycle last_cmd_cycle = kFarPast;  ///< command bus: one command per cycle
};

/// Reasons a command is illegal at a given cycle. kOk means legal.
enum class CommandCheck : std::uint8_t {
  kOk,
  kBankNotIdle,       ///< ACT/refresh needs the demand path idle
  kBankNotActive,     ///< column command without an open row
  kRowMismatch,       ///< column command to a different row than the open one
  kActToActRank,      ///< violates tRRD (rank ACT-to-ACT)
  kFourActWindow,     ///< fifth ACT inside the tFAW window
  kDataBusBusy,       ///< data burst would overlap an earlier one
  kWriteToRead,       ///< read issued within tWTR of the last write data
  kRefreshOverlap,    ///< refresh while another refresh is in flight
  kRefreshConflict,   ///< refresh targets a subarray with an open activation
  kSubarrayConflict,  ///< access targets the subarray being refreshed
  kCounterMismatch,   ///< refresh row disagrees with the device row counter
  kBadCoordinates,    ///< channel/rank/bank/row outside the organization
};

const char* to_string(CommandCheck check);

/// Modal switches that change legality rules.
struct ProtocolOptions {
  /// Accesses to non-refreshing subarrays of a refreshing bank are legal,
  /// with tRRD_ref/tFAW_ref pacing while any refresh is in flight.
  bool sarp = false;
};

/// Advances lazily-timed state to `now`: completes activations, precharges
/// and refreshes whose latency has elapsed (refresh completion advances the
/// bank's refresh row counter).
void sync_state(ChannelState& ch, Cycle now, const DramOrg& org);

/// Checks whether `cmd` may issue at cmd.cycle given state synced to that
/// cycle. Does not modify state. Command-bus occupancy (one command per
/// channel per cycle) is checked by the caller/verifier, not here.
CommandCheck command_check(const ChannelState& ch, const Command& cmd,
                           const TimingParams& t, const DramOrg& org,
                           const ProtocolOptions& opt);

inline bool command_legal(const ChannelState& ch, const Command& cmd,
                          const TimingParams& t, const DramOrg& org,
                          const ProtocolOptions& opt) {
  return command_check(ch, cmd, t, org, opt) == CommandCheck::kOk;
}

/// Side effects of applying a command.
struct ApplyResult {
  Cycle data_ready = 0;  ///< RD/WR: cycle the burst finishes (else 0)
};

/// Applies a legal command at cmd.cycle. Callers are expected to have
/// checked legality first; apply itself only updates state.
ApplyResult apply_command(ChannelState& ch, const Command& cmd,
                          const TimingParams& t, const DramOrg& org,
                          const ProtocolOptions& opt);

}  // namespace refsim
