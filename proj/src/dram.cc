#include "refsim/dram.h"

#include <algorithm>

namespace refsim {

ChannelState::ChannelState(const DramOrg& org) {
  ranks.resize(org.ranks_per_channel);
  for (auto& rank : ranks) rank.banks.resize(org.banks_per_rank);
}

const char* to_string(CommandCheck check) {
  switch (check) {
    case CommandCheck::kOk:
      return "ok";
    case CommandCheck::kBankNotIdle:
      return "bank not idle";
    case CommandCheck::kBankNotActive:
      return "no open row";
    case CommandCheck::kRowMismatch:
      return "open-row mismatch";
    case CommandCheck::kActToActRank:
      return "ACT-to-ACT interval below tRRD";
    case CommandCheck::kFourActWindow:
      return "fifth ACT within the tFAW window";
    case CommandCheck::kDataBusBusy:
      return "data burst overlap";
    case CommandCheck::kWriteToRead:
      return "read within tWTR of write data";
    case CommandCheck::kRefreshOverlap:
      return "refresh while refresh in flight";
    case CommandCheck::kRefreshConflict:
      return "refresh into an activated subarray";
    case CommandCheck::kSubarrayConflict:
      return "access to the refreshing subarray";
    case CommandCheck::kCounterMismatch:
      return "refresh row does not match the device counter";
    case CommandCheck::kBadCoordinates:
      return "coordinates outside the organization";
  }
  return "?";
}

void sync_state(ChannelState& ch, Cycle now, const DramOrg& org) {
  const int rows_per_refresh = org.rows_per_refresh();
  for (auto& rank : ch.ranks) {
    for (auto& bank : rank.banks) {
      if (bank.demand == BankState::Fsm::kActivating && now >= bank.active_at)
        bank.demand = BankState::Fsm::kActive;
      if (bank.demand == BankState::Fsm::kPrecharging && now >= bank.idle_at) {
        bank.demand = BankState::Fsm::kIdle;
        bank.active_row = -1;
      }
      if (bank.refreshing_subarray >= 0 && now >= bank.refresh_until) {
        bank.refreshing_subarray = -1;
        bank.refresh_row_counter =
            (bank.refresh_row_counter + rows_per_refresh) % org.rows_per_bank;
      }
    }
    if (rank.refpb_bank >= 0 && now >= rank.refpb_until) rank.refpb_bank = -1;
    if (rank.refab_until != 0 && now >= rank.refab_until) {
      rank.refab_until = 0;
      rank.local_row_counter += rows_per_refresh;
      if (rank.local_row_counter >= org.rows_per_subarray()) {
        rank.local_row_counter -= org.rows_per_subarray();
        rank.refresh_subarray_counter =
            (rank.refresh_subarray_counter + 1) % org.subarrays_per_bank;
      }
    }
  }
}

namespace {

// A bank may run a refresh alongside an activation only when subarray
// parallelization is on and the two target different subarrays.
bool refresh_conflicts_with_activation(const BankState& bank,
                                       const DramOrg& org,
                                       const ProtocolOptions& opt) {
  if (bank.demand == BankState::Fsm::kIdle) return false;
  if (!opt.sarp) return true;
  return subarray_of(bank.active_row, org) == bank.refresh_subarray(org);
}

}  // namespace

CommandCheck command_check(const ChannelState& ch, const Command& cmd,
                           const TimingParams& t, const DramOrg& org,
                           const ProtocolOptions& opt) {
  if (cmd.rank < 0 || cmd.rank >= org.ranks_per_channel || cmd.bank < 0 ||
      cmd.bank >= org.banks_per_rank || cmd.row < 0 ||
      cmd.row >= org.rows_per_bank)
    return CommandCheck::kBadCoordinates;

  const Cycle now = cmd.cycle;
  const RankState& rank = ch.ranks[cmd.rank];
  const BankState& bank = rank.banks[cmd.bank];
  const bool rank_refreshing = rank.refresh_in_flight(now);
  const int trrd = rank_refreshing ? t.tRRD_ref : t.tRRD;
  const int tfaw = rank_refreshing ? t.tFAW_ref : t.tFAW;

  switch (cmd.kind) {
    case CommandKind::kAct: {
      if (bank.demand != BankState::Fsm::kIdle)
        return CommandCheck::kBankNotIdle;
      if (bank.refreshing()) {
        if (!opt.sarp) return CommandCheck::kBankNotIdle;
        if (subarray_of(cmd.row, org) == bank.refreshing_subarray)
          return CommandCheck::kSubarrayConflict;
      }
      if (now - rank.last_act < trrd) return CommandCheck::kActToActRank;
      if (now - rank.oldest_act_in_window() < tfaw)
        return CommandCheck::kFourActWindow;
      return CommandCheck::kOk;
    }

    case CommandKind::kRead:
    case CommandKind::kWrite: {
      if (bank.demand != BankState::Fsm::kActive)
        return CommandCheck::kBankNotActive;
      if (bank.active_row != cmd.row) return CommandCheck::kRowMismatch;
      if (bank.refreshing() &&
          subarray_of(cmd.row, org) == bank.refreshing_subarray)
        return CommandCheck::kSubarrayConflict;
      const Cycle start =
          now + (cmd.kind == CommandKind::kRead ? t.tCL : t.tCWL);
      if (start < ch.bus_busy_until) return CommandCheck::kDataBusBusy;
      if (cmd.kind == CommandKind::kRead &&
          now < rank.last_write_data_end + t.tWTR)
        return CommandCheck::kWriteToRead;
      return CommandCheck::kOk;
    }

    case CommandKind::kPre:
      if (bank.demand != BankState::Fsm::kActive)
        return CommandCheck::kBankNotActive;
      return CommandCheck::kOk;

    case CommandKind::kRefAb: {
      if (rank_refreshing) return CommandCheck::kRefreshOverlap;
      for (const auto& b : rank.banks)
        if (refresh_conflicts_with_activation(b, org, opt))
          return opt.sarp ? CommandCheck::kRefreshConflict
                          : CommandCheck::kBankNotIdle;
      if (cmd.row != rank.banks[0].refresh_row_counter)
        return CommandCheck::kCounterMismatch;
      return CommandCheck::kOk;
    }

    case CommandKind::kRefPb: {
      if (rank_refreshing) return CommandCheck::kRefreshOverlap;
      if (refresh_conflicts_with_activation(bank, org, opt))
        return opt.sarp ? CommandCheck::kRefreshConflict
                        : CommandCheck::kBankNotIdle;
      if (cmd.row != bank.refresh_row_counter)
        return CommandCheck::kCounterMismatch;
      return CommandCheck::kOk;
    }
  }
  return CommandCheck::kBadCoordinates;
}

ApplyResult apply_command(ChannelState& ch, const Command& cmd,
                          const TimingParams& t, const DramOrg& org,
                          const ProtocolOptions&) {
  const Cycle now = cmd.cycle;
  RankState& rank = ch.ranks[cmd.rank];
  BankState& bank = rank.banks[cmd.bank];
  ApplyResult result;

  switch (cmd.kind) {
    case CommandKind::kAct:
      bank.demand = BankState::Fsm::kActivating;
      bank.active_row = cmd.row;
      bank.active_at = now + t.tRCD;
      bank.last_act = now;
      rank.last_act = now;
      rank.act_window[rank.act_window_pos] = now;
      rank.act_window_pos = (rank.act_window_pos + 1) & 3;
      break;

    case CommandKind::kRead: {
      const Cycle end = now + t.tCL + t.tBURST;
      ch.bus_busy_until = end;
      const Cycle pre_start =
          std::max(now + Cycle{t.tRTP}, bank.last_act + Cycle{t.tRAS});
      bank.idle_at = pre_start + t.tRP;
      bank.demand = BankState::Fsm::kPrecharging;
      result.data_ready = end;
      break;
    }

    case CommandKind::kWrite: {
      const Cycle end = now + t.tCWL + t.tBURST;
      ch.bus_busy_until = end;
      rank.last_write_data_end = end;
      const Cycle pre_start =
          std::max(end + Cycle{t.tWR}, bank.last_act + Cycle{t.tRAS});
      bank.idle_at = pre_start + t.tRP;
      bank.demand = BankState::Fsm::kPrecharging;
      result.data_ready = end;
      break;
    }

    case CommandKind::kPre:
      bank.idle_at = std::max(now, bank.last_act + Cycle{t.tRAS}) + t.tRP;
      bank.demand = BankState::Fsm::kPrecharging;
      break;

    case CommandKind::kRefAb:
      rank.refab_until = now + t.tRFCab;
      for (auto& b : rank.banks) {
        b.refreshing_subarray = b.refresh_subarray(org);
        b.refresh_until = now + t.tRFCab;
      }
      break;

    case CommandKind::kRefPb:
      bank.refreshing_subarray = bank.refresh_subarray(org);
      bank.refresh_until = now + t.tRFCpb;
      rank.refpb_bank = cmd.bank;
      rank.refpb_until = now + t.tRFCpb;
      break;
  }
  return result;
}

}  // namespace refsim
