#include "refsim/controller.h"

#include <algorithm>
#include <cassert>

namespace refsim {
namespace {

constexpr Cycle kStarvationLimit = 1'000'000;

}  // namespace

ChannelController::ChannelController(int channel, const ControllerConfig& cfg,
                                     std::uint64_t seed)
    : channel_(channel), cfg_(cfg), dram_(cfg.org) {
  const int slots = cfg.org.ranks_per_channel * cfg.org.banks_per_rank;
  queues_.resize(slots);
  runs_.resize(slots);
  shadow_row_.assign(slots, 0);
  ranks_.resize(cfg.org.ranks_per_channel);
  if (!cfg.no_refresh) {
    for (int r = 0; r < cfg.org.ranks_per_channel; ++r) {
      // Decorrelate the per-rank RNG streams used by policy bank selection.
      const std::uint64_t rank_seed =
          seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(
                     channel * cfg.org.ranks_per_channel + r + 1);
      policies_.push_back(
          make_refresh_policy(cfg.policy, cfg.timing, cfg.org, rank_seed));
    }
  }
}

int ChannelController::pending_reads(int rank, int bank) const {
  const int slot = bank_slot(rank, bank);
  int n = static_cast<int>(queues_[slot].reads.size());
  if (runs_[slot].busy && !runs_[slot].is_write) ++n;
  return n;
}

int ChannelController::pending_writes(int rank, int bank) const {
  const int slot = bank_slot(rank, bank);
  int n = static_cast<int>(queues_[slot].writes.size());
  if (runs_[slot].busy && runs_[slot].is_write) ++n;
  return n;
}

ChannelController::Enqueue ChannelController::enqueue_read(
    Cycle now, std::uint8_t core, std::uint32_t read_id,
    const DecodedAddr& dec) {
  const int slot = bank_slot(dec.rank, dec.bank);
  // Write-hit forwarding: a queued write to the same column supplies the
  // data without touching DRAM.
  for (const Req& w : queues_[slot].writes) {
    if (w.row == dec.row && w.column == dec.column) {
      forwarded_pending_.push_back({now + 1, core, read_id});
      ++forwarded_reads;
      return Enqueue::kForwarded;
    }
  }
  if (read_occupancy_ >= cfg_.read_queue_cap) return Enqueue::kRejected;
  Req req;
  req.core = core;
  req.read_id = read_id;
  req.arrival = now;
  req.seq = next_seq_++;
  req.row = dec.row;
  req.column = dec.column;
  queues_[slot].reads.push_back(req);
  ++read_occupancy_;
  return Enqueue::kAccepted;
}

bool ChannelController::enqueue_write(Cycle now, std::uint8_t core,
                                      const DecodedAddr& dec) {
  if (write_occupancy_ >= cfg_.write_queue_cap) return false;
  const int slot = bank_slot(dec.rank, dec.bank);
  Req req;
  req.core = core;
  req.arrival = now;
  req.seq = next_seq_++;
  req.row = dec.row;
  req.column = dec.column;
  queues_[slot].writes.push_back(req);
  ++write_occupancy_;
  return true;
}

RankView ChannelController::make_view(int rank, Cycle now,
                                      bool demand_issuable) const {
  RankView view;
  view.rank = &dram_.ranks[rank];
  view.drain_mode = drain_;
  view.demand_issuable = demand_issuable;
  for (int b = 0; b < cfg_.org.banks_per_rank; ++b) {
    const int nr = pending_reads(rank, b);
    const int nw = pending_writes(rank, b);
    view.queued_reads[b] = nr;
    view.queued_writes[b] = nw;
    view.rank_reads += nr;
    view.rank_writes += nw;
  }
  (void)now;
  return view;
}

std::optional<ChannelController::PlannedCommand> ChannelController::pick_demand(
    Cycle now) {
  const int ranks = cfg_.org.ranks_per_channel;
  const int banks = cfg_.org.banks_per_rank;
  std::optional<PlannedCommand> best;
  std::uint64_t best_seq = 0;

  // Column commands first: finish every row already opened.
  for (int r = 0; r < ranks; ++r) {
    for (int b = 0; b < banks; ++b) {
      const int slot = bank_slot(r, b);
      const BankRun& run = runs_[slot];
      if (!run.busy) continue;
      if (dram_.ranks[r].banks[b].demand != BankState::Fsm::kActive) continue;
      if (best && run.req.seq >= best_seq) continue;
      Command cmd;
      cmd.cycle = now;
      cmd.kind = run.is_write ? CommandKind::kWrite : CommandKind::kRead;
      cmd.channel = channel_;
      cmd.rank = r;
      cmd.bank = b;
      cmd.row = run.req.row;
      cmd.subarray = subarray_of(run.req.row, cfg_.org);
      if (command_check(dram_, cmd, cfg_.timing, cfg_.org, cfg_.protocol) !=
          CommandCheck::kOk)
        continue;
      PlannedCommand plan;
      plan.cmd = cmd;
      plan.is_column = true;
      plan.is_write = run.is_write;
      plan.rank = r;
      plan.bank = b;
      best = plan;
      best_seq = run.req.seq;
    }
  }
  if (best) return best;

  // Activations: oldest eligible queue entry.  In drain mode new rows are
  // opened for writes; otherwise for reads.
  for (int r = 0; r < ranks; ++r) {
    const RankState& rank = dram_.ranks[r];
    if (!policies_.empty() && policies_[r]->blocks_rank(now)) continue;
    const bool refreshing = rank.refresh_in_flight(now);
    const int eff_trrd = refreshing ? cfg_.timing.tRRD_ref : cfg_.timing.tRRD;
    const int eff_tfaw = refreshing ? cfg_.timing.tFAW_ref : cfg_.timing.tFAW;
    if (now - rank.last_act < eff_trrd) continue;
    if (now - rank.oldest_act_in_window() < eff_tfaw) continue;
    for (int b = 0; b < banks; ++b) {
      const int slot = bank_slot(r, b);
      const BankState& bank = dram_.ranks[r].banks[b];
      if (runs_[slot].busy) continue;
      if (bank.demand != BankState::Fsm::kIdle) continue;
      if (!policies_.empty() && policies_[r]->blocks_bank(now, b)) continue;
      const std::deque<Req>& q =
          drain_ ? queues_[slot].writes : queues_[slot].reads;
      if (q.empty()) continue;
      const bool bank_refreshing = bank.refreshing_subarray >= 0;
      if (bank_refreshing && !cfg_.protocol.sarp) continue;
      // Pick the oldest entry whose target subarray is not being refreshed.
      std::size_t pick = q.size();
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (bank_refreshing &&
            subarray_of(q[i].row, cfg_.org) == bank.refreshing_subarray)
          continue;
        pick = i;
        break;
      }
      if (pick == q.size()) continue;
      const Req& req = q[pick];
      if (best && req.seq >= best_seq) continue;
      Command cmd;
      cmd.cycle = now;
      cmd.kind = CommandKind::kAct;
      cmd.channel = channel_;
      cmd.rank = r;
      cmd.bank = b;
      cmd.row = req.row;
      cmd.subarray = subarray_of(req.row, cfg_.org);
      if (command_check(dram_, cmd, cfg_.timing, cfg_.org, cfg_.protocol) !=
          CommandCheck::kOk)
        continue;
      PlannedCommand plan;
      plan.cmd = cmd;
      plan.is_column = false;
      plan.is_write = drain_;
      plan.rank = r;
      plan.bank = b;
      plan.queue_index = pick;
      best = plan;
      best_seq = req.seq;
    }
  }
  return best;
}

std::optional<ChannelController::RefreshPlan> ChannelController::plan_refresh(
    Cycle now, bool demand_issuable) {
  // Every rank's policy advances every cycle; at most one proposal issues.
  std::optional<RefreshPlan> first;
  for (int r = 0; r < cfg_.org.ranks_per_channel; ++r) {
    RefreshPolicy& pol = *policies_[r];
    const RankView view = make_view(r, now, demand_issuable);
    pol.advance(now, view);
    const std::optional<RefreshAction> action = pol.propose(now, view);
    if (!action) continue;
    Command cmd;
    cmd.cycle = now;
    cmd.kind = action->kind;
    cmd.channel = channel_;
    cmd.rank = r;
    cmd.bank = action->kind == CommandKind::kRefPb ? action->bank : 0;
    cmd.row = action->kind == CommandKind::kRefPb
                  ? shadow_row_[bank_slot(r, action->bank)]
                  : shadow_row_[bank_slot(r, 0)];
    cmd.subarray = subarray_of(cmd.row, cfg_.org);
    if (command_check(dram_, cmd, cfg_.timing, cfg_.org, cfg_.protocol) !=
        CommandCheck::kOk)
      continue;
    RefreshPlan plan;
    plan.cmd = cmd;
    plan.action = *action;
    plan.rank = r;
    plan.urgent = action->kind == CommandKind::kRefAb
                      ? pol.blocks_rank(now)
                      : pol.blocks_bank(now, action->bank);
    if (plan.urgent) return plan;  // forced refreshes win the bus outright
    if (!first) first = plan;
  }
  return first;
}

void ChannelController::issue_refresh(Cycle now, const RefreshPlan& plan) {
  apply_command(dram_, plan.cmd, cfg_.timing, cfg_.org, cfg_.protocol);
  policies_[plan.rank]->on_issue(now, plan.action);
  const int rpr = cfg_.org.rows_per_refresh();
  if (plan.action.kind == CommandKind::kRefAb) {
    for (int b = 0; b < cfg_.org.banks_per_rank; ++b) {
      int& row = shadow_row_[bank_slot(plan.rank, b)];
      row = (row + rpr) % cfg_.org.rows_per_bank;
    }
    ++ranks_[plan.rank].n_refab;
  } else {
    int& row = shadow_row_[bank_slot(plan.rank, plan.action.bank)];
    row = (row + rpr) % cfg_.org.rows_per_bank;
    ++ranks_[plan.rank].n_refpb;
  }
  if (cfg_.collect_logs) command_log_.push_back(plan.cmd);
  refresh_log_.push_back(plan.cmd);
}

void ChannelController::issue_demand(Cycle /*now*/, const PlannedCommand& plan,
                                     std::vector<CompletionEvent>& out) {
  const ApplyResult res =
      apply_command(dram_, plan.cmd, cfg_.timing, cfg_.org, cfg_.protocol);
  if (cfg_.collect_logs) command_log_.push_back(plan.cmd);
  const int slot = bank_slot(plan.rank, plan.bank);
  if (plan.is_column) {
    BankRun& run = runs_[slot];
    if (plan.is_write) {
      if (cfg_.collect_latencies)
        latencies_.push_back(
            {run.req.core, CommandKind::kWrite, run.req.arrival,
             res.data_ready});
      --write_occupancy_;
      ++ranks_[plan.rank].n_wr;
      ++served_writes;
    } else {
      out.push_back({res.data_ready, run.req.core, run.req.read_id});
      read_latency_sum += res.data_ready - run.req.arrival;
      if (cfg_.collect_latencies)
        latencies_.push_back(
            {run.req.core, CommandKind::kRead, run.req.arrival,
             res.data_ready});
      --read_occupancy_;
      ++ranks_[plan.rank].n_rd;
      ++served_reads;
    }
    run.busy = false;
  } else {
    std::deque<Req>& q =
        plan.is_write ? queues_[slot].writes : queues_[slot].reads;
    BankRun& run = runs_[slot];
    run.busy = true;
    run.is_write = plan.is_write;
    run.req = q[plan.queue_index];
    q.erase(q.begin() + static_cast<std::ptrdiff_t>(plan.queue_index));
    ++ranks_[plan.rank].n_act;
  }
}

void ChannelController::watch_starvation(Cycle now) {
  for (const BankQueues& q : queues_) {
    if (!q.reads.empty()) {
      const Cycle wait = now - q.reads.front().arrival;
      max_request_wait = std::max(max_request_wait, wait);
      if (wait > kStarvationLimit) ++starvation_breaches;
    }
    if (!q.writes.empty()) {
      const Cycle wait = now - q.writes.front().arrival;
      max_request_wait = std::max(max_request_wait, wait);
      if (wait > kStarvationLimit) ++starvation_breaches;
    }
  }
}

void ChannelController::tick(Cycle now, std::vector<CompletionEvent>& out) {
  sync_state(dram_, now, cfg_.org);

  if (!drain_ && write_occupancy_ > cfg_.drain_high) {
    drain_ = true;
    ++drain_entries;
  } else if (drain_ && write_occupancy_ <= cfg_.drain_low) {
    drain_ = false;
  }

  if (!forwarded_pending_.empty()) {
    out.insert(out.end(), forwarded_pending_.begin(), forwarded_pending_.end());
    forwarded_pending_.clear();
  }

  // Demand issuability is computed before consulting the policies (the
  // pull-in step needs it).  A legal refresh proposal takes the command bus
  // this cycle; policies that yield to demand do so by proposing nothing.
  const std::optional<PlannedCommand> demand = pick_demand(now);
  std::optional<RefreshPlan> refresh;
  if (!policies_.empty()) refresh = plan_refresh(now, demand.has_value());
  if (refresh) {
    issue_refresh(now, *refresh);
  } else if (demand) {
    issue_demand(now, *demand, out);
  }

  // Busy accounting runs after issue so that the issue cycle itself counts
  // (a refresh occupies exactly tRFC cycles of the rank).
  for (int r = 0; r < cfg_.org.ranks_per_channel; ++r) {
    const RankState& rank = dram_.ranks[r];
    bool active = rank.refresh_in_flight(now);
    if (active) ++ranks_[r].refresh_busy_cycles;
    if (!active) {
      for (int b = 0; b < cfg_.org.banks_per_rank && !active; ++b)
        active = rank.banks[b].demand != BankState::Fsm::kIdle;
    }
    if (active) ++ranks_[r].active_cycles;
  }

  if ((now & 1023) == 0) watch_starvation(now);
}

}  // namespace refsim
