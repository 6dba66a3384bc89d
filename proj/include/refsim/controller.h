// Per-channel memory controller: FR-FCFS scheduling under the closed-row
// policy, read/write queues with drain-mode hysteresis, write-hit read
// forwarding, and refresh policy integration (one command per channel per
// cycle, refresh and demand competing for the command bus).
#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <vector>

#include "refsim/address.h"
#include "refsim/dram.h"
#include "refsim/metrics.h"
#include "refsim/policies.h"
#include "refsim/types.h"

namespace refsim {

/// One served request, for the latency export.
struct LatencyRecord {
  std::uint8_t core = 0;
  CommandKind kind = CommandKind::kRead;  ///< kRead or kWrite
  Cycle arrival = 0;
  Cycle completion = 0;
};

/// Read data delivered back to a core.
struct CompletionEvent {
  Cycle cycle = 0;
  std::uint8_t core = 0;
  std::uint32_t read_id = 0;
};

struct ControllerConfig {
  DramOrg org;
  TimingParams timing;
  ProtocolOptions protocol;
  Policy policy = Policy::kRefAb;
  bool no_refresh = false;
  int read_queue_cap = 64;
  int write_queue_cap = 64;
  int drain_high = 48;  ///< write occupancy that starts a drain
  int drain_low = 32;   ///< write occupancy that ends a drain
  bool collect_logs = true;
  bool collect_latencies = true;
};

class ChannelController {
 public:
  ChannelController(int channel, const ControllerConfig& cfg,
                    std::uint64_t seed);

  enum class Enqueue { kAccepted, kForwarded, kRejected };

  /// Queues a read; kForwarded when a queued write to the same column
  /// serves it without DRAM access (completion next cycle), kRejected when
  /// the read queue is full.
  Enqueue enqueue_read(Cycle now, std::uint8_t core, std::uint32_t read_id,
                       const DecodedAddr& dec);
  /// Queues a write; false when the write queue is full.
  bool enqueue_write(Cycle now, std::uint8_t core, const DecodedAddr& dec);

  /// One controller cycle: issues at most one command on the channel and
  /// appends any read completions (including forwarded hits) to `out`.
  void tick(Cycle now, std::vector<CompletionEvent>& out);

  int read_occupancy() const { return read_occupancy_; }
  int write_occupancy() const { return write_occupancy_; }
  bool drain_mode() const { return drain_; }

  const std::vector<Command>& command_log() const { return command_log_; }
  const std::vector<Command>& refresh_log() const { return refresh_log_; }
  const std::vector<LatencyRecord>& latencies() const { return latencies_; }
  const std::vector<RankCounters>& rank_counters() const { return ranks_; }
  const ChannelState& dram_state() const { return dram_; }
  const RefreshPolicy* policy(int rank) const {
    return policies_.empty() ? nullptr : policies_[rank].get();
  }
  /// Controller-side copy of a bank's next refresh row (device shadow).
  int shadow_refresh_row(int rank, int bank) const {
    return shadow_row_[rank * cfg_.org.banks_per_rank + bank];
  }

  std::uint64_t served_reads = 0;
  std::uint64_t served_writes = 0;
  std::uint64_t forwarded_reads = 0;
  std::uint64_t drain_entries = 0;
  Cycle read_latency_sum = 0;  ///< arrival-to-data cycles, DRAM-served reads
  Cycle max_request_wait = 0;       ///< longest queue-head wait observed
  std::uint64_t starvation_breaches = 0;  ///< heads waiting > 1M cycles

 private:
  struct Req {
    std::uint8_t core = 0;
    std::uint32_t read_id = 0;
    Cycle arrival = 0;
    std::uint64_t seq = 0;  ///< FCFS order within the channel
    int row = 0;
    int column = 0;
  };
  struct BankQueues {
    std::deque<Req> reads;
    std::deque<Req> writes;
  };
  /// Request whose ACT has issued and whose column command is pending.
  struct BankRun {
    bool busy = false;
    bool is_write = false;
    Req req;
  };
  struct PlannedCommand {
    Command cmd;
    bool is_column = false;
    bool is_write = false;
    int rank = 0;
    int bank = 0;
    std::size_t queue_index = 0;  ///< ACT: position within the bank queue
  };
  struct RefreshPlan {
    Command cmd;
    RefreshAction action;
    int rank = 0;
    bool urgent = false;  ///< the policy is in its forced/blocking state
  };

  int bank_slot(int rank, int bank) const {
    return rank * cfg_.org.banks_per_rank + bank;
  }
  int pending_reads(int rank, int bank) const;
  int pending_writes(int rank, int bank) const;
  RankView make_view(int rank, Cycle now, bool demand_issuable) const;
  std::optional<PlannedCommand> pick_demand(Cycle now);
  std::optional<RefreshPlan> plan_refresh(Cycle now, bool demand_issuable);
  void issue_refresh(Cycle now, const RefreshPlan& plan);
  void issue_demand(Cycle now, const PlannedCommand& plan,
                    std::vector<CompletionEvent>& out);
  void watch_starvation(Cycle now);

  int channel_;
  ControllerConfig cfg_;
  ChannelState dram_;
  std::vector<BankQueues> queues_;  ///< indexed by bank_slot
  std::vector<BankRun> runs_;
  std::vector<int> shadow_row_;
  std::vector<std::unique_ptr<RefreshPolicy>> policies_;
  std::vector<RankCounters> ranks_;
  std::vector<Command> command_log_;
  std::vector<Command> refresh_log_;
  std::vector<LatencyRecord> latencies_;
  std::vector<CompletionEvent> forwarded_pending_;
  int read_occupancy_ = 0;
  int write_occupancy_ = 0;
  bool drain_ = false;
  std::uint64_t next_seq_ = 0;
};

}  // namespace refsim
