// Refresh scheduling policies. A policy instance manages one rank: it tracks
// nominal refresh deadlines and per-bank debt, and each cycle may propose one
// refresh command. The controller issues the proposal if it is legal and the
// command bus is free, then commits it back via on_issue(); an unissued
// proposal carries no side effects and is simply re-proposed later.
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>

#include "refsim/dram.h"
#include "refsim/types.h"

namespace refsim {

/// A refresh command the policy wants issued this cycle.
struct RefreshAction {
  enum class Origin : std::uint8_t {
    kScheduled,  ///< on its nominal deadline (baseline cadence)
    kPostponed,  ///< repaying a previously skipped deadline
    kPulledIn,   ///< issued ahead of schedule into an idle period
  };
  CommandKind kind = CommandKind::kRefPb;
  int bank = 0;  ///< ignored for all-bank refresh
  Origin origin = Origin::kScheduled;
};

/// Per-bank refresh debt: deadlines elapsed minus refreshes issued. The
/// nominal schedule gives every bank one deadline per tREFI; per-bank
/// schedules stagger bank b's first deadline at (b + 1) * tREFIpb so the
/// round-robin baseline meets each deadline exactly.
struct DebtCounters {
  std::array<int, kMaxBanks> debt{};
  std::array<Cycle, kMaxBanks> next_deadline{};
  int banks = 0;
  Cycle interval = 0;
  int min_seen = 0;
  int max_seen = 0;

  void init(int bank_count, Cycle first_deadline_stagger, Cycle tick_interval);
  /// Processes all deadlines up to and including `now`.
  void advance(Cycle now);
  /// Records one refresh issued to `bank`.
  void on_refresh(int bank);
};

/// Exponentially weighted moving average of rank idle-period lengths,
/// alpha = 1/8. Starts from zero history.
struct IdlePredictor {
  double value = 0.0;
  void update(double observed) { value += (observed - value) / 8.0; }
  double predict() const { return value; }
};

/// What a policy can see of its rank each cycle.
struct RankView {
  const RankState* rank = nullptr;
  std::array<int, kMaxBanks> queued_reads{};   ///< backlog per bank
  std::array<int, kMaxBanks> queued_writes{};  ///< backlog per bank
  int rank_reads = 0;
  int rank_writes = 0;
  bool drain_mode = false;       ///< channel is draining its write queue
  bool demand_issuable = false;  ///< some demand command could issue now
};

class RefreshPolicy {
 public:
  virtual ~RefreshPolicy() = default;

  /// Deadline/debt bookkeeping; call exactly once per cycle, before propose.
  virtual void advance(Cycle now, const RankView& view) = 0;
  /// At most one refresh the policy wants issued this cycle.
  virtual std::optional<RefreshAction> propose(Cycle now,
                                               const RankView& view) = 0;
  /// Commit: the controller issued the proposed action.
  virtual void on_issue(Cycle now, const RefreshAction& action) = 0;

  /// Demand hold-off: when a mandatory refresh is pending, new activations
  /// to the affected bank/rank are held so the refresh can become legal.
  virtual bool blocks_rank(Cycle /*now*/) const { return false; }
  virtual bool blocks_bank(Cycle /*now*/, int /*bank*/) const { return false; }

  virtual const DebtCounters* debt() const { return nullptr; }
  std::uint64_t postponed_issued = 0;
  std::uint64_t pulled_in_issued = 0;
};

/// Builds the policy driving one rank. The returned object assumes
/// `timing` already carries the policy's refresh cadence (FGR included).
std::unique_ptr<RefreshPolicy> make_refresh_policy(Policy policy,
                                                   const TimingParams& timing,
                                                   const DramOrg& org,
                                                   std::uint64_t seed);

/// Write-refresh parallelization selection: the bank with the smallest
/// read + write backlog among banks with pull-in credit (debt > -8), ties
/// to the lowest index; -1 when no bank qualifies.
int wrp_select(const DebtCounters& debt, const RankView& view);

}  // namespace refsim
