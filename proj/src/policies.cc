#include "refsim/policies.h"

#include <algorithm>
#include <random>

namespace refsim {

void DebtCounters::init(int bank_count, Cycle first_deadline_stagger,
                        Cycle tick_interval) {
  banks = bank_count;
  interval = tick_interval;
  debt.fill(0);
  min_seen = max_seen = 0;
  for (int b = 0; b < banks; ++b)
    next_deadline[b] = first_deadline_stagger > 0
                           ? (b + 1) * first_deadline_stagger
                           : tick_interval;
}

void DebtCounters::advance(Cycle now) {
  for (int b = 0; b < banks; ++b) {
    while (now >= next_deadline[b]) {
      next_deadline[b] += interval;
      max_seen = std::max(max_seen, ++debt[b]);
    }
  }
}

void DebtCounters::on_refresh(int bank) {
  min_seen = std::min(min_seen, --debt[bank]);
}

namespace {

// Baseline all-bank refresh (also FGR rates and the all-bank parallelized
// variant): one REFab per tREFI, deferred only until legal, never skipped.
// The rank is drained immediately at the deadline (grace = 0) for the plain
// baseline; the parallelized variant keeps serving accesses during a short
// grace window first, since it usually does not need the banks idle.
class AllBankPolicy : public RefreshPolicy {
 public:
  AllBankPolicy(const TimingParams& t, const DramOrg& org, Cycle drain_grace)
      : drain_grace_(drain_grace) {
    debt_.init(org.banks_per_rank, 0, t.tREFI);
    next_deadline_ = t.tREFI;
  }

  void advance(Cycle now, const RankView&) override {
    debt_.advance(now);
    while (now >= next_deadline_) {
      next_deadline_ += debt_.interval;
      ++pending_;
    }
  }

  std::optional<RefreshAction> propose(Cycle /*now*/,
                                       const RankView&) override {
    if (pending_ == 0) return std::nullopt;
    return RefreshAction{CommandKind::kRefAb, 0,
                         RefreshAction::Origin::kScheduled};
  }

  void on_issue(Cycle, const RefreshAction&) override {
    --pending_;
    for (int b = 0; b < debt_.banks; ++b) debt_.on_refresh(b);
  }

  bool blocks_rank(Cycle now) const override {
    return pending_ > 0 && now >= oldest_due() + drain_grace_;
  }

  const DebtCounters* debt() const override { return &debt_; }

 private:
  Cycle oldest_due() const { return next_deadline_ - pending_ * debt_.interval; }

  DebtCounters debt_;
  Cycle next_deadline_ = 0;
  Cycle drain_grace_ = 0;
  int pending_ = 0;
};

// Elastic refresh: postpone an all-bank refresh (up to eight) whenever the
// rank has pending demand, then slip postponed refreshes into predicted
// idle periods; the first few wait out a delay sized so that only idle
// periods longer than tRFCab absorb a refresh.
class ElasticPolicy : public RefreshPolicy {
 public:
  ElasticPolicy(const TimingParams& t, const DramOrg& org)
      : trfc_ab_(t.tRFCab) {
    debt_.init(org.banks_per_rank, 0, t.tREFI);
    next_deadline_ = t.tREFI;
  }

  void advance(Cycle now, const RankView& view) override {
    debt_.advance(now);
    while (now >= next_deadline_) {
      next_deadline_ += debt_.interval;
      ++postponed_;
    }
    const bool idle = view.rank_reads == 0 && !view.drain_mode;
    if (idle && idle_start_ < 0) {
      idle_start_ = now;
      idle_delay_ = std::max<Cycle>(
          0, static_cast<Cycle>(predictor_.predict()) - trfc_ab_);
    } else if (!idle && idle_start_ >= 0) {
      predictor_.update(static_cast<double>(now - idle_start_));
      idle_start_ = -1;
    }
  }

  std::optional<RefreshAction> propose(Cycle now, const RankView&) override {
    if (postponed_ == 0) return std::nullopt;
    const Cycle oldest_due = next_deadline_ - postponed_ * debt_.interval;
    auto origin = now > oldest_due ? RefreshAction::Origin::kPostponed
                                   : RefreshAction::Origin::kScheduled;
    if (postponed_ >= 8)  // out of slack: issue regardless of demand
      return RefreshAction{CommandKind::kRefAb, 0, origin};
    if (idle_start_ < 0) return std::nullopt;
    const Cycle delay = postponed_ >= 4 ? 0 : idle_delay_;
    if (now < idle_start_ + delay) return std::nullopt;
    return RefreshAction{CommandKind::kRefAb, 0, origin};
  }

  void on_issue(Cycle, const RefreshAction& action) override {
    --postponed_;
    for (int b = 0; b < debt_.banks; ++b) debt_.on_refresh(b);
    if (action.origin == RefreshAction::Origin::kPostponed)
      ++postponed_issued;
  }

  bool blocks_rank(Cycle) const override { return postponed_ >= 8; }
  const DebtCounters* debt() const override { return &debt_; }

 private:
  DebtCounters debt_;
  IdlePredictor predictor_;
  Cycle next_deadline_ = 0;
  Cycle trfc_ab_ = 0;
  Cycle idle_start_ = -1;
  Cycle idle_delay_ = 0;
  int postponed_ = 0;
};

// Baseline per-bank refresh: strict round-robin bank order, each bank on
// its own staggered tREFI cadence (deadline-driven, so the long-run rate
// never drifts from the deadline schedule), one refresh in flight per rank,
// deferred only until the target bank can legally accept it.
class RoundRobinPbPolicy : public RefreshPolicy {
 public:
  RoundRobinPbPolicy(const TimingParams& t, const DramOrg& org) {
    debt_.init(org.banks_per_rank, t.tREFIpb, t.tREFI);
  }

  void advance(Cycle now, const RankView&) override { debt_.advance(now); }

  std::optional<RefreshAction> propose(Cycle now, const RankView& view) override {
    if (debt_.debt[rr_bank_] < 1) return std::nullopt;
    if (view.rank->refresh_in_flight(now)) return std::nullopt;
    return RefreshAction{CommandKind::kRefPb, rr_bank_,
                         RefreshAction::Origin::kScheduled};
  }

  void on_issue(Cycle, const RefreshAction& action) override {
    debt_.on_refresh(action.bank);
    rr_bank_ = (rr_bank_ + 1) % debt_.banks;
  }

  bool blocks_bank(Cycle, int bank) const override {
    return bank == rr_bank_ && debt_.debt[bank] >= 1;
  }

  const DebtCounters* debt() const override { return &debt_; }

 private:
  DebtCounters debt_;
  int rr_bank_ = 0;
};

// Out-of-order per-bank refresh. Outside write drains: skip a bank's
// deadline while it has demand (up to eight per bank), repay or pull in
// refreshes on cycles where no demand command can issue, picking uniformly
// among banks with no read backlog and pull-in credit. During write drains:
// refresh the bank with the smallest backlog in parallel with the writes.
// A bank that exhausts its postponement slack is refreshed at the first
// legal cycle, ahead of demand.
class DarpPolicy : public RefreshPolicy {
 public:
  DarpPolicy(const TimingParams& t, const DramOrg& org, std::uint64_t seed)
      : rng_(seed) {
    debt_.init(org.banks_per_rank, t.tREFIpb, t.tREFI);
  }

  void advance(Cycle now, const RankView&) override { debt_.advance(now); }

  std::optional<RefreshAction> propose(Cycle now, const RankView& view) override {
    if (view.rank->refresh_in_flight(now)) return std::nullopt;
    for (int b = 0; b < debt_.banks; ++b)  // forced: slack exhausted
      if (debt_.debt[b] >= 8)
        return RefreshAction{CommandKind::kRefPb, b,
                             RefreshAction::Origin::kPostponed};
    if (view.drain_mode) {
      const int bank = wrp_select(debt_, view);
      if (bank < 0) return std::nullopt;
      return RefreshAction{CommandKind::kRefPb, bank, origin_for(bank)};
    }
    if (view.demand_issuable) return std::nullopt;  // demand first
    int candidates[kMaxBanks];
    int n = 0;
    for (int b = 0; b < debt_.banks; ++b)
      if (view.queued_reads[b] == 0 && debt_.debt[b] > -8) candidates[n++] = b;
    if (n == 0) return std::nullopt;
    const int bank = candidates[rng_() % n];
    return RefreshAction{CommandKind::kRefPb, bank, origin_for(bank)};
  }

  void on_issue(Cycle, const RefreshAction& action) override {
    debt_.on_refresh(action.bank);
    if (action.origin == RefreshAction::Origin::kPulledIn)
      ++pulled_in_issued;
    else
      ++postponed_issued;
  }

  bool blocks_bank(Cycle, int bank) const override {
    return debt_.debt[bank] >= 8;
  }

  const DebtCounters* debt() const override { return &debt_; }

 private:
  RefreshAction::Origin origin_for(int bank) const {
    return debt_.debt[bank] > 0 ? RefreshAction::Origin::kPostponed
                                : RefreshAction::Origin::kPulledIn;
  }

  DebtCounters debt_;
  std::mt19937_64 rng_;
};

}  // namespace

int wrp_select(const DebtCounters& debt, const RankView& view) {
  int best = -1;
  int best_count = 0;
  for (int b = 0; b < debt.banks; ++b) {
    if (debt.debt[b] <= -8) continue;
    const int count = view.queued_reads[b] + view.queued_writes[b];
    if (best < 0 || count < best_count) {
      best = b;
      best_count = count;
    }
  }
  return best;
}

std::unique_ptr<RefreshPolicy> make_refresh_policy(Policy policy,
                                                   const TimingParams& timing,
                                                   const DramOrg& org,
                                                   std::uint64_t seed) {
  switch (policy) {
    case Policy::kRefAb:
    case Policy::kFgr2x:
    case Policy::kFgr4x:
      return std::make_unique<AllBankPolicy>(timing, org, 0);
    case Policy::kSarpAb:
      // Parallelized all-bank refresh rarely needs idle banks; give demand
      // a grace window before draining the rank to force legality.
      return std::make_unique<AllBankPolicy>(timing, org, timing.tRFCab);
    case Policy::kElastic:
      return std::make_unique<ElasticPolicy>(timing, org);
    case Policy::kRefPb:
    case Policy::kSarpPb:
      return std::make_unique<RoundRobinPbPolicy>(timing, org);
    case Policy::kDarp:
    case Policy::kDsarp:
      return std::make_unique<DarpPolicy>(timing, org, seed);
  }
  throw ConfigError("unknown refresh policy");
}

}  // namespace refsim
