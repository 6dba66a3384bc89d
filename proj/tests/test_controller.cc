#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <vector>

#include "doctest.h"
#include "refsim/controller.h"
#include "refsim/timing.h"
#include "refsim/verify.h"

using namespace refsim;

namespace {

DramOrg one_rank_org() {
  DramOrg org;
  org.channels = 1;
  org.ranks_per_channel = 1;
  org.banks_per_rank = 8;
  org.subarrays_per_bank = 8;
  org.rows_per_bank = 65536;
  return org;
}

ControllerConfig base_config(Policy policy, bool no_refresh) {
  ControllerConfig cfg;
  cfg.org = one_rank_org();
  cfg.timing = derive_timing(8, 32.0, refresh_mode(policy));
  cfg.protocol.sarp = sarp_enabled(policy);
  cfg.policy = policy;
  cfg.no_refresh = no_refresh;
  return cfg;
}

DecodedAddr at(int bank, int row, int column = 0) {
  DecodedAddr dec;
  dec.bank = bank;
  dec.row = row;
  dec.column = column;
  dec.subarray = row / 8192;
  return dec;
}

struct Rig {
  explicit Rig(Policy policy, bool no_refresh = true)
      : cfg(base_config(policy, no_refresh)), mc(0, cfg, 1) {}

  void run_to(Cycle end) {
    for (; now < end; ++now) mc.tick(now, out);
  }

  ControllerConfig cfg;
  ChannelController mc;
  std::vector<CompletionEvent> out;
  Cycle now = 0;
};

std::vector<Cycle> completion_cycles(const std::vector<CompletionEvent>& out) {
  std::vector<Cycle> cycles;
  for (const auto& ev : out) cycles.push_back(ev.cycle);
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

}  // namespace

TEST_CASE("a lone read takes activate + column + data latency") {
  Rig rig(Policy::kRefAb);
  REQUIRE(rig.mc.enqueue_read(0, 3, 77, at(0, 5)) ==
          ChannelController::Enqueue::kAccepted);
  rig.run_to(40);

  REQUIRE(rig.out.size() == 1);
  CHECK(rig.out[0].cycle == 22);  // ACT@0, RD@9, tCL 9 + burst 4
  CHECK(rig.out[0].core == 3);
  CHECK(rig.out[0].read_id == 77);
  CHECK(rig.mc.served_reads == 1);
  CHECK(rig.mc.read_latency_sum == 22);

  REQUIRE(rig.mc.latencies().size() == 1);
  CHECK(rig.mc.latencies()[0].kind == CommandKind::kRead);
  CHECK(rig.mc.latencies()[0].arrival == 0);
  CHECK(rig.mc.latencies()[0].completion == 22);

  REQUIRE(rig.mc.command_log().size() == 2);
  CHECK(rig.mc.command_log()[0].kind == CommandKind::kAct);
  CHECK(rig.mc.command_log()[0].cycle == 0);
  CHECK(rig.mc.command_log()[1].kind == CommandKind::kRead);
  CHECK(rig.mc.command_log()[1].cycle == 9);
}

TEST_CASE("closed-row scheduling interleaves banks and reopens rows") {
  Rig rig(Policy::kRefAb);
  rig.mc.enqueue_read(0, 0, 0, at(0, 5));
  rig.mc.enqueue_read(0, 0, 1, at(0, 9));  // same bank: needs a second ACT
  rig.mc.enqueue_read(0, 0, 2, at(1, 5));  // other bank: can go early
  rig.run_to(80);

  const auto& log = rig.mc.command_log();
  REQUIRE(log.size() == 6);
  auto expect = [&](int i, Cycle cycle, CommandKind kind, int bank) {
    CAPTURE(i);
    CHECK(log[i].cycle == cycle);
    CHECK(log[i].kind == kind);
    CHECK(log[i].bank == bank);
  };
  expect(0, 0, CommandKind::kAct, 0);
  expect(1, 4, CommandKind::kAct, 1);   // tRRD-spaced, younger but ready
  expect(2, 9, CommandKind::kRead, 0);
  expect(3, 13, CommandKind::kRead, 1);
  expect(4, 33, CommandKind::kAct, 0);  // bank 0 precharged at 33
  expect(5, 42, CommandKind::kRead, 0);

  CHECK(completion_cycles(rig.out) == std::vector<Cycle>{22, 26, 55});
  CHECK(verify_command_log(log, rig.cfg.timing, rig.cfg.org).empty());
}

TEST_CASE("reads are forwarded from a queued write to the same column") {
  Rig rig(Policy::kRefAb);
  REQUIRE(rig.mc.enqueue_write(0, 1, at(0, 5, 7)));
  CHECK(rig.mc.enqueue_read(0, 2, 11, at(0, 5, 7)) ==
        ChannelController::Enqueue::kForwarded);
  // A different column of the same row is not a hit.
  CHECK(rig.mc.enqueue_read(0, 2, 12, at(0, 5, 8)) ==
        ChannelController::Enqueue::kAccepted);

  rig.run_to(2);
  CHECK(rig.mc.forwarded_reads == 1);
  REQUIRE(!rig.out.empty());
  CHECK(rig.out[0].cycle == 1);  // forwarded data arrives the next cycle
  CHECK(rig.out[0].read_id == 11);
}

TEST_CASE("queue capacity is enforced") {
  Rig rig(Policy::kRefAb);
  for (int i = 0; i < 64; ++i)
    REQUIRE(rig.mc.enqueue_write(0, 0, at(i % 8, i)));
  CHECK(!rig.mc.enqueue_write(0, 0, at(0, 999)));

  for (int i = 0; i < 64; ++i)
    REQUIRE(rig.mc.enqueue_read(0, 0, static_cast<std::uint32_t>(i),
                                at(i % 8, 1000 + i)) ==
            ChannelController::Enqueue::kAccepted);
  CHECK(rig.mc.enqueue_read(0, 0, 999, at(0, 2000)) ==
        ChannelController::Enqueue::kRejected);
}

TEST_CASE("write drain starts above the high mark and stops at the low mark") {
  Rig rig(Policy::kRefAb);
  for (int i = 0; i < 49; ++i)  // one above drain_high = 48
    REQUIRE(rig.mc.enqueue_write(0, 0, at(i % 8, i)));
  CHECK(!rig.mc.drain_mode());

  rig.run_to(1);
  CHECK(rig.mc.drain_mode());
  CHECK(rig.mc.drain_entries == 1);

  rig.run_to(3000);
  CHECK(!rig.mc.drain_mode());
  // Drain serves down to the low mark (32); banks that had already opened a
  // write row finish it after the mode flips back.
  CHECK(rig.mc.served_writes >= 17);
  CHECK(rig.mc.served_writes <= 24);
  CHECK(rig.mc.write_occupancy() ==
        49 - static_cast<int>(rig.mc.served_writes));
  CHECK(rig.mc.drain_entries == 1);
  CHECK(verify_command_log(rig.mc.command_log(), rig.cfg.timing, rig.cfg.org)
            .empty());
}

namespace {

/// Keeps every bank supplied with reads for `cycles` ticks and returns the
/// controller for inspection.
struct SaturatedRun {
  explicit SaturatedRun(Policy policy, Cycle cycles)
      : cfg(base_config(policy, false)), mc(0, cfg, 7) {
    std::vector<CompletionEvent> out;
    int next_row = 0;
    for (Cycle now = 0; now < cycles; ++now) {
      while (mc.read_occupancy() < 32) {
        const int bank = next_row % 8;
        const int row = (next_row / 8) % 65536;
        if (mc.enqueue_read(now, 0, static_cast<std::uint32_t>(next_row),
                            at(bank, row)) !=
            ChannelController::Enqueue::kAccepted)
          break;
        ++next_row;
      }
      mc.tick(now, out);
      out.clear();
    }
  }

  ControllerConfig cfg;
  ChannelController mc;
};

}  // namespace

TEST_CASE("per-bank refresh costs less read throughput than all-bank") {
  const Cycle window = 60'000;
  SaturatedRun refab(Policy::kRefAb, window);
  SaturatedRun refpb(Policy::kRefPb, window);

  CHECK(refab.mc.rank_counters()[0].n_refab == 23);  // deadlines at k * 2605
  CHECK(refpb.mc.rank_counters()[0].n_refpb >= 8 * 22);
  CHECK(refpb.mc.served_reads > refab.mc.served_reads);

  for (const auto* run : {&refab, &refpb}) {
    const auto violations = verify_command_log(
        run->mc.command_log(), run->cfg.timing, run->cfg.org,
        run->cfg.protocol);
    CHECK(violations.empty());
  }
}

TEST_CASE("the controller's refresh-row shadow tracks the device counters") {
  SaturatedRun run(Policy::kRefPb, 20'000);
  std::vector<CompletionEvent> out;
  // Quiesce: let in-flight refreshes complete and state sync.
  for (Cycle now = 20'000; now < 21'000; ++now) run.mc.tick(now, out);

  const auto& rank = run.mc.dram_state().ranks[0];
  int total = 0;
  for (int b = 0; b < 8; ++b) {
    CHECK(run.mc.shadow_refresh_row(0, b) == rank.banks[b].refresh_row_counter);
    total += rank.banks[b].refresh_row_counter;
  }
  const int rpr = run.cfg.org.rows_per_refresh();
  CHECK(total ==
        rpr * static_cast<int>(run.mc.rank_counters()[0].n_refpb));
}

TEST_CASE("refresh busy cycles count the full refresh latency") {
  Rig rig(Policy::kRefAb, /*no_refresh=*/false);
  rig.run_to(3000);  // one tREFI (2605) plus the full tRFCab (234)
  CHECK(rig.mc.rank_counters()[0].n_refab == 1);
  CHECK(rig.mc.rank_counters()[0].refresh_busy_cycles == 234);
}

TEST_CASE("subarray parallelization serves a younger non-conflicting read") {
  Rig rig(Policy::kSarpPb, /*no_refresh=*/false);
  rig.run_to(330);  // bank 0's first refresh issues at tREFIpb = 325

  REQUIRE(rig.mc.refresh_log().size() == 1);
  const Command ref = rig.mc.refresh_log()[0];
  CHECK(ref.cycle == 325);
  CHECK(ref.bank == 0);
  CHECK(ref.subarray == 0);
  const Cycle ref_end = ref.cycle + rig.cfg.timing.tRFCpb;  // 427

  rig.mc.enqueue_read(rig.now, 0, 1, at(0, 64));    // older, refreshing subarray
  rig.mc.enqueue_read(rig.now, 0, 2, at(0, 8192));  // younger, subarray 1
  rig.run_to(600);

  std::vector<Command> acts;
  for (const Command& cmd : rig.mc.command_log())
    if (cmd.kind == CommandKind::kAct) acts.push_back(cmd);
  REQUIRE(acts.size() == 2);
  CHECK(acts[0].row == 8192);  // younger read goes first, during the refresh
  CHECK(acts[0].cycle < ref_end);
  CHECK(acts[1].row == 64);  // conflicting read waits for the refresh
  CHECK(acts[1].cycle >= ref_end);

  const auto violations =
      verify_command_log(rig.mc.command_log(), rig.cfg.timing, rig.cfg.org,
                         rig.cfg.protocol);
  CHECK(violations.empty());
}
