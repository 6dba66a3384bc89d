#include "refsim/sim.h"

#include <algorithm>
#include <queue>

#include "refsim/timing.h"

namespace refsim {
namespace {

struct HeapEvent {
  Cycle cycle;
  std::uint8_t core;
  std::uint32_t read_id;
  std::uint64_t order;  ///< insertion order, for deterministic ties
  bool operator>(const HeapEvent& o) const {
    if (cycle != o.cycle) return cycle > o.cycle;
    return order > o.order;
  }
};

/// Routes core requests to the owning channel controller.
class SimPort : public MemoryPort {
 public:
  SimPort(std::vector<ChannelController>& controllers, const DramOrg& org,
          AddressMapping mapping)
      : controllers_(controllers), org_(org), mapping_(mapping),
        capacity_(org.capacity_bytes()) {}

  void set_cycle(Cycle now) { now_ = now; }

  bool issue_read(std::uint8_t core, std::uint32_t read_id,
                  std::uint64_t addr) override {
    const DecodedAddr dec = decode_address(addr % capacity_, org_, mapping_);
    const ChannelController::Enqueue res =
        controllers_[dec.channel].enqueue_read(now_, core, read_id, dec);
    return res != ChannelController::Enqueue::kRejected;
  }

  bool issue_write(std::uint8_t core, std::uint64_t addr) override {
    const DecodedAddr dec = decode_address(addr % capacity_, org_, mapping_);
    return controllers_[dec.channel].enqueue_write(now_, core, dec);
  }

 private:
  std::vector<ChannelController>& controllers_;
  const DramOrg& org_;
  AddressMapping mapping_;
  std::uint64_t capacity_;
  Cycle now_ = 0;
};

}  // namespace

std::uint64_t core_seed(std::uint64_t base_seed, int core) {
  std::uint64_t x = base_seed + 0x9e3779b97f4a7c15ULL *
                                    (static_cast<std::uint64_t>(core) + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void SimConfig::validate() const {
  org.validate();
  timing.validate();
  if (cores < 0 || cores > 64) throw ConfigError("cores out of range");
  if (sim_cycles <= 0) throw ConfigError("sim_cycles must be positive");
  if (core_ratio < 1 || core_ratio > 64)
    throw ConfigError("core_ratio out of range");
  if (core_params.issue_width < 1 || core_params.window_size < 1 ||
      core_params.mshrs < 1)
    throw ConfigError("core parameters must be positive");
  if (read_queue_cap < 1 || write_queue_cap < 1)
    throw ConfigError("queue capacities must be positive");
  if (drain_low >= drain_high)
    throw ConfigError("drain_low must be below drain_high");
  if (drain_high > write_queue_cap)
    throw ConfigError("drain_high exceeds write queue capacity");
  if (cores > 0 && trace_files.empty() &&
      core_specs.size() != static_cast<std::size_t>(cores))
    throw ConfigError("need one synthetic spec per core");
  if (!trace_files.empty() &&
      trace_files.size() != static_cast<std::size_t>(cores))
    throw ConfigError("need one trace file per core");
}

RunResult run_simulation(const SimConfig& cfg) {
  cfg.validate();

  RunResult result;
  TimingParams timing = cfg.timing;
  const bool sarp =
      sarp_enabled(cfg.policy) && cfg.org.subarrays_per_bank > 1 &&
      !cfg.no_refresh;
  if (sarp) {
    const auto [faw_ref, rrd_ref] = sarp_scaled_constraints(
        timing, cfg.currents, refresh_mode(cfg.policy));
    timing.tFAW_ref = faw_ref;
    timing.tRRD_ref = rrd_ref;
  }
  result.timing_used = timing;
  result.sarp_active = sarp;
  result.sim_start = 0;
  result.sim_end = cfg.sim_cycles;

  ControllerConfig ctrl_cfg;
  ctrl_cfg.org = cfg.org;
  ctrl_cfg.timing = timing;
  ctrl_cfg.protocol.sarp = sarp;
  ctrl_cfg.policy = cfg.policy;
  ctrl_cfg.no_refresh = cfg.no_refresh;
  ctrl_cfg.read_queue_cap = cfg.read_queue_cap;
  ctrl_cfg.write_queue_cap = cfg.write_queue_cap;
  ctrl_cfg.drain_high = cfg.drain_high;
  ctrl_cfg.drain_low = cfg.drain_low;
  ctrl_cfg.collect_logs = cfg.collect_logs;
  ctrl_cfg.collect_latencies = cfg.collect_latencies;

  std::vector<ChannelController> controllers;
  controllers.reserve(cfg.org.channels);
  for (int ch = 0; ch < cfg.org.channels; ++ch)
    controllers.emplace_back(ch, ctrl_cfg, cfg.seed);

  std::vector<Core> cores;
  cores.reserve(cfg.cores);
  for (int i = 0; i < cfg.cores; ++i) {
    TraceSource trace =
        cfg.trace_files.empty()
            ? TraceSource(generate_trace(cfg.core_specs[i], cfg.org,
                                         cfg.mapping, cfg.trace_records))
            : TraceSource::from_file(cfg.trace_files[i]);
    cores.emplace_back(static_cast<std::uint8_t>(i), cfg.core_params,
                       std::move(trace));
  }

  SimPort port(controllers, cfg.org, cfg.mapping);
  std::priority_queue<HeapEvent, std::vector<HeapEvent>,
                      std::greater<HeapEvent>>
      pending;
  std::uint64_t event_order = 0;
  std::vector<CompletionEvent> scratch;

  for (Cycle now = 0; now < cfg.sim_cycles; ++now) {
    while (!pending.empty() && pending.top().cycle <= now) {
      const HeapEvent ev = pending.top();
      pending.pop();
      cores[ev.core].complete_read(ev.read_id);
    }
    port.set_cycle(now);
    for (Core& core : cores)
      for (int k = 0; k < cfg.core_ratio; ++k) core.tick(port);
    for (ChannelController& ctrl : controllers) {
      scratch.clear();
      ctrl.tick(now, scratch);
      for (const CompletionEvent& ev : scratch)
        pending.push({ev.cycle, ev.core, ev.read_id, event_order++});
    }
  }

  RunStats& stats = result.stats;
  stats.sim_cycles = cfg.sim_cycles;
  stats.debt_min = 0;
  stats.debt_max = 0;
  for (const Core& core : cores) {
    CoreStats cs;
    cs.instructions = core.retired_instructions();
    cs.cycles = core.cycles();
    cs.reads = core.reads_issued();
    cs.writes = core.writes_issued();
    cs.ipc = core.ipc();
    stats.cores.push_back(cs);
  }
  for (const ChannelController& ctrl : controllers) {
    for (const RankCounters& rc : ctrl.rank_counters()) {
      stats.ranks.push_back(rc);
      stats.n_refab += rc.n_refab;
      stats.n_refpb += rc.n_refpb;
      stats.refresh_busy_cycles += rc.refresh_busy_cycles;
    }
    stats.reads_served += ctrl.served_reads;
    stats.writes_served += ctrl.served_writes;
    stats.reads_forwarded += ctrl.forwarded_reads;
    stats.starvation_breaches += ctrl.starvation_breaches;
    stats.max_request_wait =
        std::max(stats.max_request_wait, ctrl.max_request_wait);
    stats.drain_entries += ctrl.drain_entries;
    if (ctrl.served_reads > 0)
      stats.avg_read_latency += static_cast<double>(ctrl.read_latency_sum);
    for (int r = 0; r < cfg.org.ranks_per_channel; ++r) {
      const RefreshPolicy* pol = ctrl.policy(r);
      if (!pol) continue;
      stats.postponed_refreshes += pol->postponed_issued;
      stats.pulled_in_refreshes += pol->pulled_in_issued;
      if (const DebtCounters* debt = pol->debt()) {
        stats.debt_min = std::min(stats.debt_min, debt->min_seen);
        stats.debt_max = std::max(stats.debt_max, debt->max_seen);
      }
    }
  }
  if (stats.reads_served > 0)
    stats.avg_read_latency /= static_cast<double>(stats.reads_served);

  result.energy =
      dram_energy(stats.ranks, cfg.sim_cycles, timing, cfg.power);

  for (ChannelController& ctrl : controllers) {
    const std::vector<Command>& cl = ctrl.command_log();
    result.command_log.insert(result.command_log.end(), cl.begin(), cl.end());
    const std::vector<Command>& rl = ctrl.refresh_log();
    result.refresh_log.insert(result.refresh_log.end(), rl.begin(), rl.end());
    const std::vector<LatencyRecord>& lat = ctrl.latencies();
    result.latencies.insert(result.latencies.end(), lat.begin(), lat.end());
  }
  // Per-channel logs are time-sorted; merge them into one ordered log.
  std::stable_sort(result.command_log.begin(), result.command_log.end(),
                   [](const Command& a, const Command& b) {
                     return a.cycle < b.cycle;
                   });
  std::stable_sort(result.refresh_log.begin(), result.refresh_log.end(),
                   [](const Command& a, const Command& b) {
                     return a.cycle < b.cycle;
                   });
  return result;
}

}  // namespace refsim
