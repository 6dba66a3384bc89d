#include "refsim/metrics.h"

#include <cmath>
#include <stdexcept>

namespace refsim {
namespace {

void check_pair(const std::vector<double>& shared,
                const std::vector<double>& alone, bool shared_positive) {
  if (shared.empty()) throw std::invalid_argument("empty IPC vector");
  if (shared.size() != alone.size())
    throw std::invalid_argument("IPC vector size mismatch");
  for (std::size_t i = 0; i < shared.size(); ++i) {
    if (!(alone[i] > 0.0))
      throw std::invalid_argument("alone IPC must be positive");
    if (shared[i] < 0.0)
      throw std::invalid_argument("shared IPC must be non-negative");
    if (shared_positive && !(shared[i] > 0.0))
      throw std::invalid_argument("shared IPC must be positive");
  }
}

}  // namespace

double weighted_speedup(const std::vector<double>& shared_ipc,
                        const std::vector<double>& alone_ipc) {
  check_pair(shared_ipc, alone_ipc, false);
  double sum = 0.0;
  for (std::size_t i = 0; i < shared_ipc.size(); ++i)
    sum += shared_ipc[i] / alone_ipc[i];
  return sum;
}

double harmonic_speedup(const std::vector<double>& shared_ipc,
                        const std::vector<double>& alone_ipc) {
  check_pair(shared_ipc, alone_ipc, true);
  double denom = 0.0;
  for (std::size_t i = 0; i < shared_ipc.size(); ++i)
    denom += alone_ipc[i] / shared_ipc[i];
  return static_cast<double>(shared_ipc.size()) / denom;
}

double max_slowdown(const std::vector<double>& shared_ipc,
                    const std::vector<double>& alone_ipc) {
  check_pair(shared_ipc, alone_ipc, true);
  double worst = 0.0;
  for (std::size_t i = 0; i < shared_ipc.size(); ++i)
    worst = std::max(worst, alone_ipc[i] / shared_ipc[i]);
  return worst;
}

double gmean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("gmean of empty vector");
  double log_sum = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) throw std::invalid_argument("gmean requires positives");
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(values.size()));
}

EnergyBreakdown dram_energy(const std::vector<RankCounters>& ranks,
                            Cycle sim_cycles, const TimingParams& t,
                            const PowerParams& p) {
  EnergyBreakdown e;
  const double tck = t.tck_ns;
  const double total_ns = static_cast<double>(sim_cycles) * tck;
  for (const RankCounters& r : ranks) {
    const double frac_act =
        sim_cycles == 0 ? 0.0
                        : static_cast<double>(r.active_cycles) /
                              static_cast<double>(sim_cycles);
    e.background_nj += p.vdd *
                       (p.idd3n * frac_act + p.idd2n * (1.0 - frac_act)) *
                       total_ns / 1000.0;
    e.activate_nj += static_cast<double>(r.n_act) * p.vdd *
                     (p.idd0 * t.tRC - p.idd3n * t.tRAS -
                      p.idd2n * (t.tRC - t.tRAS)) *
                     tck / 1000.0;
    e.read_nj += static_cast<double>(r.n_rd) * p.vdd *
                 (p.idd4r - p.idd3n) * t.tBURST * tck / 1000.0;
    e.write_nj += static_cast<double>(r.n_wr) * p.vdd *
                  (p.idd4w - p.idd3n) * t.tBURST * tck / 1000.0;
    const double ref_units = static_cast<double>(r.n_refab) +
                             static_cast<double>(r.n_refpb) / 8.0;
    e.refresh_nj += ref_units * p.vdd * (p.idd5b - p.idd3n) *
                    t.tRFCab * tck / 1000.0;
  }
  return e;
}

double energy_per_access_nj(const EnergyBreakdown& e,
                            std::uint64_t accesses) {
  if (accesses == 0)
    throw std::invalid_argument("energy per access undefined for 0 accesses");
  return e.total_nj() / static_cast<double>(accesses);
}

}  // namespace refsim
