#include "refsim/timing.h"

#include <cmath>

namespace refsim {

TimingParams derive_timing(int density_gbit, double retention_ms,
                           RefreshMode mode, FgrMode fgr, double tck_ns) {
  if (tck_ns <= 0) throw ConfigError("tck_ns must be positive");
  if (retention_ms != 32.0 && retention_ms != 64.0)
    throw ConfigError("retention_ms must be 32 or 64");
  if (fgr != FgrMode::kOff && mode != RefreshMode::kAllBank)
    throw ConfigError("fine-granularity refresh requires all-bank mode");

  double trfc_ab_ns = 0.0;
  switch (density_gbit) {
    case 8:
      trfc_ab_ns = 350.0;
      break;
    case 16:
      trfc_ab_ns = 530.0;
      break;
    case 32:
      trfc_ab_ns = 890.0;
      break;
    default:
      throw ConfigError("density_gbit must be 8, 16, or 32");
  }

  double trefi_ns = retention_ms * 1e6 / 8192.0;
  switch (fgr) {
    case FgrMode::kOff:
      break;
    case FgrMode::kX2:
      trefi_ns /= 2.0;
      trfc_ab_ns /= 1.35;
      break;
    case FgrMode::kX4:
      trefi_ns /= 4.0;
      trfc_ab_ns /= 1.63;
      break;
  }

  TimingParams t;
  t.tck_ns = tck_ns;
  t.retention_ms = retention_ms;
  t.tREFI_ns = trefi_ns;
  t.tRFCab_ns = trfc_ab_ns;
  t.tREFI = t.ns_to_cycles(trefi_ns);
  t.tREFIpb = t.tREFI / 8;
  t.tRFCab = static_cast<int>(t.ns_to_cycles(trfc_ab_ns));
  // Nearest rounding (not ceiling) keeps round(2.3 * tRFCpb) within one
  // cycle of tRFCab across every density and FGR grade.
  t.tRFCpb = static_cast<int>(std::llround(t.tRFCab / 2.3));
  t.tRRD_ref = t.tRRD;
  t.tFAW_ref = t.tFAW;
  t.validate();
  return t;
}

std::pair<int, int> sarp_scaled_constraints(const TimingParams& t,
                                            const CurrentParams& c,
                                            RefreshMode mode) {
  if (c.i_act <= 0) throw ConfigError("i_act must be positive");
  double i_ref = mode == RefreshMode::kAllBank ? c.i_ref_ab : c.i_ref_pb;
  if (i_ref < 0) throw ConfigError("refresh current must be non-negative");
  double overhead = (4.0 * c.i_act + i_ref) / (4.0 * c.i_act);
  int tfaw_ref = static_cast<int>(std::ceil(t.tFAW * overhead - 1e-9));
  int trrd_ref = static_cast<int>(std::ceil(t.tRRD * overhead - 1e-9));
  return {tfaw_ref, trrd_ref};
}

}  // namespace refsim
