#include "refsim/types.h"

#include <cmath>

namespace refsim {
namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

const char* to_string(CommandKind kind) {
  switch (kind) {
    case CommandKind::kAct:
      return "ACT";
    case CommandKind::kRead:
      return "RD";
    case CommandKind::kWrite:
      return "WR";
    case CommandKind::kPre:
      return "PRE";
    case CommandKind::kRefAb:
      return "REFab";
    case CommandKind::kRefPb:
      return "REFpb";
  }
  return "?";
}

std::optional<CommandKind> command_kind_from_string(std::string_view name) {
  if (name == "ACT") return CommandKind::kAct;
  if (name == "RD") return CommandKind::kRead;
  if (name == "WR") return CommandKind::kWrite;
  if (name == "PRE") return CommandKind::kPre;
  if (name == "REFab") return CommandKind::kRefAb;
  if (name == "REFpb") return CommandKind::kRefPb;
  return std::nullopt;
}

void DramOrg::validate() const {
  if (channels < 1 || channels > 16)
    throw ConfigError("channels must be in [1, 16]");
  if (ranks_per_channel < 1 || ranks_per_channel > 8)
    throw ConfigError("ranks_per_channel must be in [1, 8]");
  if (banks_per_rank < 1 || banks_per_rank > 16)
    throw ConfigError("banks_per_rank must be in [1, 16]");
  if (!is_power_of_two(subarrays_per_bank) || subarrays_per_bank > 128)
    throw ConfigError("subarrays_per_bank must be a power of two <= 128");
  if (rows_per_bank < 8192 || rows_per_bank % 8192 != 0)
    throw ConfigError("rows_per_bank must be a positive multiple of 8192");
  if (rows_per_bank % subarrays_per_bank != 0)
    throw ConfigError("subarrays_per_bank must divide rows_per_bank");
  if (columns_per_row < 1) throw ConfigError("columns_per_row must be >= 1");
  if (column_width_bytes < 1)
    throw ConfigError("column_width_bytes must be >= 1");
  if (density_gbit != 8 && density_gbit != 16 && density_gbit != 32)
    throw ConfigError("density_gbit must be 8, 16, or 32");
}

int subarray_of(int row, const DramOrg& org) {
  if (row < 0 || row >= org.rows_per_bank)
    throw ConfigError("row " + std::to_string(row) + " out of range");
  return row / org.rows_per_subarray();
}

Cycle TimingParams::ns_to_cycles(double ns) const {
  return static_cast<Cycle>(std::ceil(ns / tck_ns - 1e-9));
}

Cycle TimingParams::retention_cycles() const {
  return ns_to_cycles(retention_ms * 1e6);
}

void TimingParams::validate() const {
  if (tck_ns <= 0) throw ConfigError("tck_ns must be positive");
  for (int v : {tRCD, tRP, tCL, tCWL, tRAS, tRC, tWR, tWTR, tRTP, tBURST, tRRD,
                tFAW, tRFCab, tRFCpb, tRRD_ref, tFAW_ref})
    if (v < 1) throw ConfigError("timing fields must be >= 1 cycle");
  if (tREFI < 1 || tREFIpb < 1)
    throw ConfigError("refresh intervals must be >= 1 cycle");
  if (tRC != tRAS + tRP) throw ConfigError("tRC must equal tRAS + tRP");
  if (tFAW < tRRD) throw ConfigError("tFAW must be >= tRRD");
  if (tRRD_ref < tRRD || tFAW_ref < tFAW)
    throw ConfigError("refresh-scaled ACT pacing cannot be tighter than base");
  if (tREFIpb * 8 > tREFI)
    throw ConfigError("tREFIpb must be at most tREFI / 8");
  // Per-bank refresh latency must stay within one cycle of the 2.3x ratio.
  if (std::llabs(std::llround(2.3 * tRFCpb) - tRFCab) > 1)
    throw ConfigError("tRFCpb is not within one cycle of tRFCab / 2.3");
  if (tRFCab >= tREFI)
    throw ConfigError("tRFCab must be shorter than tREFI");
}

const char* to_string(Policy policy) {
  switch (policy) {
    case Policy::kRefAb:
      return "refab";
    case Policy::kRefPb:
      return "refpb";
    case Policy::kElastic:
      return "elastic";
    case Policy::kDarp:
      return "darp";
    case Policy::kSarpAb:
      return "sarp_ab";
    case Policy::kSarpPb:
      return "sarp_pb";
    case Policy::kDsarp:
      return "dsarp";
    case Policy::kFgr2x:
      return "fgr2x";
    case Policy::kFgr4x:
      return "fgr4x";
  }
  return "?";
}

std::optional<Policy> policy_from_string(std::string_view name) {
  for (Policy p : {Policy::kRefAb, Policy::kRefPb, Policy::kElastic,
                   Policy::kDarp, Policy::kSarpAb, Policy::kSarpPb,
                   Policy::kDsarp, Policy::kFgr2x, Policy::kFgr4x})
    if (name == to_string(p)) return p;
  return std::nullopt;
}

RefreshMode refresh_mode(Policy policy) {
  switch (policy) {
    case Policy::kRefPb:
    case Policy::kDarp:
    case Policy::kSarpPb:
    case Policy::kDsarp:
      return RefreshMode::kPerBank;
    default:
      return RefreshMode::kAllBank;
  }
}

bool sarp_enabled(Policy policy) {
  return policy == Policy::kSarpAb || policy == Policy::kSarpPb ||
         policy == Policy::kDsarp;
}

FgrMode fgr_mode(Policy policy) {
  if (policy == Policy::kFgr2x) return FgrMode::kX2;
  if (policy == Policy::kFgr4x) return FgrMode::kX4;
  return FgrMode::kOff;
}

}  // namespace refsim
