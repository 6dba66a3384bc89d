#include "refsim/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "refsim/timing.h"

namespace refsim {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void fail(const std::string& msg, int line) {
  throw ConfigError(msg + " (line " + std::to_string(line) + ")");
}

std::int64_t to_int(std::string_view v, int line) {
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    fail("expected integer, got '" + std::string(v) + "'", line);
  return out;
}

double to_double(std::string_view v, int line) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    fail("expected number, got '" + std::string(v) + "'", line);
  return out;
}

bool to_bool(std::string_view v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail("expected boolean, got '" + std::string(v) + "'", line);
}

std::vector<std::string_view> split_commas(std::string_view v) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const std::size_t comma = v.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(trim(v.substr(pos)));
      break;
    }
    out.push_back(trim(v.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

struct WorkloadKeys {
  std::vector<double> mpki{};
  double footprint_mb = 8.0;
  double bank_locality = 0.0;
  double write_fraction = 0.3;
  std::size_t trace_records = 20000;
  std::vector<std::string> traces;
};

}  // namespace

SimConfig parse_sim_config(std::string_view text) {
  SimConfig cfg;
  WorkloadKeys wl;
  double retention_ms = 32.0;
  double tck_ns = 1.5;
  // Timing overrides applied after derive_timing.
  std::vector<std::pair<std::string, int>> timing_overrides;

  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                      : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string_view::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "dram" && section != "timing" && section != "currents" &&
          section != "power" && section != "sim" && section != "workload")
        fail("unknown section [" + section + "]", line_no);
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected key=value", line_no);
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) fail("key outside any [section]", line_no);

    if (section == "dram") {
      if (key == "channels")
        cfg.org.channels = static_cast<int>(to_int(value, line_no));
      else if (key == "ranks")
        cfg.org.ranks_per_channel = static_cast<int>(to_int(value, line_no));
      else if (key == "banks")
        cfg.org.banks_per_rank = static_cast<int>(to_int(value, line_no));
      else if (key == "subarrays")
        cfg.org.subarrays_per_bank = static_cast<int>(to_int(value, line_no));
      else if (key == "rows")
        cfg.org.rows_per_bank = static_cast<int>(to_int(value, line_no));
      else if (key == "columns")
        cfg.org.columns_per_row = static_cast<int>(to_int(value, line_no));
      else if (key == "line_bytes")
        cfg.org.column_width_bytes = static_cast<int>(to_int(value, line_no));
      else if (key == "density_gbit")
        cfg.org.density_gbit = static_cast<int>(to_int(value, line_no));
      else if (key == "retention_ms")
        retention_ms = to_double(value, line_no);
      else if (key == "tck_ns")
        tck_ns = to_double(value, line_no);
      else
        fail("unknown [dram] key '" + key + "'", line_no);
    } else if (section == "timing") {
      static const char* known[] = {"trcd", "trp",  "tcl",    "tcwl",
                                    "tras", "twr",  "twtr",   "trtp",
                                    "tburst", "trrd", "tfaw"};
      bool ok = false;
      for (const char* k : known) ok = ok || key == k;
      if (!ok) fail("unknown [timing] key '" + key + "'", line_no);
      timing_overrides.emplace_back(key,
                                    static_cast<int>(to_int(value, line_no)));
    } else if (section == "currents") {
      if (key == "i_act")
        cfg.currents.i_act = to_double(value, line_no);
      else if (key == "i_ref_ab")
        cfg.currents.i_ref_ab = to_double(value, line_no);
      else if (key == "i_ref_pb")
        cfg.currents.i_ref_pb = to_double(value, line_no);
      else
        fail("unknown [currents] key '" + key + "'", line_no);
    } else if (section == "power") {
      if (key == "vdd")
        cfg.power.vdd = to_double(value, line_no);
      else if (key == "idd0")
        cfg.power.idd0 = to_double(value, line_no);
      else if (key == "idd2n")
        cfg.power.idd2n = to_double(value, line_no);
      else if (key == "idd3n")
        cfg.power.idd3n = to_double(value, line_no);
      else if (key == "idd4r")
        cfg.power.idd4r = to_double(value, line_no);
      else if (key == "idd4w")
        cfg.power.idd4w = to_double(value, line_no);
      else if (key == "idd5b")
        cfg.power.idd5b = to_double(value, line_no);
      else
        fail("unknown [power] key '" + key + "'", line_no);
    } else if (section == "sim") {
      if (key == "policy") {
        const std::optional<Policy> p = policy_from_string(value);
        if (!p) fail("unknown policy '" + std::string(value) + "'", line_no);
        cfg.policy = *p;
      } else if (key == "no_refresh") {
        cfg.no_refresh = to_bool(value, line_no);
      } else if (key == "mapping") {
        const std::optional<AddressMapping> m =
            address_mapping_from_string(value);
        if (!m) fail("unknown mapping '" + std::string(value) + "'", line_no);
        cfg.mapping = *m;
      } else if (key == "cores") {
        cfg.cores = static_cast<int>(to_int(value, line_no));
      } else if (key == "sim_cycles") {
        cfg.sim_cycles = to_int(value, line_no);
      } else if (key == "core_ratio") {
        cfg.core_ratio = static_cast<int>(to_int(value, line_no));
      } else if (key == "issue_width") {
        cfg.core_params.issue_width = static_cast<int>(to_int(value, line_no));
      } else if (key == "window") {
        cfg.core_params.window_size = static_cast<int>(to_int(value, line_no));
      } else if (key == "mshrs") {
        cfg.core_params.mshrs = static_cast<int>(to_int(value, line_no));
      } else if (key == "read_queue") {
        cfg.read_queue_cap = static_cast<int>(to_int(value, line_no));
      } else if (key == "write_queue") {
        cfg.write_queue_cap = static_cast<int>(to_int(value, line_no));
      } else if (key == "drain_high") {
        cfg.drain_high = static_cast<int>(to_int(value, line_no));
      } else if (key == "drain_low") {
        cfg.drain_low = static_cast<int>(to_int(value, line_no));
      } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(to_int(value, line_no));
      } else if (key == "collect_logs") {
        cfg.collect_logs = to_bool(value, line_no);
      } else if (key == "collect_latencies") {
        cfg.collect_latencies = to_bool(value, line_no);
      } else {
        fail("unknown [sim] key '" + key + "'", line_no);
      }
    } else if (section == "workload") {
      if (key == "mpki") {
        wl.mpki.clear();
        for (std::string_view item : split_commas(value))
          wl.mpki.push_back(to_double(item, line_no));
      } else if (key == "footprint_mb") {
        wl.footprint_mb = to_double(value, line_no);
      } else if (key == "bank_locality") {
        wl.bank_locality = to_double(value, line_no);
      } else if (key == "write_fraction") {
        wl.write_fraction = to_double(value, line_no);
      } else if (key == "trace_records") {
        wl.trace_records = static_cast<std::size_t>(to_int(value, line_no));
      } else if (key == "traces") {
        wl.traces.clear();
        for (std::string_view item : split_commas(value))
          wl.traces.emplace_back(item);
      } else {
        fail("unknown [workload] key '" + key + "'", line_no);
      }
    }
  }

  const FgrMode fgr = fgr_mode(cfg.policy);
  TimingParams t = derive_timing(cfg.org.density_gbit, retention_ms,
                                 refresh_mode(cfg.policy), fgr, tck_ns);
  for (const auto& [key, value] : timing_overrides) {
    if (key == "trcd") t.tRCD = value;
    else if (key == "trp") t.tRP = value;
    else if (key == "tcl") t.tCL = value;
    else if (key == "tcwl") t.tCWL = value;
    else if (key == "tras") t.tRAS = value;
    else if (key == "twr") t.tWR = value;
    else if (key == "twtr") t.tWTR = value;
    else if (key == "trtp") t.tRTP = value;
    else if (key == "tburst") t.tBURST = value;
    else if (key == "trrd") { t.tRRD = value; t.tRRD_ref = value; }
    else if (key == "tfaw") { t.tFAW = value; t.tFAW_ref = value; }
  }
  t.tRC = t.tRAS + t.tRP;
  t.validate();
  cfg.timing = t;

  cfg.trace_records = wl.trace_records;
  if (!wl.traces.empty()) {
    cfg.trace_files = wl.traces;
  } else if (cfg.cores > 0) {
    if (wl.mpki.empty()) wl.mpki.push_back(10.0);
    if (wl.mpki.size() != 1 &&
        wl.mpki.size() != static_cast<std::size_t>(cfg.cores))
      throw ConfigError("mpki list must have one entry or one per core");
    for (int i = 0; i < cfg.cores; ++i) {
      SyntheticSpec spec;
      spec.mpki = wl.mpki.size() == 1 ? wl.mpki[0]
                                      : wl.mpki[static_cast<std::size_t>(i)];
      spec.footprint_bytes =
          static_cast<std::uint64_t>(wl.footprint_mb * 1024.0 * 1024.0);
      spec.bank_locality = wl.bank_locality;
      spec.write_fraction = wl.write_fraction;
      spec.seed = core_seed(cfg.seed, i);
      cfg.core_specs.push_back(spec);
    }
  }
  cfg.validate();
  return cfg;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sim_config(ss.str());
}

}  // namespace refsim
