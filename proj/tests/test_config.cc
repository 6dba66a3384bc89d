#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "doctest.h"
#include "refsim/config.h"

using namespace refsim;

TEST_CASE("an empty config yields the documented defaults") {
  const SimConfig cfg = parse_sim_config("");
  CHECK(cfg.policy == Policy::kRefAb);
  CHECK(cfg.org.channels == 2);
  CHECK(cfg.org.density_gbit == 8);
  CHECK(cfg.cores == 8);
  CHECK(cfg.sim_cycles == 2'000'000);
  CHECK(cfg.core_ratio == 6);
  CHECK(cfg.timing.tREFI == 2605);
  CHECK(cfg.timing.tRFCab == 234);
  CHECK(cfg.mapping == AddressMapping::kChannelInterleaved);
  REQUIRE(cfg.core_specs.size() == 8);
  CHECK(cfg.core_specs[0].mpki == 10.0);
  // Per-core seeds decorrelate but derive from the base seed.
  CHECK(cfg.core_specs[0].seed == core_seed(cfg.seed, 0));
  CHECK(cfg.core_specs[1].seed == core_seed(cfg.seed, 1));
  CHECK(cfg.core_specs[0].seed != cfg.core_specs[1].seed);
}

TEST_CASE("every section parses and lands in the right field") {
  const SimConfig cfg = parse_sim_config(
      "# full configuration\n"
      "[dram]\n"
      "channels = 1\n"
      "ranks = 1\n"
      "banks = 8\n"
      "subarrays = 16\n"
      "rows = 32768\n"
      "density_gbit = 32\n"
      "retention_ms = 64\n"
      "[timing]\n"
      "trrd = 6\n"
      "tfaw = 30\n"
      "tras = 20  ; trc becomes 29\n"
      "[currents]\n"
      "i_ref_pb = 60\n"
      "[power]\n"
      "idd5b = 250\n"
      "[sim]\n"
      "policy = dsarp\n"
      "cores = 2\n"
      "sim_cycles = 50000\n"
      "seed = 17\n"
      "mapping = channel_blocked\n"
      "mshrs = 4\n"
      "[workload]\n"
      "mpki = 5, 40\n"
      "footprint_mb = 2\n"
      "write_fraction = 0.25\n"
      "trace_records = 321\n");

  CHECK(cfg.org.channels == 1);
  CHECK(cfg.org.subarrays_per_bank == 16);
  CHECK(cfg.org.rows_per_bank == 32768);
  CHECK(cfg.org.density_gbit == 32);
  CHECK(cfg.timing.retention_ms == 64.0);
  CHECK(cfg.timing.tREFI == 5209);  // 64 ms over 8192 intervals at 1.5 ns
  CHECK(cfg.timing.tREFIpb == 651);
  CHECK(cfg.timing.tRFCab == 594);
  CHECK(cfg.timing.tRRD == 6);
  CHECK(cfg.timing.tFAW == 30);
  CHECK(cfg.timing.tRAS == 20);
  CHECK(cfg.timing.tRC == 29);
  CHECK(cfg.currents.i_ref_pb == 60.0);
  CHECK(cfg.power.idd5b == 250.0);
  CHECK(cfg.policy == Policy::kDsarp);
  CHECK(cfg.cores == 2);
  CHECK(cfg.sim_cycles == 50'000);
  CHECK(cfg.seed == 17);
  CHECK(cfg.mapping == AddressMapping::kChannelBlocked);
  CHECK(cfg.core_params.mshrs == 4);
  REQUIRE(cfg.core_specs.size() == 2);
  CHECK(cfg.core_specs[0].mpki == 5.0);
  CHECK(cfg.core_specs[1].mpki == 40.0);
  CHECK(cfg.core_specs[0].footprint_bytes == 2ull * 1024 * 1024);
  CHECK(cfg.core_specs[0].write_fraction == 0.25);
  CHECK(cfg.trace_records == 321);
}

TEST_CASE("trace files override synthetic workloads") {
  const SimConfig cfg = parse_sim_config(
      "[sim]\n"
      "cores = 2\n"
      "[workload]\n"
      "traces = a.trace, b.trace\n");
  REQUIRE(cfg.trace_files.size() == 2);
  CHECK(cfg.trace_files[0] == "a.trace");
  CHECK(cfg.trace_files[1] == "b.trace");
  CHECK(cfg.core_specs.empty());
}

TEST_CASE("fine-granularity policies change the derived refresh timing") {
  const SimConfig cfg = parse_sim_config("[sim]\npolicy = fgr4x\n");
  CHECK(cfg.timing.tREFI == 652);
  CHECK(cfg.timing.tRFCab == 144);
}

TEST_CASE("errors carry the offending line number") {
  auto message_of = [](const std::string& text) {
    try {
      parse_sim_config(text);
    } catch (const ConfigError& err) {
      return std::string(err.what());
    }
    return std::string("(no error)");
  };

  CHECK(message_of("[dram]\nchannels = 2\nbogus = 1\n").find("(line 3)") !=
        std::string::npos);
  CHECK(message_of("[nope]\n").find("unknown section") != std::string::npos);
  CHECK(message_of("key = 1\n").find("outside any") != std::string::npos);
  CHECK(message_of("[dram]\nchannels = x\n").find("expected integer") !=
        std::string::npos);
  CHECK(message_of("[sim]\nno_refresh = maybe\n").find("expected boolean") !=
        std::string::npos);
  CHECK(message_of("[sim]\npolicy = magic\n").find("unknown policy") !=
        std::string::npos);
  CHECK(message_of("[dram]\ndensity_gbit = 12\n").find("density") !=
        std::string::npos);
  CHECK(message_of("[dram]\nchannels") != "(no error)");  // missing '='
}

TEST_CASE("the mpki list must be scalar or one per core") {
  CHECK_THROWS_AS(
      parse_sim_config("[sim]\ncores = 4\n[workload]\nmpki = 1, 2, 3\n"),
      ConfigError);
}
