// Trace-driven core front end: each trace record is a run of non-memory
// instruction slots followed by one read (and optionally one write).  Cores
// issue up to `issue_width` instructions per core cycle into a reorder
// window; reads occupy an MSHR until the memory system completes them and
// retire in order.
#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

#include "refsim/types.h"

namespace refsim {

/// One trace line: `bubbles read_addr [write_addr]`.
struct TraceRecord {
  std::int64_t bubbles = 0;
  std::uint64_t read_addr = 0;
  bool has_write = false;
  std::uint64_t write_addr = 0;
};

/// Parses one trace line.  Returns false for blank lines and `#` comments;
/// throws ParseError for malformed input.  Numbers accept decimal or 0x hex.
bool parse_trace_line(std::string_view line, int line_no, TraceRecord& out);

/// Replayable source of trace records; wraps around at the end so a core
/// never runs dry.
class TraceSource {
 public:
  explicit TraceSource(std::vector<TraceRecord> records);
  static TraceSource from_file(const std::string& path);
  static TraceSource from_string(std::string_view text);

  const TraceRecord& next();
  std::size_t size() const { return records_.size(); }
  std::uint64_t records_consumed() const { return consumed_; }

 private:
  std::vector<TraceRecord> records_;
  std::size_t pos_ = 0;
  std::uint64_t consumed_ = 0;
};

/// Memory-side interface a core issues requests into.  Both calls return
/// false when the memory system cannot accept the request this cycle.
class MemoryPort {
 public:
  virtual ~MemoryPort() = default;
  virtual bool issue_read(std::uint8_t core, std::uint32_t read_id,
                          std::uint64_t addr) = 0;
  virtual bool issue_write(std::uint8_t core, std::uint64_t addr) = 0;
};

struct CoreParams {
  int issue_width = 3;
  int window_size = 128;
  int mshrs = 8;
};

class Core {
 public:
  Core(std::uint8_t id, CoreParams params, TraceSource trace);

  /// One core cycle: issue new instructions in order, then retire completed
  /// ones in order (both bounded by the issue width).
  void tick(MemoryPort& mem);
  /// Marks an outstanding read as completed, releasing its MSHR.
  void complete_read(std::uint32_t read_id);

  std::uint64_t retired_instructions() const { return retired_; }
  std::uint64_t cycles() const { return cycles_; }
  std::uint64_t reads_issued() const { return reads_issued_; }
  std::uint64_t writes_issued() const { return writes_issued_; }
  std::uint64_t stall_cycles() const { return stall_cycles_; }
  int reads_outstanding() const { return reads_outstanding_; }
  double ipc() const {
    return cycles_ == 0 ? 0.0
                        : static_cast<double>(retired_) /
                              static_cast<double>(cycles_);
  }

 private:
  // The window holds run-length-encoded bubble runs plus individual memory
  // operations, so a cycle costs O(issue width), not O(window size).
  struct Slot {
    enum class Kind { kBubbles, kRead, kWrite } kind = Kind::kBubbles;
    std::int64_t count = 0;         ///< kBubbles: un-retired instructions
    std::int64_t issued_count = 0;  ///< kBubbles: issued, not yet retired
    std::uint32_t read_id = 0;      ///< kRead
    std::uint64_t addr = 0;         ///< kRead / kWrite
    bool issued = false;            ///< kRead / kWrite
  };

  void fetch_more();

  std::uint8_t id_;
  CoreParams params_;
  TraceSource trace_;
  std::deque<Slot> window_;
  std::int64_t occupancy_ = 0;
  std::size_t issue_slot_ = 0;    ///< window slots before this are fully issued
  std::vector<bool> read_done_;   ///< ring indexed by read_id
  std::uint32_t next_read_id_ = 0;
  int reads_outstanding_ = 0;
  // Decomposition state of the trace record currently entering the window.
  std::int64_t pending_bubbles_ = 0;
  bool pending_read_ = false;
  bool pending_write_ = false;
  std::uint64_t pending_read_addr_ = 0;
  std::uint64_t pending_write_addr_ = 0;
  std::uint64_t retired_ = 0;
  std::uint64_t cycles_ = 0;
  std::uint64_t reads_issued_ = 0;
  std::uint64_t writes_issued_ = 0;
  std::uint64_t stall_cycles_ = 0;
};

}  // namespace refsim
