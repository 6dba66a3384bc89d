// Offline checkers: replay a command log against the protocol rules, and
// audit a refresh log for retention safety. Both consume the plain-text log
// format written by the simulator:
//
//   cycle kind channel rank bank row subarray
//
// one record per line, space-separated decimal fields, kind one of
// ACT/RD/WR/PRE/REFab/REFpb, '#' starts a comment. All-bank refreshes appear
// as a single REFab record carrying the lockstep refresh row (they cover
// every bank of the rank).
#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "refsim/dram.h"
#include "refsim/types.h"

namespace refsim {

std::string format_log_record(const Command& cmd);

/// Parses one log line; returns nothing for blank/comment lines and throws
/// ParseError on malformed input.
std::optional<Command> parse_log_record(std::string_view line,
                                        std::size_t line_no);

std::vector<Command> read_log(std::istream& in);
std::vector<Command> read_log_file(const std::string& path);
void write_log_file(const std::string& path, std::span<const Command> log);

/// One protocol or format problem found while replaying a log.
struct Violation {
  std::size_t record = 0;  ///< 1-based record/line number
  Cycle cycle = 0;
  std::string message;
};

/// Replays the log through a fresh DRAM state machine and reports every
/// rule breach: illegal commands, out-of-order timestamps, more than one
/// command per channel per cycle, inconsistent subarray fields, and bad
/// coordinates. Illegal commands are still applied so that one fault does
/// not cascade into spurious downstream reports.
std::vector<Violation> verify_command_log(std::span<const Command> log,
                                          const TimingParams& t,
                                          const DramOrg& org,
                                          const ProtocolOptions& opt = {});

/// Text front-end: malformed lines become violations instead of exceptions.
std::vector<Violation> verify_command_log_text(std::istream& in,
                                               const TimingParams& t,
                                               const DramOrg& org,
                                               const ProtocolOptions& opt = {});

/// One retention breach found while auditing a refresh log.
struct AuditViolation {
  int channel = 0;
  int rank = 0;
  int bank = 0;
  int row_begin = 0;  ///< first row of the affected refresh bin (-1: none)
  int row_count = 0;
  Cycle value = 0;  ///< observed gap in cycles, or the out-of-range debt
  std::string message;
};

/// Audits refresh coverage: every refresh bin of every bank must be
/// refreshed at least once per retention window plus the postponement slack
/// (eight deadline intervals), counting an assumed full refresh at
/// sim_start; and the per-bank refresh debt reconstructed from the nominal
/// deadline schedule must stay within [-8, +8] at all times.
std::vector<AuditViolation> retention_audit(std::span<const Command> log,
                                            const DramOrg& org,
                                            const TimingParams& t,
                                            Cycle sim_start, Cycle sim_end);

}  // namespace refsim
