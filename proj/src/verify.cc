#include "refsim/verify.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace refsim {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::int64_t parse_int(std::string_view token, std::size_t line_no,
                       const char* field) {
  std::int64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(std::string("bad ") + field + " '" + std::string(token) +
                         "'",
                     line_no);
  return value;
}

}  // namespace

std::string format_log_record(const Command& cmd) {
  std::ostringstream out;
  out << cmd.cycle << ' ' << to_string(cmd.kind) << ' ' << cmd.channel << ' '
      << cmd.rank << ' ' << cmd.bank << ' ' << cmd.row << ' ' << cmd.subarray;
  return out.str();
}

std::optional<Command> parse_log_record(std::string_view line,
                                        std::size_t line_no) {
  if (auto hash = line.find('#'); hash != std::string_view::npos)
    line = line.substr(0, hash);
  line = trim(line);
  if (line.empty()) return std::nullopt;

  std::array<std::string_view, 7> tokens;
  std::size_t count = 0;
  while (!line.empty()) {
    auto space = line.find_first_of(" \t");
    std::string_view token = line.substr(0, space);
    if (count == tokens.size()) throw ParseError("too many fields", line_no);
    tokens[count++] = token;
    if (space == std::string_view::npos) break;
    line = trim(line.substr(space));
  }
  if (count != tokens.size())
    throw ParseError("expected 7 fields, got " + std::to_string(count),
                     line_no);

  Command cmd;
  cmd.cycle = parse_int(tokens[0], line_no, "cycle");
  auto kind = command_kind_from_string(tokens[1]);
  if (!kind)
    throw ParseError("unknown command kind '" + std::string(tokens[1]) + "'",
                     line_no);
  cmd.kind = *kind;
  cmd.channel = static_cast<int>(parse_int(tokens[2], line_no, "channel"));
  cmd.rank = static_cast<int>(parse_int(tokens[3], line_no, "rank"));
  cmd.bank = static_cast<int>(parse_int(tokens[4], line_no, "bank"));
  cmd.row = static_cast<int>(parse_int(tokens[5], line_no, "row"));
  cmd.subarray = static_cast<int>(parse_int(tokens[6], line_no, "subarray"));
  return cmd;
}

std::vector<Command> read_log(std::istream& in) {
  std::vector<Command> log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto cmd = parse_log_record(line, line_no)) log.push_back(*cmd);
  }
  return log;
}

std::vector<Command> read_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open log file: " + path);
  return read_log(in);
}

void write_log_file(const std::string& path, std::span<const Command> log) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write log file: " + path);
  for (const Command& cmd : log) out << format_log_record(cmd) << '\n';
}

namespace {

class LogReplayer {
 public:
  LogReplayer(const TimingParams& t, const DramOrg& org,
              const ProtocolOptions& opt)
      : t_(t), org_(org), opt_(opt) {
    channels_.reserve(org.channels);
    for (int c = 0; c < org.channels; ++c) channels_.emplace_back(org);
  }

  void step(const Command& cmd, std::size_t record,
            std::vector<Violation>& out) {
    if (cmd.cycle < prev_cycle_)
      out.push_back({record, cmd.cycle, "log not sorted by issue cycle"});
    prev_cycle_ = std::max(prev_cycle_, cmd.cycle);

    if (cmd.channel < 0 || cmd.channel >= org_.channels) {
      out.push_back({record, cmd.cycle, "channel outside the organization"});
      return;
    }
    ChannelState& ch = channels_[cmd.channel];
    if (ch.last_cmd_cycle == cmd.cycle)
      out.push_back(
          {record, cmd.cycle, "second command on the channel this cycle"});
    ch.last_cmd_cycle = cmd.cycle;

    sync_state(ch, cmd.cycle, org_);
    CommandCheck check = command_check(ch, cmd, t_, org_, opt_);
    if (check == CommandCheck::kBadCoordinates) {
      out.push_back({record, cmd.cycle, to_string(check)});
      return;  // not applicable to the state machine
    }
    if (cmd.subarray != subarray_of(cmd.row, org_))
      out.push_back(
          {record, cmd.cycle, "subarray field does not match the row"});
    if (check != CommandCheck::kOk)
      out.push_back({record, cmd.cycle,
                     std::string(to_string(cmd.kind)) + ": " +
                         to_string(check)});
    apply_command(ch, cmd, t_, org_, opt_);
  }

 private:
  TimingParams t_;
  DramOrg org_;
  ProtocolOptions opt_;
  std::vector<ChannelState> channels_;
  Cycle prev_cycle_ = kFarPast;
};

}  // namespace

std::vector<Violation> verify_command_log(std::span<const Command> log,
                                          const TimingParams& t,
                                          const DramOrg& org,
                                          const ProtocolOptions& opt) {
  org.validate();
  t.validate();
  std::vector<Violation> violations;
  LogReplayer replayer(t, org, opt);
  for (std::size_t i = 0; i < log.size(); ++i)
    replayer.step(log[i], i + 1, violations);
  return violations;
}

std::vector<Violation> verify_command_log_text(std::istream& in,
                                               const TimingParams& t,
                                               const DramOrg& org,
                                               const ProtocolOptions& opt) {
  org.validate();
  t.validate();
  std::vector<Violation> violations;
  LogReplayer replayer(t, org, opt);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    try {
      if (auto cmd = parse_log_record(line, line_no))
        replayer.step(*cmd, line_no, violations);
    } catch (const ParseError& err) {
      violations.push_back({line_no, 0, err.what()});
    }
  }
  return violations;
}

// ---------------------------------------------------------------------------
// Retention audit
// ---------------------------------------------------------------------------

namespace {

struct BankAccount {
  Cycle next_deadline = 0;
  int debt = 0;
  bool debt_high_reported = false;
  bool debt_low_reported = false;
};

}  // namespace

std::vector<AuditViolation> retention_audit(std::span<const Command> log,
                                            const DramOrg& org,
                                            const TimingParams& t,
                                            Cycle sim_start, Cycle sim_end) {
  org.validate();
  t.validate();
  if (sim_end < sim_start) throw ConfigError("sim_end before sim_start");

  std::vector<AuditViolation> out;
  const int rpr = org.rows_per_refresh();
  const int bins_per_bank = org.rows_per_bank / rpr;
  const int banks_total =
      org.channels * org.ranks_per_channel * org.banks_per_rank;
  const Cycle allowed = t.retention_cycles() + 8 * t.tREFI;

  auto bank_index = [&](int ch, int rank, int bank) {
    return (ch * org.ranks_per_channel + rank) * org.banks_per_rank + bank;
  };

  // Every bin is assumed freshly refreshed at sim_start.
  std::vector<Cycle> last_refresh(
      static_cast<std::size_t>(banks_total) * bins_per_bank, sim_start);

  // Nominal deadline schedule: staggered per bank for per-bank logs, the
  // shared all-bank cadence otherwise.
  bool per_bank = false;
  for (const Command& cmd : log)
    if (cmd.kind == CommandKind::kRefPb) per_bank = true;
  std::vector<BankAccount> accounts(banks_total);
  for (int ch = 0; ch < org.channels; ++ch)
    for (int rank = 0; rank < org.ranks_per_channel; ++rank)
      for (int bank = 0; bank < org.banks_per_rank; ++bank)
        accounts[bank_index(ch, rank, bank)].next_deadline =
            sim_start +
            (per_bank ? (bank + 1) * t.tREFIpb : static_cast<Cycle>(t.tREFI));

  auto advance_deadlines = [&](BankAccount& acc, int ch, int rank, int bank,
                               Cycle upto) {
    while (acc.next_deadline <= upto) {
      acc.next_deadline += t.tREFI;
      if (++acc.debt > 8 && !acc.debt_high_reported) {
        acc.debt_high_reported = true;
        out.push_back({ch, rank, bank, -1, 0, acc.debt,
                       "refresh debt exceeded +8 (missed deadlines)"});
      }
    }
  };

  auto record_refresh = [&](int ch, int rank, int bank, int row, Cycle issue,
                            Cycle completion, std::size_t record) {
    BankAccount& acc = accounts[bank_index(ch, rank, bank)];
    advance_deadlines(acc, ch, rank, bank, issue);
    if (--acc.debt < -8 && !acc.debt_low_reported) {
      acc.debt_low_reported = true;
      out.push_back({ch, rank, bank, -1, 0, acc.debt,
                     "refresh debt fell below -8 (excess pull-ins)"});
    }
    if (row % rpr != 0) {
      out.push_back({ch, rank, bank, row, rpr, 0,
                     "refresh row not aligned to a refresh bin (record " +
                         std::to_string(record) + ")"});
      return;
    }
    const std::size_t bin =
        static_cast<std::size_t>(bank_index(ch, rank, bank)) * bins_per_bank +
        row / rpr;
    const Cycle gap = completion - last_refresh[bin];
    if (gap > allowed)
      out.push_back({ch, rank, bank, row, rpr, gap,
                     "refresh gap exceeds retention + postponement slack"});
    last_refresh[bin] = completion;
  };

  for (std::size_t i = 0; i < log.size(); ++i) {
    const Command& cmd = log[i];
    if (cmd.kind != CommandKind::kRefAb && cmd.kind != CommandKind::kRefPb)
      continue;
    if (cmd.channel < 0 || cmd.channel >= org.channels || cmd.rank < 0 ||
        cmd.rank >= org.ranks_per_channel || cmd.bank < 0 ||
        cmd.bank >= org.banks_per_rank || cmd.row < 0 ||
        cmd.row >= org.rows_per_bank) {
      out.push_back({cmd.channel, cmd.rank, cmd.bank, cmd.row, 0, 0,
                     "refresh record outside the organization (record " +
                         std::to_string(i + 1) + ")"});
      continue;
    }
    if (cmd.kind == CommandKind::kRefAb) {
      for (int bank = 0; bank < org.banks_per_rank; ++bank)
        record_refresh(cmd.channel, cmd.rank, bank, cmd.row, cmd.cycle,
                       cmd.cycle + t.tRFCab, i + 1);
    } else {
      record_refresh(cmd.channel, cmd.rank, cmd.bank, cmd.row, cmd.cycle,
                     cmd.cycle + t.tRFCpb, i + 1);
    }
  }

  // Close the books at sim_end: deadlines owed and bins gone stale.
  for (int ch = 0; ch < org.channels; ++ch)
    for (int rank = 0; rank < org.ranks_per_channel; ++rank)
      for (int bank = 0; bank < org.banks_per_rank; ++bank) {
        const int bi = bank_index(ch, rank, bank);
        advance_deadlines(accounts[bi], ch, rank, bank, sim_end);
        for (int bin = 0; bin < bins_per_bank; ++bin) {
          const Cycle gap =
              sim_end -
              last_refresh[static_cast<std::size_t>(bi) * bins_per_bank + bin];
          if (gap > allowed)
            out.push_back({ch, rank, bank, bin * rpr, rpr, gap,
                           "bin unrefreshed past retention + slack at end"});
        }
      }
  return out;
}

}  // namespace refsim
