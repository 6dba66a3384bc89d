#include "refsim/core.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace refsim {
namespace {

std::uint64_t parse_number(std::string_view tok, int line_no) {
  int base = 10;
  if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) {
    tok.remove_prefix(2);
    base = 16;
  }
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), value, base);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("bad number '" + std::string(tok) + "'", line_no);
  return value;
}

std::size_t ring_size(int window) {
  std::size_t n = 1;
  while (n < static_cast<std::size_t>(window)) n <<= 1;
  return n;
}

}  // namespace

bool parse_trace_line(std::string_view line, int line_no, TraceRecord& out) {
  const std::size_t hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  std::string_view toks[3];
  int n = 0;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (n == 3) throw ParseError("too many fields", line_no);
    toks[n++] = line.substr(i, j - i);
    i = j;
  }
  if (n == 0) return false;
  if (n < 2)
    throw ParseError("expected 'bubbles read_addr [write_addr]'", line_no);
  const std::uint64_t bubbles = parse_number(toks[0], line_no);
  if (bubbles > (1ULL << 40))
    throw ParseError("bubble count too large", line_no);
  out.bubbles = static_cast<std::int64_t>(bubbles);
  out.read_addr = parse_number(toks[1], line_no);
  out.has_write = n == 3;
  out.write_addr = out.has_write ? parse_number(toks[2], line_no) : 0;
  return true;
}

TraceSource::TraceSource(std::vector<TraceRecord> records)
    : records_(std::move(records)) {
  if (records_.empty()) throw ConfigError("trace has no records");
}

TraceSource TraceSource::from_string(std::string_view text) {
  std::vector<TraceRecord> records;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                      : nl - pos);
    ++line_no;
    TraceRecord rec;
    if (parse_trace_line(line, line_no, rec)) records.push_back(rec);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return TraceSource(std::move(records));
}

TraceSource TraceSource::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

const TraceRecord& TraceSource::next() {
  const TraceRecord& rec = records_[pos_];
  pos_ = (pos_ + 1) % records_.size();
  ++consumed_;
  return rec;
}

Core::Core(std::uint8_t id, CoreParams params, TraceSource trace)
    : id_(id), params_(params), trace_(std::move(trace)) {
  read_done_.assign(ring_size(params_.window_size), false);
}

void Core::fetch_more() {
  while (occupancy_ < params_.window_size) {
    if (pending_bubbles_ == 0 && !pending_read_ && !pending_write_) {
      const TraceRecord& rec = trace_.next();
      pending_bubbles_ = rec.bubbles;
      pending_read_ = true;
      pending_read_addr_ = rec.read_addr;
      pending_write_ = rec.has_write;
      pending_write_addr_ = rec.write_addr;
    }
    if (pending_bubbles_ > 0) {
      const std::int64_t take =
          std::min(pending_bubbles_, params_.window_size - occupancy_);
      Slot slot;
      slot.kind = Slot::Kind::kBubbles;
      slot.count = take;
      window_.push_back(slot);
      occupancy_ += take;
      pending_bubbles_ -= take;
      continue;
    }
    if (pending_read_) {
      Slot slot;
      slot.kind = Slot::Kind::kRead;
      slot.read_id = next_read_id_++;
      slot.addr = pending_read_addr_;
      // The ring is as large as the window, so any prior read with this id
      // has already retired (the window cannot hold both).
      read_done_[slot.read_id & (read_done_.size() - 1)] = false;
      window_.push_back(slot);
      ++occupancy_;
      pending_read_ = false;
      continue;
    }
    if (pending_write_) {
      Slot slot;
      slot.kind = Slot::Kind::kWrite;
      slot.addr = pending_write_addr_;
      window_.push_back(slot);
      ++occupancy_;
      pending_write_ = false;
    }
  }
}

void Core::complete_read(std::uint32_t read_id) {
  read_done_[read_id & (read_done_.size() - 1)] = true;
  --reads_outstanding_;
}

void Core::tick(MemoryPort& mem) {
  ++cycles_;
  fetch_more();

  // In-order issue: walk forward from the first slot with unissued work.
  int budget = params_.issue_width;
  bool mem_blocked = false;
  bool issue_open = true;
  for (std::size_t i = issue_slot_; i < window_.size() && budget > 0 &&
                                    issue_open;
       ++i) {
    Slot& slot = window_[i];
    switch (slot.kind) {
      case Slot::Kind::kBubbles: {
        const std::int64_t unissued = slot.count - slot.issued_count;
        if (unissued > 0) {
          const std::int64_t take = std::min<std::int64_t>(budget, unissued);
          slot.issued_count += take;
          budget -= static_cast<int>(take);
        }
        if (slot.issued_count < slot.count) issue_open = false;
        break;
      }
      case Slot::Kind::kRead:
        if (!slot.issued) {
          if (reads_outstanding_ >= params_.mshrs ||
              !mem.issue_read(id_, slot.read_id, slot.addr)) {
            mem_blocked = true;
            issue_open = false;
            break;
          }
          slot.issued = true;
          ++reads_outstanding_;
          ++reads_issued_;
          --budget;
        }
        break;
      case Slot::Kind::kWrite:
        if (!slot.issued) {
          if (!mem.issue_write(id_, slot.addr)) {
            mem_blocked = true;
            issue_open = false;
            break;
          }
          slot.issued = true;
          ++writes_issued_;
          --budget;
        }
        break;
    }
    if (issue_open) issue_slot_ = i;
  }
  if (mem_blocked && budget == params_.issue_width) ++stall_cycles_;

  // In-order retire from the window head, bounded by the issue width.
  int retire_budget = params_.issue_width;
  while (retire_budget > 0 && !window_.empty()) {
    Slot& head = window_.front();
    if (head.kind == Slot::Kind::kBubbles) {
      if (head.issued_count == 0) break;
      const std::int64_t take =
          std::min<std::int64_t>(retire_budget, head.issued_count);
      head.count -= take;
      head.issued_count -= take;
      occupancy_ -= take;
      retired_ += static_cast<std::uint64_t>(take);
      retire_budget -= static_cast<int>(take);
      if (head.count == 0) {
        window_.pop_front();
        if (issue_slot_ > 0) --issue_slot_;
      }
      continue;
    }
    if (!head.issued) break;
    if (head.kind == Slot::Kind::kRead &&
        !read_done_[head.read_id & (read_done_.size() - 1)])
      break;
    window_.pop_front();
    if (issue_slot_ > 0) --issue_slot_;
    --occupancy_;
    ++retired_;
    --retire_budget;
  }
}

}  // namespace refsim
