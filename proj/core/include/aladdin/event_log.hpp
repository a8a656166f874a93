#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aladdin/sim_time.hpp"

namespace aladdin {

// One event log line: a JSON object with keys in the fixed order
// t, kind, src, dst, detail. `t` is simulated milliseconds with three
// decimals.
//
// kinds: tx (beacon frame on air; dst "*"), update (beacon payload version
// change; dst "-"), drop (radio-level reasons collision/loss, or reader
// pipeline reasons), rx (announcement accepted by a reader), deref, notify.
struct LogRecord {
  SimTime t{0};
  std::string kind;
  std::string src;
  std::string dst;
  nlohmann::ordered_json detail = nlohmann::ordered_json::object();

  bool operator==(const LogRecord&) const = default;
};

std::string render_log_line(const LogRecord& r);

// Throws std::invalid_argument for lines that are not log records.
LogRecord parse_log_line(std::string_view line);

// Every record rendered, one per line, each line '\n'-terminated.
std::string render_log(std::span<const LogRecord> records);

struct ReaderStats {
  std::size_t rx = 0;
  std::map<std::string, std::size_t> drops;  // reason -> count
  std::size_t notifications = 0;
  std::size_t dereferences = 0;

  bool operator==(const ReaderStats&) const = default;
};

struct RunStats {
  std::map<std::string, std::size_t> tx_by_beacon;
  std::map<std::string, ReaderStats> readers;
  std::size_t collisions = 0;

  nlohmann::ordered_json to_json() const;
  bool operator==(const RunStats&) const = default;
};

RunStats compute_stats(std::span<const LogRecord> records);

}  // namespace aladdin
