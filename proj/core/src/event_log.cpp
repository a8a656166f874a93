#include "aladdin/event_log.hpp"

#include <cmath>
#include <stdexcept>

namespace aladdin {

std::string render_log_line(const LogRecord& r) {
  std::string out = "{\"t\":";
  out += format_ms(r.t);
  out += ",\"kind\":";
  out += nlohmann::ordered_json(r.kind).dump();
  out += ",\"src\":";
  out += nlohmann::ordered_json(r.src).dump();
  out += ",\"dst\":";
  out += nlohmann::ordered_json(r.dst).dump();
  out += ",\"detail\":";
  out += r.detail.dump();
  out += '}';
  return out;
}

std::string render_log(std::span<const LogRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += render_log_line(r);
    out += '\n';
  }
  return out;
}

LogRecord parse_log_line(std::string_view line) {
  auto j = nlohmann::ordered_json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw std::invalid_argument("log line is not a JSON object");
  auto field = [&](const char* key) -> const nlohmann::ordered_json& {
    auto it = j.find(key);
    if (it == j.end()) throw std::invalid_argument(std::string("log line lacks '") + key + "'");
    return *it;
  };
  LogRecord r;
  const auto& t = field("t");
  if (!t.is_number()) throw std::invalid_argument("log 't' is not a number");
  r.t = sim_ms_from_double(t.get<double>());
  r.kind = field("kind").get<std::string>();
  r.src = field("src").get<std::string>();
  r.dst = field("dst").get<std::string>();
  r.detail = field("detail");
  return r;
}

nlohmann::ordered_json RunStats::to_json() const {
  nlohmann::ordered_json j;
  j["tx_by_beacon"] = tx_by_beacon;
  auto& rs = j["readers"] = nlohmann::ordered_json::object();
  for (const auto& [id, s] : readers) {
    rs[id] = {{"rx", s.rx}, {"drops", s.drops}, {"notifications", s.notifications}, {"dereferences", s.dereferences}};
  }
  j["collisions"] = collisions;
  return j;
}

RunStats compute_stats(std::span<const LogRecord> records) {
  RunStats stats;
  for (const auto& r : records) {
    if (r.kind == "tx") {
      ++stats.tx_by_beacon[r.src];
    } else if (r.kind == "rx") {
      ++stats.readers[r.dst].rx;
    } else if (r.kind == "drop") {
      const auto reason = r.detail.value("reason", std::string("unknown"));
      ++stats.readers[r.dst].drops[reason];
      if (reason == "collision") ++stats.collisions;
    } else if (r.kind == "notify") {
      ++stats.readers[r.dst].notifications;
    } else if (r.kind == "deref") {
      ++stats.readers[r.dst].dereferences;
    }
  }
  return stats;
}

}  // namespace aladdin
