#include "aladdin/scenario.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aladdin/util.hpp"

namespace aladdin {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void invalid(const std::string& path, const std::string& msg) {
  throw ConfigError(ConfigErrc::invalid_value, path + ": " + msg);
}

// Field access with the JSON path carried along for error messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return j_; }

  bool has(const char* key) const { return j_.contains(key); }

  Node at(const char* key) const {
    if (!j_.contains(key)) throw ConfigError(ConfigErrc::missing_field, join(key) + ": required field is missing");
    return Node(j_.at(key), join(key));
  }
  Node at(std::size_t i) const { return Node(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

  void expect_object() const {
    if (!j_.is_object()) invalid(path_, "expected an object");
  }
  std::size_t array_size() const {
    if (!j_.is_array()) invalid(path_, "expected an array");
    return j_.size();
  }

  std::string string() const {
    if (!j_.is_string()) invalid(path_, "expected a string");
    return j_.get<std::string>();
  }
  double number() const {
    if (!j_.is_number()) invalid(path_, "expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) invalid(path_, "expected a finite number");
    return v;
  }
  bool boolean() const {
    if (!j_.is_boolean()) invalid(path_, "expected true or false");
    return j_.get<bool>();
  }
  std::int64_t integer() const {
    if (!j_.is_number_integer()) invalid(path_, "expected an integer");
    return j_.get<std::int64_t>();
  }
  SimTime millis() const {
    const double v = number();
    if (v < 0) invalid(path_, "must not be negative");
    return sim_ms_from_double(v);
  }

  std::string string_or(const char* key, std::string fallback) const {
    return has(key) ? at(key).string() : fallback;
  }
  double number_or(const char* key, double fallback) const { return has(key) ? at(key).number() : fallback; }
  bool boolean_or(const char* key, bool fallback) const { return has(key) ? at(key).boolean() : fallback; }
  SimTime millis_or(const char* key, SimTime fallback) const { return has(key) ? at(key).millis() : fallback; }

 private:
  std::string join(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& j_;
  std::string path_;
};

class Loader {
 public:
  explicit Loader(fs::path root) : root_(std::move(root)) {}

  // Resolves a bundle-relative path taken from `field`.
  fs::path resolve(const Node& field) const {
    const std::string rel = field.string();
    if (rel.empty() || !stays_inside(rel)) invalid(field.path(), "path '" + rel + "' leaves the scenario directory");
    return root_ / rel;
  }

  std::string read(const Node& field) const {
    const fs::path p = resolve(field);
    std::string text;
    if (!read_file(p, text)) {
      throw ConfigError(ConfigErrc::io_error, field.path() + ": cannot read '" + field.string() + "'");
    }
    return text;
  }

  Graph payload(const Node& field) const {
    const std::string text = read(field);
    Graph g;
    try {
      g = parse_text(text);
    } catch (const CodecError& e) {
      throw ConfigError(ConfigErrc::payload_error, field.string() + ": " + e.what());
    }
    auto report = validate_payload(g);
    if (!report.ok()) {
      std::string msg = field.string() + ": payload is invalid:";
      for (const auto& v : report.violations) msg += " " + std::string(violation_code(v.code));
      throw ConfigError(ConfigErrc::payload_error, msg);
    }
    return g;
  }

  ChannelModel channel(const Node& n) const {
    n.expect_object();
    ChannelModel c;
    if (n.has("byte_time_us")) {
      const auto v = n.at("byte_time_us").integer();
      if (v <= 0) invalid(n.path() + ".byte_time_us", "must be positive");
      c.byte_time = SimTime(v);
    }
    c.loss_prob = n.number_or("loss_prob", c.loss_prob);
    if (c.loss_prob < 0.0 || c.loss_prob > 1.0) invalid(n.path() + ".loss_prob", "must lie in [0, 1]");
    if (n.has("mtu")) {
      const auto v = n.at("mtu").integer();
      if (v <= static_cast<std::int64_t>(kFragmentReserve) || v > 65535) {
        invalid(n.path() + ".mtu", "must lie in [" + std::to_string(kFragmentReserve + 1) + ", 65535]");
      }
      c.mtu = static_cast<std::size_t>(v);
    }
    c.band_note = n.string_or("band_note", c.band_note);
    return c;
  }

  BeaconConfig beacon(const Node& n) const {
    n.expect_object();
    BeaconConfig b;
    const Node id = n.at("id");
    auto parsed = BeaconId::from_hex(id.string());
    if (!parsed) invalid(id.path(), "expected 32 hex digits");
    b.beacon_id = *parsed;
    b.label = n.string_or("label", "");
    b.position = Position{n.at("x").number(), n.at("y").number()};
    b.range = n.number_or("range_m", kDefaultBeaconRange);
    if (b.range <= 0) invalid(n.path() + ".range_m", "must be positive");
    b.period = n.at("period_ms").millis();
    if (b.period <= SimTime::zero()) invalid(n.path() + ".period_ms", "must be positive");
    b.jitter = n.millis_or("jitter_ms", SimTime::zero());
    if (b.jitter >= b.period) invalid(n.path() + ".jitter_ms", "must be less than period_ms");
    b.phase = n.millis_or("phase_ms", SimTime::zero());
    b.mutability = n.boolean_or("mutable", false) ? Mutability::updatable : Mutability::write_once;
    b.initial_payload = payload(n.at("payload"));
    if (n.has("key")) {
      const Node key = n.at("key");
      b.signing_key = parse_private_key(read(key), key.string());
    }
    if (n.has("updates")) {
      const Node ups = n.at("updates");
      for (std::size_t i = 0; i < ups.array_size(); ++i) {
        const Node u = ups.at(i);
        u.expect_object();
        b.scheduled_updates.push_back(ScheduledUpdate{u.at("at_ms").millis(), payload(u.at("payload"))});
      }
      if (!b.scheduled_updates.empty() && b.mutability == Mutability::write_once) {
        invalid(ups.path(), "write-once beacon cannot have updates (set \"mutable\": true)");
      }
    }
    return b;
  }

  PublicKey trusted_key(const Node& n) const {
    const std::string text = n.string();
    Bytes raw;
    if (text.size() == 64 && from_hex(text, raw)) return PublicKey{raw};
    try {
      return parse_public_key(read(n), text);
    } catch (const ConfigError& e) {
      if (e.code() == ConfigErrc::io_error) invalid(n.path(), "expected 64 hex digits or a .pub file path");
      throw;
    }
  }

  Policy policy(const Node& n) const {
    n.expect_object();
    Policy p;
    p.require_signed = n.boolean_or("require_signed", p.require_signed);
    if (n.has("blocklist")) {
      const Node list = n.at("blocklist");
      for (std::size_t i = 0; i < list.array_size(); ++i) {
        auto id = BeaconId::from_hex(list.at(i).string());
        if (!id) invalid(list.at(i).path(), "expected 32 hex digits");
        p.blocklist.insert(*id);
      }
    }
    if (n.has("rate_limit")) {
      const auto v = n.at("rate_limit").integer();
      if (v < 1) invalid(n.path() + ".rate_limit", "must be at least 1");
      p.rate_limit = static_cast<std::size_t>(v);
    }
    p.rate_window = n.millis_or("rate_window_ms", p.rate_window);
    if (p.rate_window <= SimTime::zero()) invalid(n.path() + ".rate_window_ms", "must be positive");
    p.dedup_ttl = n.millis_or("dedup_ttl_ms", p.dedup_ttl);
    if (p.dedup_ttl <= SimTime::zero()) invalid(n.path() + ".dedup_ttl_ms", "must be positive");
    p.reassembly_timeout = n.millis_or("reassembly_timeout_ms", p.reassembly_timeout);
    if (p.reassembly_timeout <= SimTime::zero()) invalid(n.path() + ".reassembly_timeout_ms", "must be positive");
    if (n.has("trusted_keys")) {
      const Node keys = n.at("trusted_keys");
      keys.expect_object();
      for (const auto& [hex, _] : keys.raw().items()) {
        const Node entry = keys.at(hex.c_str());
        auto id = BeaconId::from_hex(hex);
        if (!id) invalid(entry.path(), "key must be a 32 hex digit beacon id");
        p.trusted_keys[*id] = trusted_key(entry);
      }
    }
    return p;
  }

  Rule rule(const Node& n) const {
    n.expect_object();
    Rule r;
    const Node patterns = n.at("patterns");
    const std::size_t count = patterns.array_size();
    if (count == 0) invalid(patterns.path(), "needs at least one pattern");
    for (std::size_t i = 0; i < count; ++i) {
      const Node p = patterns.at(i);
      try {
        r.patterns.push_back(parse_pattern(p.string()));
      } catch (const PatternError& e) {
        invalid(p.path(), e.what());
      }
    }
    const Node action = n.at("action");
    action.expect_object();
    const std::string kind = action.at("kind").string();
    if (kind == "notify") {
      r.action = NotifyAction{action.at("template").string()};
    } else if (kind == "dereference") {
      std::string var = action.at("var").string();
      if (!var.empty() && var.front() == '?') var.erase(0, 1);
      if (var.empty()) invalid(action.path() + ".var", "empty variable name");
      r.action = DereferenceAction{var};
    } else if (kind == "drop") {
      r.action = DropAction{};
    } else {
      invalid(action.path() + ".kind", "expected notify, dereference or drop");
    }
    try {
      check_rule(r);
    } catch (const ReaderError& e) {
      invalid(n.path(), e.what());
    }
    return r;
  }

  ReaderConfig reader(const Node& n) const {
    n.expect_object();
    ReaderConfig r;
    r.reader_id = n.at("id").string();
    if (r.reader_id.empty() || r.reader_id == "*" || r.reader_id == "-") {
      invalid(n.path() + ".id", "reader id must be non-empty and not '*' or '-'");
    }
    if (n.has("trace")) {
      const Node t = n.at("trace");
      r.trace = parse_trace_csv(read(t), t.string());
    } else if (n.has("position")) {
      const Node p = n.at("position");
      p.expect_object();
      r.trace = MobilityTrace::stationary({p.at("x").number(), p.at("y").number()});
    } else {
      throw ConfigError(ConfigErrc::missing_field, n.path() + ".trace: required field is missing");
    }
    if (n.has("policy")) r.policy = policy(n.at("policy"));
    if (n.has("rules")) {
      const Node rules = n.at("rules");
      for (std::size_t i = 0; i < rules.array_size(); ++i) r.rules.push_back(rule(rules.at(i)));
    }
    return r;
  }

  std::shared_ptr<const DocumentStore> web(const Node& n) const {
    n.expect_object();
    SimTime latency = n.millis_or("default_latency_ms", kDefaultFetchLatency);
    const Node manifest = n.at("manifest");
    const fs::path path = resolve(manifest);
    try {
      return std::make_shared<const DocumentStore>(DocumentStore::load(path.parent_path(), path, latency));
    } catch (const ResolverError& e) {
      throw ConfigError(ConfigErrc::io_error, manifest.path() + ": " + e.what());
    }
  }

 private:
  fs::path root_;
};

std::string_view next_line(std::string_view& rest) {
  const auto nl = rest.find('\n');
  std::string_view line = rest.substr(0, nl);
  rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

double parse_cell(std::string_view cell, const std::string& where) {
  const std::string s = trim(cell);
  double v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(ConfigErrc::trace_error, where + ": '" + s + "' is not a number");
  }
  return v;
}

}  // namespace

MobilityTrace parse_trace_csv(std::string_view text, const std::string& name) {
  std::string_view rest = text;
  if (trim(next_line(rest)) != "t_ms,x_m,y_m") {
    throw ConfigError(ConfigErrc::trace_error, name + ": header must be 't_ms,x_m,y_m'");
  }
  std::vector<Waypoint> points;
  std::size_t row = 0;
  while (!rest.empty()) {
    const std::string_view line = next_line(rest);
    if (trim(line).empty()) continue;
    ++row;
    const std::string where = name + ", row " + std::to_string(row);
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (std::size_t comma; (comma = line.find(',', start)) != std::string_view::npos; start = comma + 1) {
      cells.push_back(line.substr(start, comma - start));
    }
    cells.push_back(line.substr(start));
    if (cells.size() != 3) throw ConfigError(ConfigErrc::trace_error, where + ": expected 3 columns");
    const double t = parse_cell(cells[0], where);
    if (t < 0) throw ConfigError(ConfigErrc::trace_error, where + ": t_ms must not be negative");
    const SimTime at = sim_ms_from_double(t);
    if (!points.empty() && at <= points.back().t) {
      throw ConfigError(ConfigErrc::trace_error, where + ": t_ms must increase");
    }
    points.push_back(Waypoint{at, Position{parse_cell(cells[1], where), parse_cell(cells[2], where)}});
  }
  if (points.empty()) throw ConfigError(ConfigErrc::trace_error, name + ": no waypoints");
  return MobilityTrace(std::move(points));
}

namespace {

Bytes parse_key(std::string_view text, const std::string& name, const char* what) {
  Bytes raw;
  const std::string hex = trim(text);
  if (hex.size() != 64 || !from_hex(hex, raw)) {
    throw ConfigError(ConfigErrc::key_error, name + ": expected a " + what + " as 64 hex digits");
  }
  return raw;
}

}  // namespace

PrivateKey parse_private_key(std::string_view text, const std::string& name) {
  return PrivateKey{parse_key(text, name, "private key seed")};
}

PublicKey parse_public_key(std::string_view text, const std::string& name) {
  return PublicKey{parse_key(text, name, "public key")};
}

std::string key_to_text(ByteView key) { return to_hex(key) + "\n"; }

ScenarioBundle load_scenario(const fs::path& root) {
  std::string text;
  const fs::path file = root / "scenario.json";
  if (!read_file(file, text)) throw ConfigError(ConfigErrc::io_error, "cannot read " + file.string());
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError(ConfigErrc::invalid_value, "scenario.json: not valid JSON");

  const Node top(doc, "");
  top.expect_object();
  const Loader loader(root);
  ScenarioBundle bundle;
  bundle.root = root;
  if (top.has("channel")) bundle.channel = loader.channel(top.at("channel"));

  const Node beacons = top.at("beacons");
  for (std::size_t i = 0; i < beacons.array_size(); ++i) {
    bundle.beacons.push_back(loader.beacon(beacons.at(i)));
    for (std::size_t j = 0; j < i; ++j) {
      if (bundle.beacons[j].beacon_id == bundle.beacons[i].beacon_id) {
        invalid(beacons.at(i).path() + ".id", "duplicate beacon id");
      }
    }
  }
  const Node readers = top.at("readers");
  for (std::size_t i = 0; i < readers.array_size(); ++i) {
    bundle.readers.push_back(loader.reader(readers.at(i)));
    for (std::size_t j = 0; j < i; ++j) {
      if (bundle.readers[j].reader_id == bundle.readers[i].reader_id) {
        invalid(readers.at(i).path() + ".id", "duplicate reader id");
      }
    }
  }
  bundle.web = top.has("web") ? loader.web(top.at("web")) : std::make_shared<const DocumentStore>();

  // Announcements must fit; surface oversize payloads at load time.
  for (std::size_t i = 0; i < bundle.beacons.size(); ++i) {
    try {
      BeaconState s = beacon_init(bundle.beacons[i]);
      for (const auto& u : bundle.beacons[i].scheduled_updates) s = apply_update(std::move(s), u.payload, u.at);
    } catch (const BeaconError& e) {
      invalid(beacons.at(i).path(), e.what());
    }
  }
  return bundle;
}

World build_world(const ScenarioBundle& bundle, std::uint64_t seed) {
  std::vector<BeaconState> beacons;
  for (const auto& b : bundle.beacons) beacons.push_back(beacon_init(b));
  std::vector<ReaderState> readers;
  for (const auto& r : bundle.readers) readers.push_back(reader_init(r));
  return World(bundle.channel, std::move(beacons), std::move(readers), bundle.web, seed);
}

std::vector<LogRecord> run_scenario(const ScenarioBundle& bundle, std::uint64_t seed, SimTime t_end) {
  World world = build_world(bundle, seed);
  return world.run_until(t_end);
}

GoldenResult compare_golden_text(std::string_view log, std::string_view golden) {
  if (log == golden) return {0, 0, "identical"};
  std::string_view a = log;
  std::string_view b = golden;
  std::size_t line = 1;
  while (true) {
    const bool a_done = a.empty();
    const bool b_done = b.empty();
    const std::string_view la = next_line(a);
    const std::string_view lb = next_line(b);
    if (a_done || b_done || la != lb) break;
    ++line;
  }
  return {1, line, "first difference at line " + std::to_string(line)};
}

GoldenResult compare_golden(const fs::path& log, const fs::path& golden) {
  std::string a;
  std::string b;
  if (!read_file(log, a)) return {2, 0, "cannot read " + log.string()};
  if (!read_file(golden, b)) return {2, 0, "cannot read " + golden.string()};
  return compare_golden_text(a, b);
}

}  // namespace aladdin
