#include "aladdin/beacon.hpp"

#include <cmath>

namespace aladdin {

namespace {

Announcement make_announcement(const BeaconConfig& cfg, std::uint32_t version, const Graph& payload,
                               const BeaconOptions& options) {
  auto report = validate_payload(payload, options.validation);
  if (!report.ok()) {
    std::string msg = "payload for beacon " + cfg.beacon_id.hex() + " is invalid:";
    for (const auto& v : report.violations) msg += " " + std::string(violation_code(v.code));
    throw BeaconError(BeaconErrc::invalid_payload, msg, std::move(report));
  }
  Announcement a;
  a.beacon_id = cfg.beacon_id;
  a.payload_version = version;
  a.payload = encode_compact(payload);
  if (a.payload.size() > options.max_announcement_size) {
    throw BeaconError(BeaconErrc::payload_too_large, "encoded payload of " + std::to_string(a.payload.size()) +
                                                         " bytes exceeds " +
                                                         std::to_string(options.max_announcement_size));
  }
  if (cfg.signing_key) a = sign(std::move(a), *cfg.signing_key, *options.scheme);
  return a;
}

}  // namespace

void check_config(const BeaconConfig& cfg) {
  auto fail = [&](const std::string& msg) {
    throw BeaconError(BeaconErrc::invalid_config, "beacon " + cfg.beacon_id.hex() + ": " + msg);
  };
  if (cfg.period <= SimTime::zero()) fail("period must be positive");
  if (cfg.jitter < SimTime::zero() || cfg.jitter >= cfg.period) fail("jitter must lie in [0, period)");
  if (cfg.phase < SimTime::zero()) fail("phase must be non-negative");
  if (!(cfg.range > 0.0) || !std::isfinite(cfg.range)) fail("range must be positive");
  if (cfg.mutability == Mutability::write_once && !cfg.scheduled_updates.empty()) {
    fail("write-once beacons cannot have scheduled updates");
  }
}

BeaconState beacon_init(BeaconConfig cfg, const BeaconOptions& options) {
  check_config(cfg);
  BeaconState s;
  s.current = make_announcement(cfg, 1, cfg.initial_payload, options);
  s.config = std::move(cfg);
  s.next_version = 2;
  return s;
}

SimTime next_broadcast_at(const BeaconState& s, SimTime now, SimRng& rng) {
  const auto& cfg = s.config;
  std::int64_t k = 0;
  if (now > cfg.phase) {
    const std::int64_t elapsed = (now - cfg.phase).count();
    const std::int64_t period = cfg.period.count();
    k = (elapsed + period - 1) / period;
  }
  SimTime base = cfg.phase + k * cfg.period;
  if (cfg.jitter > SimTime::zero()) base += SimTime(rng.uniform_int(0, cfg.jitter.count()));
  return base;
}

std::vector<Frame> emit(const BeaconState& s, std::size_t mtu) { return fragment(s.current, mtu); }

BeaconState apply_update(BeaconState s, const Graph& payload, SimTime /*now*/, const BeaconOptions& options) {
  if (s.config.mutability != Mutability::updatable) {
    throw BeaconError(BeaconErrc::immutable_beacon, "beacon " + s.config.beacon_id.hex() + " is write-once");
  }
  s.current = make_announcement(s.config, s.next_version, payload, options);
  ++s.next_version;
  return s;
}

}  // namespace aladdin
