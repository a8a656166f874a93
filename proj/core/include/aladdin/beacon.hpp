#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aladdin/frame.hpp"
#include "aladdin/mobility.hpp"
#include "aladdin/payload_codec.hpp"
#include "aladdin/rdf.hpp"
#include "aladdin/rng.hpp"
#include "aladdin/signature.hpp"
#include "aladdin/sim_time.hpp"

namespace aladdin {

enum class BeaconErrc { invalid_config, invalid_payload, payload_too_large, immutable_beacon };

class BeaconError : public Error<BeaconErrc> {
 public:
  BeaconError(BeaconErrc code, const std::string& what, ValidationReport report = {})
      : Error(code, what), report_(std::move(report)) {}

  // Populated for invalid_payload.
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

enum class Mutability { write_once, updatable };

struct ScheduledUpdate {
  SimTime at;
  Graph payload;
};

inline constexpr double kDefaultBeaconRange = 5.0;

struct BeaconConfig {
  BeaconId beacon_id;
  std::string label;  // free text for humans; not on the wire
  Position position;
  double range = kDefaultBeaconRange;  // metres
  SimTime period = sim_ms(1000);
  SimTime jitter{0};
  SimTime phase{0};
  Mutability mutability = Mutability::write_once;
  std::optional<PrivateKey> signing_key;
  Graph initial_payload;
  std::vector<ScheduledUpdate> scheduled_updates;
};

struct BeaconOptions {
  std::size_t max_announcement_size = kDefaultMaxAnnouncementSize;
  ValidationOptions validation;
  const SignatureScheme* scheme = &default_scheme();
};

struct BeaconState {
  BeaconConfig config;
  Announcement current;
  std::uint32_t next_version = 2;
};

// Throws BeaconError(invalid_config) for out-of-range schedule or range
// values, or updates scheduled on a write-once beacon.
void check_config(const BeaconConfig& cfg);

BeaconState beacon_init(BeaconConfig cfg, const BeaconOptions& options = {});

// Smallest phase + k*period (k >= 0) at or after `now`, plus a uniform
// draw from [0, jitter] µs. Draws nothing from `rng` when jitter is zero.
SimTime next_broadcast_at(const BeaconState& s, SimTime now, SimRng& rng);

std::vector<Frame> emit(const BeaconState& s, std::size_t mtu = kDefaultMtu);

BeaconState apply_update(BeaconState s, const Graph& payload, SimTime now, const BeaconOptions& options = {});

}  // namespace aladdin
