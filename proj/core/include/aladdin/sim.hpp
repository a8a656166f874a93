#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <queue>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "aladdin/beacon.hpp"
#include "aladdin/event_log.hpp"
#include "aladdin/mobility.hpp"
#include "aladdin/reader.hpp"
#include "aladdin/resolver.hpp"
#include "aladdin/rng.hpp"

namespace aladdin {

struct ChannelModel {
  SimTime byte_time{8};  // µs per byte on air
  double loss_prob = 0.0;
  std::size_t mtu = kDefaultMtu;
  std::string band_note = "unlicensed 2.4-2.5 GHz";
};

// Throws std::invalid_argument unless byte_time > 0, loss_prob in [0, 1]
// and mtu leaves room for a chunk.
void check_channel(const ChannelModel& channel);

// Hard range cutoff, then a Bernoulli loss draw. The draw is skipped when
// loss_prob is 0 or 1.
bool receive_decision(double distance, double range, const ChannelModel& channel, SimRng& rng);

struct AirtimeInterval {
  SimTime start;
  SimTime end;  // exclusive

  bool overlaps(const AirtimeInterval& o) const noexcept { return start < o.end && o.start < end; }
  bool operator==(const AirtimeInterval&) const = default;
};

SimTime airtime(std::size_t frame_bytes, const ChannelModel& channel);

// Pure ALOHA: flags every interval that overlaps at least one other.
std::vector<bool> find_collisions(std::span<const AirtimeInterval> intervals);

// Tie order for events at the same instant.
enum class EventRank : std::uint8_t { payload_update = 0, beacon_broadcast = 1, frame_arrival = 2, deref_complete = 3 };

class World {
 public:
  World(ChannelModel channel, std::vector<BeaconState> beacons, std::vector<ReaderState> readers,
        std::shared_ptr<const Resolver> resolver, std::uint64_t seed, BeaconOptions beacon_options = {});

  // Processes every event at or before t_end (t_end >= clock()), advances
  // the clock to t_end, and returns the complete log so far.
  const std::vector<LogRecord>& run_until(SimTime t_end);

  SimTime clock() const noexcept { return clock_; }
  const std::vector<LogRecord>& log() const noexcept { return log_; }
  const std::vector<BeaconState>& beacons() const noexcept { return beacons_; }
  const std::vector<ReaderState>& readers() const noexcept { return readers_; }
  const ChannelModel& channel() const noexcept { return channel_; }
  std::size_t pending_events() const noexcept { return queue_.size(); }

 private:
  struct Broadcast {
    std::size_t beacon;
  };
  struct Update {
    std::size_t beacon;
    std::size_t update;
  };
  struct Arrival {
    std::size_t reader;
    std::size_t beacon;
    std::uint64_t tx_id;
    AirtimeInterval interval;
    std::uint32_t payload_version;
    std::uint8_t frag_index;
    Bytes datagram;
  };
  struct DerefComplete {
    std::size_t reader;
    std::uint64_t key;
  };
  using Payload = std::variant<Broadcast, Update, Arrival, DerefComplete>;

  struct Event {
    SimTime at;
    EventRank rank;
    std::size_t source;
    std::uint64_t seq;
    Payload payload;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.at != b.at) return a.at > b.at;
      if (a.rank != b.rank) return a.rank > b.rank;
      if (a.source != b.source) return a.source > b.source;
      return a.seq > b.seq;
    }
  };

  struct OnAir {
    AirtimeInterval interval;
    std::uint64_t tx_id;
  };
  struct Deferred {
    std::size_t beacon;
    std::vector<Effect> effects;
  };

  void schedule(SimTime at, EventRank rank, std::size_t source, Payload payload);
  void dispatch(Event& e);

  void broadcast_step(std::size_t beacon);
  void apply_scheduled_update(const Update& u);
  void frame_arrival(Arrival& a);
  void deref_complete(const DerefComplete& d);
  void log_effects(std::size_t reader, std::size_t tx_beacon, std::vector<Effect> effects);
  void log_effect(std::size_t reader, std::size_t tx_beacon, const Effect& e);

  ChannelModel channel_;
  std::vector<BeaconState> beacons_;
  std::vector<ReaderState> readers_;
  std::shared_ptr<const Resolver> resolver_;
  BeaconOptions beacon_options_;
  SimRng rng_;

  SimTime clock_{0};
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_tx_ = 0;
  std::uint64_t next_deferred_ = 0;
  SimTime max_airtime_{0};  // one full-mtu frame
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::vector<std::vector<OnAir>> on_air_;  // per reader, in-range transmissions
  std::map<std::uint64_t, Deferred> deferred_;
  std::vector<LogRecord> log_;
};

}  // namespace aladdin
