#include "aladdin/sim.hpp"

#include <algorithm>
#include <stdexcept>

namespace aladdin {

void check_channel(const ChannelModel& channel) {
  if (channel.byte_time <= SimTime::zero()) throw std::invalid_argument("channel byte_time must be positive");
  if (!(channel.loss_prob >= 0.0 && channel.loss_prob <= 1.0)) {
    throw std::invalid_argument("channel loss_prob must lie in [0, 1]");
  }
  if (channel.mtu <= kFragmentReserve || channel.mtu > 65535) {
    throw std::invalid_argument("channel mtu must lie in [" + std::to_string(kFragmentReserve + 1) + ", 65535]");
  }
}

bool receive_decision(double distance, double range, const ChannelModel& channel, SimRng& rng) {
  if (distance > range) return false;
  if (channel.loss_prob <= 0.0) return true;
  if (channel.loss_prob >= 1.0) return false;
  return !rng.bernoulli(channel.loss_prob);
}

SimTime airtime(std::size_t frame_bytes, const ChannelModel& channel) {
  return channel.byte_time * static_cast<SimTime::rep>(frame_bytes);
}

std::vector<bool> find_collisions(std::span<const AirtimeInterval> intervals) {
  std::vector<bool> hit(intervals.size(), false);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    for (std::size_t j = i + 1; j < intervals.size(); ++j) {
      if (intervals[i].overlaps(intervals[j])) hit[i] = hit[j] = true;
    }
  }
  return hit;
}

World::World(ChannelModel channel, std::vector<BeaconState> beacons, std::vector<ReaderState> readers,
             std::shared_ptr<const Resolver> resolver, std::uint64_t seed, BeaconOptions beacon_options)
    : channel_(std::move(channel)),
      beacons_(std::move(beacons)),
      readers_(std::move(readers)),
      resolver_(std::move(resolver)),
      beacon_options_(beacon_options),
      rng_(seed),
      on_air_(readers_.size()) {
  check_channel(channel_);
  if (!resolver_) throw std::invalid_argument("world needs a resolver");
  max_airtime_ = airtime(channel_.mtu, channel_);
  for (std::size_t b = 0; b < beacons_.size(); ++b) {
    schedule(next_broadcast_at(beacons_[b], clock_, rng_), EventRank::beacon_broadcast, b, Broadcast{b});
  }
  for (std::size_t b = 0; b < beacons_.size(); ++b) {
    const auto& updates = beacons_[b].config.scheduled_updates;
    for (std::size_t u = 0; u < updates.size(); ++u) {
      schedule(updates[u].at, EventRank::payload_update, b, Update{b, u});
    }
  }
}

void World::schedule(SimTime at, EventRank rank, std::size_t source, Payload payload) {
  queue_.push(Event{at, rank, source, next_seq_++, std::move(payload)});
}

const std::vector<LogRecord>& World::run_until(SimTime t_end) {
  if (t_end < clock_) throw std::invalid_argument("run_until: t_end is before the current clock");
  while (!queue_.empty() && queue_.top().at <= t_end) {
    Event e = queue_.top();
    queue_.pop();
    clock_ = e.at;
    dispatch(e);
  }
  clock_ = t_end;
  return log_;
}

void World::dispatch(Event& e) {
  std::visit(
      [&](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Broadcast>) {
          broadcast_step(p.beacon);
        } else if constexpr (std::is_same_v<T, Update>) {
          apply_scheduled_update(p);
        } else if constexpr (std::is_same_v<T, Arrival>) {
          frame_arrival(p);
        } else {
          deref_complete(p);
        }
      },
      e.payload);
}

void World::broadcast_step(std::size_t b) {
  const BeaconState& beacon = beacons_[b];
  const std::string src = beacon.config.beacon_id.hex();
  const auto frames = emit(beacon, channel_.mtu);

  SimTime start = clock_;
  for (const auto& f : frames) {
    Bytes wire = encode_frame(f);
    const AirtimeInterval interval{start, start + airtime(wire.size(), channel_)};
    const std::uint64_t tx_id = next_tx_++;

    nlohmann::ordered_json detail;
    detail["version"] = f.header.payload_version;
    detail["frag"] = f.header.frag_index;
    detail["count"] = f.header.frag_count;
    detail["bytes"] = wire.size();
    detail["start_us"] = interval.start.count();
    detail["end_us"] = interval.end.count();
    log_.push_back(LogRecord{clock_, "tx", src, "*", std::move(detail)});

    for (std::size_t r = 0; r < readers_.size(); ++r) {
      const Position at = position_at(readers_[r].config.trace, interval.start);
      const double d = distance(at, beacon.config.position);
      if (d > beacon.config.range) continue;
      // In range: the frame occupies this reader's channel whether or not
      // it survives the loss draw.
      on_air_[r].push_back(OnAir{interval, tx_id});
      if (receive_decision(d, beacon.config.range, channel_, rng_)) {
        schedule(interval.end, EventRank::frame_arrival, b,
                 Arrival{r, b, tx_id, interval, f.header.payload_version, f.header.frag_index, wire});
      } else {
        nlohmann::ordered_json lost;
        lost["reason"] = "loss";
        lost["version"] = f.header.payload_version;
        lost["frag"] = f.header.frag_index;
        log_.push_back(LogRecord{clock_, "drop", src, readers_[r].config.reader_id, std::move(lost)});
      }
    }
    start = interval.end;
  }
  schedule(next_broadcast_at(beacon, clock_ + SimTime(1), rng_), EventRank::beacon_broadcast, b, Broadcast{b});
}

void World::apply_scheduled_update(const Update& u) {
  BeaconState& beacon = beacons_[u.beacon];
  const Graph payload = beacon.config.scheduled_updates[u.update].payload;
  beacon = apply_update(std::move(beacon), payload, clock_, beacon_options_);
  nlohmann::ordered_json detail;
  detail["version"] = beacon.current.payload_version;
  detail["triples"] = payload.size();
  log_.push_back(LogRecord{clock_, "update", beacon.config.beacon_id.hex(), "-", std::move(detail)});
}

void World::frame_arrival(Arrival& a) {
  auto& air = on_air_[a.reader];
  const SimTime horizon = clock_ - max_airtime_;
  std::erase_if(air, [&](const OnAir& o) { return o.interval.end <= horizon; });

  const bool collided = std::any_of(air.begin(), air.end(), [&](const OnAir& o) {
    return o.tx_id != a.tx_id && o.interval.overlaps(a.interval);
  });
  if (collided) {
    nlohmann::ordered_json detail;
    detail["reason"] = "collision";
    detail["version"] = a.payload_version;
    detail["frag"] = a.frag_index;
    log_.push_back(LogRecord{clock_, "drop", beacons_[a.beacon].config.beacon_id.hex(),
                             readers_[a.reader].config.reader_id, std::move(detail)});
    return;
  }
  log_effects(a.reader, a.beacon, on_bytes(readers_[a.reader], a.datagram, clock_, *resolver_));
}

void World::log_effects(std::size_t reader, std::size_t tx_beacon, std::vector<Effect> effects) {
  // Effects delayed by dereference latency become deref_complete events;
  // consecutive effects sharing a time share an event.
  std::map<SimTime, std::uint64_t> keys;
  for (auto& e : effects) {
    if (e.time <= clock_) {
      log_effect(reader, tx_beacon, e);
      continue;
    }
    auto [it, fresh] = keys.try_emplace(e.time, next_deferred_);
    if (fresh) {
      deferred_.emplace(next_deferred_, Deferred{tx_beacon, {}});
      schedule(e.time, EventRank::deref_complete, reader, DerefComplete{reader, next_deferred_});
      ++next_deferred_;
    }
    deferred_.at(it->second).effects.push_back(std::move(e));
  }
}

void World::deref_complete(const DerefComplete& d) {
  auto node = deferred_.extract(d.key);
  for (const auto& e : node.mapped().effects) log_effect(d.reader, node.mapped().beacon, e);
}

void World::log_effect(std::size_t reader, std::size_t tx_beacon, const Effect& e) {
  LogRecord r;
  r.t = e.time;
  r.src = e.beacon_id ? e.beacon_id->hex() : beacons_[tx_beacon].config.beacon_id.hex();
  r.dst = readers_[reader].config.reader_id;
  auto& detail = r.detail;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RxLogged>) {
          r.kind = "rx";
          detail["version"] = k.payload_version;
          detail["class"] = k.message_class.str();
          detail["triples"] = k.triples;
        } else if constexpr (std::is_same_v<T, Dropped>) {
          r.kind = "drop";
          detail["reason"] = std::string(drop_reason_code(k.reason));
          if (k.payload_version) detail["version"] = *k.payload_version;
        } else if constexpr (std::is_same_v<T, Notified>) {
          r.kind = "notify";
          detail["version"] = k.payload_version;
          detail["rule"] = k.rule;
          detail["class"] = k.message_class.str();
          detail["text"] = k.text;
          auto& all = detail["bindings"] = nlohmann::ordered_json::array();
          for (const auto& binding : k.bindings) {
            auto b = nlohmann::ordered_json::object();
            for (const auto& [name, term] : binding) b[name] = render_term(term);
            all.push_back(std::move(b));
          }
        } else {
          r.kind = "deref";
          detail["version"] = k.payload_version;
          detail["rule"] = k.rule;
          detail["iri"] = k.iri.str();
          detail["found"] = k.found;
          detail["latency_ms"] = format_ms(k.latency);
        }
      },
      e.kind);
  log_.push_back(std::move(r));
}

}  // namespace aladdin
