#include "aladdin/reader.hpp"

#include <algorithm>

namespace aladdin {

std::string_view drop_reason_code(DropReason r) {
  switch (r) {
    case DropReason::checksum: return "checksum";
    case DropReason::duplicate: return "duplicate";
    case DropReason::blocklisted: return "blocklisted";
    case DropReason::unsigned_announcement: return "unsigned";
    case DropReason::bad_signature: return "bad_signature";
    case DropReason::rate_limited: return "rate_limited";
    case DropReason::invalid_payload: return "invalid_payload";
  }
  return "unknown";
}

void check_rule(const Rule& rule) {
  const auto* deref = std::get_if<DereferenceAction>(&rule.action);
  if (!deref) return;
  bool bound = std::any_of(rule.patterns.begin(), rule.patterns.end(), [&](const TriplePattern& p) {
    const auto* v = std::get_if<Variable>(&p.object);
    return v && v->name == deref->variable;
  });
  if (!bound) {
    throw ReaderError(ReaderErrc::invalid_rule,
                      "dereference variable ?" + deref->variable + " does not appear in object position");
  }
}

ReaderState reader_init(ReaderConfig config) {
  const auto& p = config.policy;
  auto fail = [&](const std::string& msg) {
    throw ReaderError(ReaderErrc::invalid_policy, "reader " + config.reader_id + ": " + msg);
  };
  if (p.rate_limit < 1) fail("rate_limit must be at least 1");
  if (p.rate_window <= SimTime::zero()) fail("rate_window must be positive");
  if (p.dedup_ttl <= SimTime::zero()) fail("dedup_ttl must be positive");
  if (p.reassembly_timeout <= SimTime::zero()) fail("reassembly_timeout must be positive");
  for (const auto& rule : config.rules) check_rule(rule);

  const SimTime timeout = p.reassembly_timeout;
  return ReaderState{std::move(config), Assembler(timeout), {}, {}};
}

SpamVerdict spam_check(const ReaderState& s, const BeaconId& beacon, SimTime now) {
  auto it = s.rate_counters.find(beacon);
  if (it == s.rate_counters.end()) return SpamVerdict::allow;
  const SimTime window_start = now - s.config.policy.rate_window;
  auto in_window = std::count_if(it->second.begin(), it->second.end(), [&](SimTime t) { return t > window_start; });
  return static_cast<std::size_t>(in_window) >= s.config.policy.rate_limit ? SpamVerdict::deny : SpamVerdict::allow;
}

namespace {

void record_accepted(ReaderState& s, const BeaconId& beacon, SimTime now) {
  auto& times = s.rate_counters[beacon];
  const SimTime window_start = now - s.config.policy.rate_window;
  while (!times.empty() && times.front() <= window_start) times.pop_front();
  times.push_back(now);
}

Effect drop(SimTime now, const BeaconId& beacon, DropReason reason, std::optional<std::uint32_t> version) {
  return Effect{now, beacon, Dropped{reason, version}};
}

std::string term_value(const Term& t) {
  if (const auto* iri = std::get_if<Iri>(&t)) return iri->str();
  return std::get<Literal>(t).lexical();
}

}  // namespace

std::string render_notification(const std::string& template_text, const Binding& binding) {
  std::string out;
  std::size_t i = 0;
  while (i < template_text.size()) {
    if (template_text.compare(i, 2, "{?") == 0) {
      auto close = template_text.find('}', i + 2);
      if (close != std::string::npos) {
        auto it = binding.find(template_text.substr(i + 2, close - i - 2));
        if (it != binding.end()) {
          out += term_value(it->second);
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(template_text[i++]);
  }
  return out;
}

std::vector<Effect> evaluate_rules(const std::vector<Rule>& rules, const Graph& payload, const BeaconId& beacon,
                                   std::uint32_t payload_version, SimTime now, const Resolver& resolver) {
  std::vector<Effect> effects;
  const auto message = find_message_node(payload);
  const Iri message_class = message ? message->message_class : vocab::aladdin_term("Message");

  Graph context = payload;
  SimTime t = now;
  for (std::size_t index = 0; index < rules.size(); ++index) {
    const Rule& rule = rules[index];
    const auto bindings = match_patterns(context, rule.patterns);
    if (bindings.empty()) continue;

    if (std::holds_alternative<DropAction>(rule.action)) break;

    if (const auto* notify = std::get_if<NotifyAction>(&rule.action)) {
      std::vector<std::string> texts;
      for (const auto& b : bindings) {
        auto text = render_notification(notify->template_text, b);
        if (std::find(texts.begin(), texts.end(), text) == texts.end()) texts.push_back(std::move(text));
      }
      std::string joined;
      for (const auto& text : texts) joined += (joined.empty() ? "" : "; ") + text;
      effects.push_back(Effect{t, beacon, Notified{payload_version, message_class, bindings, index, joined}});
      continue;
    }

    const auto& deref = std::get<DereferenceAction>(rule.action);
    std::vector<Iri> targets;
    for (const auto& b : bindings) {
      auto it = b.find(deref.variable);
      if (it == b.end()) continue;
      const auto* iri = std::get_if<Iri>(&it->second);
      if (iri && std::find(targets.begin(), targets.end(), *iri) == targets.end()) targets.push_back(*iri);
    }
    // Fetches run one after another; later effects wait for them.
    Graph fetched_all;
    for (const auto& iri : targets) {
      FetchResult r = resolver.dereference(iri);
      t += r.latency;
      effects.push_back(Effect{t, beacon, Dereferenced{payload_version, iri, r.found(), r.latency, index}});
      if (r.graph) fetched_all = merge(fetched_all, *r.graph);
    }
    context = merge(context, fetched_all);
  }
  return effects;
}

std::vector<Effect> on_bytes(ReaderState& s, ByteView datagram, SimTime now, const Resolver& resolver) {
  Frame f;
  try {
    f = decode_frame(datagram);
  } catch (const FrameError&) {
    return {Effect{now, std::nullopt, Dropped{DropReason::checksum, std::nullopt}}};
  }
  return on_frame(s, f, now, resolver);
}

std::vector<Effect> on_frame(ReaderState& s, const Frame& f, SimTime now, const Resolver& resolver) {
  const auto& policy = s.config.policy;
  const BeaconId& beacon = f.header.beacon_id;
  const std::uint32_t version = f.header.payload_version;

  if (policy.blocklist.count(beacon)) return {drop(now, beacon, DropReason::blocklisted, version)};

  std::optional<Announcement> a;
  try {
    a = s.assembler.feed(f, now);
  } catch (const FrameError& e) {
    auto reason = e.code() == FrameErrc::malformed_announcement ? DropReason::bad_signature
                  : e.code() == FrameErrc::invalid_header       ? DropReason::checksum
                                                                : DropReason::invalid_payload;
    return {drop(now, beacon, reason, version)};
  }
  if (!a) return {};

  std::erase_if(s.seen, [&](const auto& entry) { return now - entry.second >= policy.dedup_ttl; });
  const auto seen_key = std::make_pair(beacon, version);
  if (auto it = s.seen.find(seen_key); it != s.seen.end()) {
    it->second = now;
    return {drop(now, beacon, DropReason::duplicate, version)};
  }
  s.seen.emplace(seen_key, now);

  if (policy.require_signed && !a->signature) return {drop(now, beacon, DropReason::unsigned_announcement, version)};
  if (a->signature) {
    auto key = policy.trusted_keys.find(beacon);
    if (key != policy.trusted_keys.end()) {
      if (!verify(*a, key->second)) return {drop(now, beacon, DropReason::bad_signature, version)};
    } else if (policy.require_signed) {
      // Signed, but by nobody we pin.
      return {drop(now, beacon, DropReason::bad_signature, version)};
    }
  }

  if (spam_check(s, beacon, now) == SpamVerdict::deny) return {drop(now, beacon, DropReason::rate_limited, version)};
  record_accepted(s, beacon, now);

  Graph payload;
  try {
    payload = decode_compact(a->payload);
  } catch (const CodecError&) {
    return {drop(now, beacon, DropReason::invalid_payload, version)};
  }
  if (!validate_payload(payload).ok()) return {drop(now, beacon, DropReason::invalid_payload, version)};

  const auto message = find_message_node(payload);
  std::vector<Effect> effects;
  effects.push_back(Effect{now, beacon, RxLogged{version, message->message_class, payload.size()}});
  auto rule_effects = evaluate_rules(s.config.rules, payload, beacon, version, now, resolver);
  effects.insert(effects.end(), std::make_move_iterator(rule_effects.begin()),
                 std::make_move_iterator(rule_effects.end()));
  return effects;
}

}  // namespace aladdin
