#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "aladdin/frame.hpp"
#include "aladdin/mobility.hpp"
#include "aladdin/pattern.hpp"
#include "aladdin/payload_codec.hpp"
#include "aladdin/resolver.hpp"
#include "aladdin/signature.hpp"
#include "aladdin/sim_time.hpp"

namespace aladdin {

enum class ReaderErrc { invalid_policy, invalid_rule };
using ReaderError = Error<ReaderErrc>;

struct Policy {
  bool require_signed = false;
  std::map<BeaconId, PublicKey> trusted_keys;
  std::set<BeaconId> blocklist;
  std::size_t rate_limit = 10;  // accepted announcements per beacon per window
  SimTime rate_window = sim_ms(60'000);
  SimTime dedup_ttl = sim_ms(300'000);
  SimTime reassembly_timeout = kDefaultReassemblyTimeout;
};

struct NotifyAction {
  // `{?name}` placeholders are replaced by the bound term's value.
  std::string template_text;
  bool operator==(const NotifyAction&) const = default;
};

struct DereferenceAction {
  std::string variable;  // without '?'
  bool operator==(const DereferenceAction&) const = default;
};

struct DropAction {
  bool operator==(const DropAction&) const = default;
};

using RuleAction = std::variant<NotifyAction, DereferenceAction, DropAction>;

struct Rule {
  std::vector<TriplePattern> patterns;
  RuleAction action;
};

// Throws ReaderError(invalid_rule) if a dereference variable never appears
// in object position.
void check_rule(const Rule& rule);

struct ReaderConfig {
  std::string reader_id;
  MobilityTrace trace = MobilityTrace::stationary({});
  Policy policy;
  std::vector<Rule> rules;
};

// ---- Effects -------------------------------------------------------------

enum class DropReason { checksum, duplicate, blocklisted, unsigned_announcement, bad_signature, rate_limited, invalid_payload };

std::string_view drop_reason_code(DropReason r);

struct RxLogged {
  std::uint32_t payload_version;
  Iri message_class;
  std::size_t triples;
};

struct Dropped {
  DropReason reason;
  std::optional<std::uint32_t> payload_version;
};

// One per firing rule, whatever the number of bindings. `text` is the
// template rendered for each binding, distinct renderings joined by "; ".
struct Notified {
  std::uint32_t payload_version;
  Iri message_class;
  std::vector<Binding> bindings;
  std::size_t rule;
  std::string text;
};

struct Dereferenced {
  std::uint32_t payload_version;
  Iri iri;
  bool found;
  SimTime latency;
  std::size_t rule;
};

using EffectKind = std::variant<RxLogged, Dropped, Notified, Dereferenced>;

struct Effect {
  SimTime time;
  std::optional<BeaconId> beacon_id;  // unknown only for frames that fail to decode
  EffectKind kind;
};

// ---- Reader state and pipeline -------------------------------------------

struct ReaderState {
  ReaderConfig config;
  Assembler assembler;
  std::map<std::pair<BeaconId, std::uint32_t>, SimTime> seen;  // -> last seen
  std::map<BeaconId, std::deque<SimTime>> rate_counters;       // accepted times
};

// Throws ReaderError for policy invariants (rate_limit >= 1, positive TTL
// and window) and invalid rules.
ReaderState reader_init(ReaderConfig config);

// Decodes a received datagram; a frame failing its checks becomes
// dropped(checksum). Otherwise continues as on_frame.
std::vector<Effect> on_bytes(ReaderState& s, ByteView datagram, SimTime now, const Resolver& resolver);

// Blocklist, reassembly, dedup, signature policy, rate limit, decode and
// validate, then rules. Never throws for bad input; failures are dropped
// effects. Effects after a dereference carry the dereference latency.
std::vector<Effect> on_frame(ReaderState& s, const Frame& f, SimTime now, const Resolver& resolver);

enum class SpamVerdict { allow, deny };

// Deny iff the accepted announcements from `beacon` within the trailing
// rate window (now - window, now] already number rate_limit.
SpamVerdict spam_check(const ReaderState& s, const BeaconId& beacon, SimTime now);

// Runs the rule list against a validated payload. Exposed for tests.
std::vector<Effect> evaluate_rules(const std::vector<Rule>& rules, const Graph& payload, const BeaconId& beacon,
                                   std::uint32_t payload_version, SimTime now, const Resolver& resolver);

std::string render_notification(const std::string& template_text, const Binding& binding);

}  // namespace aladdin
