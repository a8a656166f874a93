#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "aladdin/beacon.hpp"
#include "aladdin/error.hpp"
#include "aladdin/event_log.hpp"
#include "aladdin/reader.hpp"
#include "aladdin/resolver.hpp"
#include "aladdin/sim.hpp"

namespace aladdin {

enum class ConfigErrc { io_error, missing_field, invalid_value, payload_error, trace_error, key_error };

// what() names the offending field path (`readers[0].policy.rate_limit`)
// or file (`traces/zach.csv, row 4`).
using ConfigError = Error<ConfigErrc>;

struct ScenarioBundle {
  std::filesystem::path root;
  ChannelModel channel;
  std::vector<BeaconConfig> beacons;
  std::vector<ReaderConfig> readers;
  std::shared_ptr<const DocumentStore> web;
};

// Reads scenario.json and everything it references. Never writes.
ScenarioBundle load_scenario(const std::filesystem::path& root);

// Header `t_ms,x_m,y_m`, rows strictly ascending in t_ms. `name` is used
// in error messages.
MobilityTrace parse_trace_csv(std::string_view text, const std::string& name);

// Key files hold hex text: 64 digits for an Ed25519 seed (.key) or public
// key (.pub). Surrounding whitespace is ignored.
PrivateKey parse_private_key(std::string_view text, const std::string& name);
PublicKey parse_public_key(std::string_view text, const std::string& name);
std::string key_to_text(ByteView key);

World build_world(const ScenarioBundle& bundle, std::uint64_t seed);

std::vector<LogRecord> run_scenario(const ScenarioBundle& bundle, std::uint64_t seed, SimTime t_end);

struct GoldenResult {
  int status = 0;         // 0 identical, 1 differ, 2 unreadable
  std::size_t line = 0;   // first differing line, 1-based, when status == 1
  std::string message;
};

GoldenResult compare_golden(const std::filesystem::path& log, const std::filesystem::path& golden);
GoldenResult compare_golden_text(std::string_view log, std::string_view golden);

}  // namespace aladdin
