// aladdin: scenario runner and payload utilities.
//
// Exit status is 0 on success, 1 for a failed validation or golden
// mismatch, 2 for usage, configuration and I/O errors.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aladdin/payload_codec.hpp"
#include "aladdin/scenario.hpp"
#include "aladdin/signature.hpp"
#include "aladdin/util.hpp"

namespace fs = std::filesystem;
using namespace aladdin;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::string out;
  if (!read_file(path, out)) throw Usage("cannot read " + path);
  return out;
}

void emit_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << data;
  out.close();
  if (!out) throw Usage("cannot write " + path);
}

Graph parse_payload_file(const std::string& path) {
  try {
    return parse_text(slurp(path));
  } catch (const CodecError& e) {
    throw Usage(path + ": " + e.what());
  }
}

int cmd_run(const std::string& dir, std::uint64_t seed, double until_ms, const std::string& out, bool stats) {
  if (!(until_ms >= 0)) throw Usage("--until must be a non-negative number of milliseconds");
  const ScenarioBundle bundle = load_scenario(dir);
  const auto log = run_scenario(bundle, seed, sim_ms_from_double(until_ms));
  emit_output(out, render_log(log));
  if (stats) std::cerr << compute_stats(log).to_json().dump(2) << '\n';
  return kOk;
}

int cmd_golden(const std::string& log, const std::string& golden) {
  const GoldenResult r = compare_golden(log, golden);
  if (r.status == 0) return kOk;
  std::cerr << r.message << '\n';
  return r.status == 1 ? kFailed : kUsage;
}

int cmd_validate(const std::string& file) {
  const auto report = validate_payload(parse_payload_file(file));
  if (report.ok()) {
    std::cout << file << ": ok\n";
    return kOk;
  }
  for (const auto& v : report.violations) {
    std::cout << file << ": " << violation_code(v.code);
    if (!v.message.empty()) std::cout << ": " << v.message;
    std::cout << '\n';
  }
  return kFailed;
}

int cmd_encode(const std::string& file, const std::string& out) {
  const Bytes bytes = encode_compact(parse_payload_file(file));
  emit_output(out, std::string(bytes.begin(), bytes.end()));
  return kOk;
}

int cmd_decode(const std::string& file, const std::string& out) {
  const std::string raw = slurp(file);
  Graph g;
  try {
    g = decode_compact(ByteView(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
  } catch (const CodecError& e) {
    throw Usage(file + ": " + e.what());
  }
  emit_output(out, serialize_text(g));
  return kOk;
}

int cmd_keygen(const std::string& stem) {
  const fs::path key = stem + ".key";
  const fs::path pub = stem + ".pub";
  for (const auto& p : {key, pub}) {
    if (fs::exists(p)) throw Usage(p.string() + " already exists");
  }
  const PrivateKey priv = Ed25519Scheme::generate();
  emit_output(key.string(), key_to_text(priv.bytes));
  emit_output(pub.string(), key_to_text(default_scheme().public_key(priv).bytes));
  std::cout << "wrote " << key.string() << " and " << pub.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aladdin local-area Linked Data casting simulator"};
  app.require_subcommand(1);

  std::string scenario_dir, out_path, file, log_path, golden_path, stem;
  std::uint64_t seed = 0;
  double until_ms = 0;
  bool stats = false;

  auto* run = app.add_subcommand("run", "run a scenario bundle and write its event log");
  run->add_option("scenario", scenario_dir, "scenario directory")->required();
  run->add_option("--seed", seed, "64-bit RNG seed")->required();
  run->add_option("--until", until_ms, "simulated end time in ms")->required();
  run->add_option("--out", out_path, "event log path (default stdout)");
  run->add_flag("--stats", stats, "print run statistics as JSON on stderr");

  auto* golden = app.add_subcommand("golden", "compare an event log against a golden log");
  golden->add_option("log", log_path)->required();
  golden->add_option("golden", golden_path)->required();

  auto* payload = app.add_subcommand("payload", "payload text and compact encoding utilities");
  payload->require_subcommand(1);
  auto* validate = payload->add_subcommand("validate", "check a payload against the message rules");
  validate->add_option("file", file)->required();
  auto* encode = payload->add_subcommand("encode", "text payload to compact bytes");
  encode->add_option("file", file)->required();
  encode->add_option("-o,--output", out_path);
  auto* decode = payload->add_subcommand("decode", "compact bytes to canonical text");
  decode->add_option("file", file)->required();
  decode->add_option("-o,--output", out_path);

  auto* keygen = app.add_subcommand("keygen", "write an Ed25519 key pair as <name>.key and <name>.pub");
  keygen->add_option("name", stem)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return cmd_run(scenario_dir, seed, until_ms, out_path, stats);
    if (*golden) return cmd_golden(log_path, golden_path);
    if (*validate) return cmd_validate(file);
    if (*encode) return cmd_encode(file, out_path);
    if (*decode) return cmd_decode(file, out_path);
    if (*keygen) return cmd_keygen(stem);
  } catch (const std::exception& e) {
    std::cerr << "aladdin: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
