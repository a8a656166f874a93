#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "aladdin/scenario.hpp"
#include "aladdin/util.hpp"
#include "oracles.hpp"

using namespace aladdin;
namespace fs = std::filesystem;

namespace {

class TempScenario {
 public:
  TempScenario() : root_(fs::temp_directory_path() / ("aladdin-scenario-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()))) {
    fs::remove_all(root_);
    fs::create_directories(root_ / "payloads");
    write("payloads/p.nt",
          "<http://ex.org/o> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://example.org/aladdin/vocab#Offer> .\n"
          "<http://ex.org/o> <http://www.w3.org/2000/01/rdf-schema#seeAlso> <http://ex.org/more> .\n");
  }
  ~TempScenario() { fs::remove_all(root_); }
  const fs::path& root() const { return root_; }
  void write(const std::string& rel, const std::string& text) const {
    fs::create_directories((root_ / rel).parent_path());
    std::ofstream(root_ / rel) << text;
  }

 private:
  fs::path root_;
};

const std::string kBeacon =
    R"({"id": "00000000000000000000000000000001", "x": 0, "y": 0, "period_ms": 1000, "payload": "payloads/p.nt"})";

std::string error_of(const fs::path& root) {
  try {
    load_scenario(root);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "<no error>";
}

bool contains(const std::string& haystack, const std::string& needle) { return haystack.find(needle) != std::string::npos; }

std::set<fs::path> tree(const fs::path& root) {
  std::set<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) out.insert(e.path());
  return out;
}

}  // namespace

TEST(LoadScenario, CityWalk) {
  const auto b = load_scenario(fixture::scenario_dir("city-walk"));
  EXPECT_EQ(b.beacons.size(), 7u);
  EXPECT_EQ(b.readers.size(), 1u);
  EXPECT_EQ(b.readers[0].rules.size(), 6u);
  EXPECT_EQ(b.channel.mtu, 254u);
  EXPECT_DOUBLE_EQ(b.channel.loss_prob, 0.02);
  ASSERT_TRUE(b.web);
  EXPECT_GT(b.web->size(), 0u);
}

TEST(LoadScenario, AllBundledScenariosLoad) {
  for (const char* name : {"city-walk", "micro-location", "spam-unsigned", "spam-ratelimit", "collision-sync", "collision-jitter"}) {
    EXPECT_NO_THROW(load_scenario(fixture::scenario_dir(name))) << name;
  }
}

TEST(LoadScenario, LoadingWritesNothing) {
  const auto dir = fixture::scenario_dir("city-walk");
  const auto before = tree(dir);
  load_scenario(dir);
  EXPECT_EQ(tree(dir), before);
}

TEST(LoadScenario, MissingBeaconsNamesField) {
  TempScenario s;
  s.write("scenario.json", R"({"readers": []})");
  EXPECT_TRUE(contains(error_of(s.root()), "beacons")) << error_of(s.root());
}

TEST(LoadScenario, MissingFileIsIoError) {
  TempScenario s;
  try {
    load_scenario(s.root());
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.code(), ConfigErrc::io_error);
  }
}

TEST(LoadScenario, FieldErrorsCarryPaths) {
  TempScenario s;
  s.write("scenario.json", R"({"beacons": [)" + kBeacon + R"(, {"id": "xyz", "x": 0, "y": 0, "period_ms": 1000, "payload": "payloads/p.nt"}], "readers": []})");
  EXPECT_TRUE(contains(error_of(s.root()), "beacons[1].id")) << error_of(s.root());

  s.write("scenario.json", R"({"beacons": [)" + kBeacon + R"(], "readers": [{"id": "r", "policy": {"rate_limit": 0}}]})");
  EXPECT_TRUE(contains(error_of(s.root()), "readers[0]")) << error_of(s.root());

  s.write("scenario.json", R"({"beacons": [)" + kBeacon + "," + kBeacon + R"(], "readers": []})");
  EXPECT_TRUE(contains(error_of(s.root()), "beacons[1]")) << error_of(s.root());

  s.write("scenario.json", R"({"beacons": [{"id": "00000000000000000000000000000001", "x": 0, "y": 0, "payload": "payloads/p.nt"}], "readers": []})");
  EXPECT_TRUE(contains(error_of(s.root()), "beacons[0].period_ms")) << error_of(s.root());

  s.write("scenario.json", R"({"beacons": [)" + kBeacon + R"(], "readers": [{"id": "*"}]})");
  EXPECT_TRUE(contains(error_of(s.root()), "readers[0].id")) << error_of(s.root());
}

TEST(LoadScenario, DecreasingTraceNamesFileAndRow) {
  TempScenario s;
  s.write("t.csv", "t_ms,x_m,y_m\n0,0,0\n1000,1,0\n500,2,0\n");
  s.write("scenario.json", R"({"beacons": [)" + kBeacon + R"(], "readers": [{"id": "r", "trace": "t.csv"}]})");
  const auto msg = error_of(s.root());
  EXPECT_TRUE(contains(msg, "t.csv")) << msg;
  EXPECT_TRUE(contains(msg, "row 3")) << msg;
}

TEST(ParseTrace, HeaderAndRows) {
  const auto t = parse_trace_csv("t_ms,x_m,y_m\n0,1.5,2\n250.5,3,-4\n", "x");
  ASSERT_EQ(t.waypoints().size(), 2u);
  EXPECT_EQ(t.waypoints()[1].t, sim_ms_from_double(250.5));
  EXPECT_EQ(t.waypoints()[1].position, (Position{3, -4}));
  EXPECT_THROW(parse_trace_csv("t,x,y\n0,0,0\n", "x"), ConfigError);
  EXPECT_THROW(parse_trace_csv("t_ms,x_m,y_m\n", "x"), ConfigError);
  EXPECT_THROW(parse_trace_csv("t_ms,x_m,y_m\n0,0\n", "x"), ConfigError);
}

TEST(Keys, HexRoundTrip) {
  const auto key = Ed25519Scheme::generate();
  EXPECT_EQ(parse_private_key(key_to_text(key.bytes), "k"), key);
  EXPECT_THROW(parse_private_key("abc", "k"), ConfigError);
  EXPECT_THROW(parse_public_key(std::string(64, 'g'), "k"), ConfigError);
}

TEST(RunScenario, UntilZeroIsEmpty) {
  EXPECT_TRUE(run_scenario(load_scenario(fixture::scenario_dir("city-walk")), 42, SimTime::zero()).empty());
}

TEST(RunScenario, CityWalkMatchesGolden) {
  const auto dir = fixture::scenario_dir("city-walk");
  const auto log = render_log(run_scenario(load_scenario(dir), 42, sim_ms(600'000)));
  std::string golden;
  ASSERT_TRUE(read_file(dir / "golden" / "seed42_until600000.log", golden));
  const auto r = compare_golden_text(log, golden);
  EXPECT_EQ(r.status, 0) << r.message;
}

TEST(RunScenario, StatsMatchHandCounts) {
  const auto log = run_scenario(load_scenario(fixture::scenario_dir("spam-ratelimit")), 1, sim_ms(60'000));
  const auto stats = compute_stats(log);
  std::size_t tx = 0, rx = 0, notify = 0, limited = 0;
  for (const auto& r : log) {
    tx += r.kind == "tx";
    rx += r.kind == "rx";
    notify += r.kind == "notify";
    limited += r.kind == "drop" && r.detail["reason"] == "rate_limited";
  }
  std::size_t stats_tx = 0;
  for (const auto& [_, n] : stats.tx_by_beacon) stats_tx += n;
  EXPECT_EQ(stats_tx, tx);
  ASSERT_EQ(stats.readers.size(), 1u);
  const auto& rs = stats.readers.begin()->second;
  EXPECT_EQ(rs.rx, rx);
  EXPECT_EQ(rs.notifications, notify);
  EXPECT_EQ(rs.drops.at("rate_limited"), limited);
  EXPECT_EQ(notify, 2u);
}

TEST(CompareGolden, Cases) {
  EXPECT_EQ(compare_golden_text("a\nb\n", "a\nb\n").status, 0);
  const auto diff = compare_golden_text("a\nb\nc\n", "a\nx\nc\n");
  EXPECT_EQ(diff.status, 1);
  EXPECT_EQ(diff.line, 2u);
  const auto shorter = compare_golden_text("a\n", "a\nb\n");
  EXPECT_EQ(shorter.status, 1);
  EXPECT_EQ(shorter.line, 2u);
  EXPECT_EQ(compare_golden("/nonexistent/a", "/nonexistent/b").status, 2);
}

TEST(LogLine, KeyOrderAndRoundTrip) {
  LogRecord r;
  r.t = SimTime(1234567);
  r.kind = "rx";
  r.src = "00000000000000000000000000000001";
  r.dst = "zach";
  r.detail["version"] = 1;
  const auto line = render_log_line(r);
  EXPECT_EQ(line.rfind(R"({"t":1234.567,"kind":"rx","src":)", 0), 0u) << line;
  EXPECT_EQ(parse_log_line(line), r);
  EXPECT_THROW(parse_log_line("{}"), std::invalid_argument);
}
