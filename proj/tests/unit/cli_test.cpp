#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "aladdin/util.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("aladdin-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the CLI with stdout and stderr discarded unless redirected by args.
  int run(const std::string& args) const {
    const std::string cmd = std::string("\"") + ALADDIN_CLI + "\" " + args + " >" + (dir_ / "stdout").string() + " 2>" + (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string out() const { return slurp(dir_ / "stdout"); }
  std::string err() const { return slurp(dir_ / "stderr"); }
  static std::string slurp(const fs::path& p) {
    std::string s;
    aladdin::read_file(p, s);
    return s;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

  fs::path dir_;
};

std::string payload(const std::string& name) { return (fixture::scenario_dir("city-walk") / "payloads" / name).string(); }

}  // namespace

TEST_F(CliTest, ValidateExitCodes) {
  EXPECT_EQ(run("payload validate " + payload("luigis-offer.nt")), 0);
  EXPECT_EQ(out(), payload("luigis-offer.nt") + ": ok\n");
  write("bad.nt", "<http://ex.org/o> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://example.org/aladdin/vocab#Offer> .\n");
  EXPECT_EQ(run("payload validate " + path("bad.nt")), 1);
  EXPECT_NE(out().find("MissingSeeAlso"), std::string::npos) << out();
  EXPECT_EQ(run("payload validate " + path("absent.nt")), 2);
}

TEST_F(CliTest, EncodeDecodeRoundTrip) {
  ASSERT_EQ(run("payload encode " + payload("luigis-menu.nt") + " -o " + path("menu.bin")), 0);
  ASSERT_EQ(run("payload decode " + path("menu.bin") + " -o " + path("menu.nt")), 0);
  ASSERT_EQ(run("payload encode " + path("menu.nt") + " -o " + path("menu2.bin")), 0);
  EXPECT_EQ(slurp(path("menu.bin")), slurp(path("menu2.bin")));
  EXPECT_LT(fs::file_size(path("menu.bin")), fs::file_size(payload("luigis-menu.nt")));
  write("junk.bin", "\x01\x02garbage");
  EXPECT_EQ(run("payload decode " + path("junk.bin")), 2);
}

TEST_F(CliTest, RunTwiceIsByteIdenticalAndMatchesGolden) {
  const auto scen = fixture::scenario_dir("city-walk").string();
  ASSERT_EQ(run("run " + scen + " --seed 42 --until 600000 --out " + path("a.log")), 0);
  ASSERT_EQ(run("run " + scen + " --seed 42 --until 600000 --out " + path("b.log") + " --stats"), 0);
  EXPECT_EQ(slurp(path("a.log")), slurp(path("b.log")));
  EXPECT_NE(err().find("\"tx_by_beacon\""), std::string::npos);
  const auto golden = (fixture::scenario_dir("city-walk") / "golden" / "seed42_until600000.log").string();
  EXPECT_EQ(run("golden " + path("a.log") + " " + golden), 0);
  ASSERT_EQ(run("run " + scen + " --seed 7 --until 600000 --out " + path("c.log")), 0);
  EXPECT_EQ(run("golden " + path("c.log") + " " + golden), 1);
  EXPECT_NE(err().find("line"), std::string::npos) << err();
  EXPECT_EQ(run("golden " + path("c.log") + " " + path("missing.log")), 2);
}

TEST_F(CliTest, RunToStdout) {
  ASSERT_EQ(run("run " + fixture::scenario_dir("micro-location").string() + " --seed 1 --until 1000"), 0);
  EXPECT_EQ(out().rfind("{\"t\":", 0), 0u) << out();
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("run " + fixture::scenario_dir("city-walk").string() + " --until 10"), 2);
  EXPECT_EQ(run("run " + fixture::scenario_dir("city-walk").string() + " --seed x --until 10"), 2);
  EXPECT_EQ(run("run " + path("nowhere") + " --seed 1 --until 10"), 2);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(CliTest, KeygenRefusesOverwrite) {
  ASSERT_EQ(run("keygen " + path("k")), 0);
  EXPECT_EQ(slurp(path("k.key")).size(), 65u);
  EXPECT_EQ(slurp(path("k.pub")).size(), 65u);
  EXPECT_EQ(run("keygen " + path("k")), 2);
}
