#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "aladdin/payload_codec.hpp"
#include "aladdin/resolver.hpp"
#include "oracles.hpp"

using namespace aladdin;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("aladdin-resolver-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  void write(const std::string& rel, const std::string& text) const {
    fs::create_directories((path_ / rel).parent_path());
    std::ofstream(path_ / rel) << text;
  }

 private:
  fs::path path_;
};

const char* kDoc = "<http://ex.org/d> <http://ex.org/p> \"v\" .\n";

}  // namespace

TEST(DocumentStoreLoad, EmptyManifest) {
  TempDir dir;
  dir.write("manifest.tsv", "# nothing here\n\n");
  EXPECT_EQ(DocumentStore::load(dir.path(), dir.path() / "manifest.tsv").size(), 0u);
}

TEST(DocumentStoreLoad, ThreeDocuments) {
  TempDir dir;
  dir.write("docs/a.nt", kDoc);
  dir.write("docs/b.nt", kDoc);
  dir.write("c.nt", "");
  dir.write("manifest.tsv", "http://ex.org/a\tdocs/a.nt\n<http://ex.org/b>\tdocs/b.nt\t15\nurn:c\tc.nt\n");
  const auto store = DocumentStore::load(dir.path(), dir.path() / "manifest.tsv", sim_ms(40));
  EXPECT_EQ(store.size(), 3u);
  EXPECT_TRUE(store.contains(Iri("http://ex.org/b")));
  EXPECT_EQ(store.dereference(Iri("http://ex.org/a")).latency, sim_ms(40));
  EXPECT_EQ(store.dereference(Iri("http://ex.org/b")).latency, sim_ms(15));
  EXPECT_EQ(*store.dereference(Iri("http://ex.org/a")).graph, parse_text(kDoc));
}

TEST(DocumentStoreLoad, MalformedDocumentNamesFile) {
  TempDir dir;
  dir.write("bad.nt", "<http://ex.org/a> oops .\n");
  dir.write("manifest.tsv", "http://ex.org/a\tbad.nt\n");
  try {
    DocumentStore::load(dir.path(), dir.path() / "manifest.tsv");
    FAIL();
  } catch (const ResolverError& e) {
    EXPECT_EQ(e.code(), ResolverErrc::document_error);
    EXPECT_NE(std::string(e.what()).find("bad.nt"), std::string::npos) << e.what();
  }
}

TEST(DocumentStoreLoad, ManifestErrors) {
  TempDir dir;
  dir.write("a.nt", kDoc);
  for (const char* manifest : {"http://ex.org/a\n", "not an iri\ta.nt\n", "http://ex.org/a\t../a.nt\n",
                               "http://ex.org/a\ta.nt\tsoon\n", "http://ex.org/a\ta.nt\nhttp://ex.org/a\ta.nt\n",
                               "http://ex.org/a\tmissing.nt\n", "http://ex.org/a\t/etc/passwd\n"}) {
    dir.write("manifest.tsv", manifest);
    EXPECT_THROW(DocumentStore::load(dir.path(), dir.path() / "manifest.tsv"), ResolverError) << manifest;
  }
  EXPECT_THROW(DocumentStore::load(dir.path(), dir.path() / "absent.tsv"), ResolverError);
}

TEST(Dereference, FoundNotFoundIdempotent) {
  DocumentStore store(sim_ms(120));
  store.add(Iri("http://ex.org/a"), parse_text(kDoc));
  const auto hit = store.dereference(Iri("http://ex.org/a"));
  EXPECT_TRUE(hit.found());
  EXPECT_EQ(hit.latency, sim_ms(120));
  const auto miss = store.dereference(Iri("http://ex.org/zzz"));
  EXPECT_FALSE(miss.found());
  EXPECT_EQ(miss.latency, sim_ms(120));
  EXPECT_EQ(store.dereference(Iri("http://ex.org/a")), hit);
  EXPECT_EQ(store.dereference(Iri("http://ex.org/zzz")), miss);
  EXPECT_THROW(store.add(Iri("http://ex.org/a"), Graph{}), ResolverError);
}

TEST(Dereference, CityWalkManifestLoads) {
  const auto dir = fixture::scenario_dir("city-walk") / "web";
  const auto store = DocumentStore::load(dir, dir / "manifest.tsv");
  EXPECT_EQ(store.size(), 11u);
  // Fetched documents must not introduce message nodes into a payload.
  for (const char* iri : {"http://luigis.example/menu", "http://reviews.example/luigis", "http://visit-birmingham.example/zones"}) {
    const auto r = store.dereference(Iri(iri));
    ASSERT_TRUE(r.found()) << iri;
    EXPECT_FALSE(find_message_node(*r.graph)) << iri;
  }
}
