#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "aladdin/error.hpp"
#include "aladdin/rdf.hpp"
#include "aladdin/sim_time.hpp"

namespace aladdin {

enum class ResolverErrc { manifest_error, document_error };
using ResolverError = Error<ResolverErrc>;

struct FetchResult {
  std::optional<Graph> graph;  // set iff found
  SimTime latency{0};

  bool found() const noexcept { return graph.has_value(); }
  bool operator==(const FetchResult&) const = default;
};

// Linked Data dereferencing as seen by a reader. Implementations must not
// change observable state on dereference.
class Resolver {
 public:
  virtual ~Resolver() = default;
  virtual FetchResult dereference(const Iri& iri) const = 0;
};

inline constexpr SimTime kDefaultFetchLatency = sim_ms(120);

// Fixture-backed stand-in for the Web: IRI -> document, each with a
// simulated fetch latency.
class DocumentStore final : public Resolver {
 public:
  explicit DocumentStore(SimTime default_latency = kDefaultFetchLatency) : default_latency_(default_latency) {}

  // Manifest: one record per line, `iri <TAB> relative/path.nt [<TAB> latency_ms]`.
  // The IRI may be bare or wrapped in angle brackets; blank lines and
  // '#' comments are skipped. Paths resolve against `directory` and may not
  // leave it.
  static DocumentStore load(const std::filesystem::path& directory, const std::filesystem::path& manifest,
                            SimTime default_latency = kDefaultFetchLatency);

  // Throws ResolverError(manifest_error) on a duplicate IRI.
  void add(Iri iri, Graph document, std::optional<SimTime> latency = std::nullopt);

  FetchResult dereference(const Iri& iri) const override;

  std::size_t size() const noexcept { return documents_.size(); }
  bool contains(const Iri& iri) const { return documents_.count(iri) != 0; }
  SimTime default_latency() const noexcept { return default_latency_; }

 private:
  struct Entry {
    Graph graph;
    std::optional<SimTime> latency;
  };

  SimTime default_latency_;
  std::map<Iri, Entry> documents_;
};

}  // namespace aladdin
