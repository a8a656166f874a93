#include "aladdin/resolver.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "aladdin/payload_codec.hpp"
#include "aladdin/util.hpp"

namespace aladdin {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  for (;;) {
    auto tab = line.find('\t');
    fields.push_back(line.substr(0, tab));
    if (tab == std::string_view::npos) break;
    line.remove_prefix(tab + 1);
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

DocumentStore DocumentStore::load(const std::filesystem::path& directory, const std::filesystem::path& manifest,
                                  SimTime default_latency) {
  DocumentStore store(default_latency);
  std::string text;
  if (!read_file(manifest, text)) {
    throw ResolverError(ResolverErrc::manifest_error, "cannot read manifest " + manifest.string());
  }
  std::istringstream lines(text);
  std::string line;
  std::size_t row = 0;
  while (std::getline(lines, line)) {
    ++row;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto where = [&] { return manifest.string() + ":" + std::to_string(row); };

    auto fields = split_tabs(view);
    if (fields.size() < 2 || fields.size() > 3) {
      throw ResolverError(ResolverErrc::manifest_error, where() + ": expected `iri<TAB>path[<TAB>latency_ms]`");
    }
    std::string_view iri_text = trim(fields[0]);
    if (iri_text.size() >= 2 && iri_text.front() == '<' && iri_text.back() == '>') {
      iri_text = iri_text.substr(1, iri_text.size() - 2);
    }
    if (!Iri::is_valid(iri_text)) {
      throw ResolverError(ResolverErrc::manifest_error, where() + ": invalid IRI '" + std::string(iri_text) + "'");
    }
    std::optional<SimTime> latency;
    if (fields.size() == 3) {
      std::string_view lat = trim(fields[2]);
      double ms = 0;
      auto [ptr, ec] = std::from_chars(lat.data(), lat.data() + lat.size(), ms);
      if (ec != std::errc{} || ptr != lat.data() + lat.size() || ms < 0) {
        throw ResolverError(ResolverErrc::manifest_error, where() + ": invalid latency '" + std::string(lat) + "'");
      }
      latency = sim_ms_from_double(ms);
    }

    std::string_view rel = trim(fields[1]);
    if (!stays_inside(rel)) {
      throw ResolverError(ResolverErrc::manifest_error, where() + ": path '" + std::string(rel) + "' leaves " +
                                                            directory.string());
    }
    const auto doc_path = directory / rel;
    std::string doc;
    if (!read_file(doc_path, doc)) {
      throw ResolverError(ResolverErrc::document_error, "cannot read document " + doc_path.string());
    }
    Graph graph;
    try {
      graph = parse_text(doc);
    } catch (const CodecError& e) {
      throw ResolverError(ResolverErrc::document_error, doc_path.string() + ": " + e.what());
    }
    try {
      store.add(Iri(std::string(iri_text)), std::move(graph), latency);
    } catch (const ResolverError& e) {
      throw ResolverError(ResolverErrc::manifest_error, where() + ": " + e.what());
    }
  }
  return store;
}

void DocumentStore::add(Iri iri, Graph document, std::optional<SimTime> latency) {
  if (contains(iri)) throw ResolverError(ResolverErrc::manifest_error, "duplicate document for <" + iri.str() + ">");
  documents_.emplace(std::move(iri), Entry{std::move(document), latency});
}

FetchResult DocumentStore::dereference(const Iri& iri) const {
  auto it = documents_.find(iri);
  if (it == documents_.end()) return FetchResult{std::nullopt, default_latency_};
  return FetchResult{it->second.graph, it->second.latency.value_or(default_latency_)};
}

}  // namespace aladdin
