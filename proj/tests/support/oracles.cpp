#include "oracles.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "aladdin/payload_codec.hpp"

using namespace aladdin;

namespace oracle {

std::uint32_t crc32_bitwise(ByteView data) {
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::uint8_t byte : data) {
    crc ^= byte;
    for (int bit = 0; bit < 8; ++bit) crc = (crc & 1u) ? (crc >> 1) ^ 0xEDB88320u : crc >> 1;
  }
  return crc ^ 0xFFFFFFFFu;
}

namespace {

void collect_vars(const PatternTerm& t, std::set<std::string>& out) {
  if (auto* v = std::get_if<Variable>(&t)) out.insert(v->name);
}

std::optional<Iri> as_iri(const PatternTerm& pt, const Binding& b) {
  if (auto* v = std::get_if<Variable>(&pt)) {
    const Term& t = b.at(v->name);
    if (auto* i = std::get_if<Iri>(&t)) return *i;
    return std::nullopt;
  }
  if (auto* i = std::get_if<Iri>(&pt)) return *i;
  return std::nullopt;
}

Term as_term(const PatternTerm& pt, const Binding& b) {
  if (auto* v = std::get_if<Variable>(&pt)) return b.at(v->name);
  if (auto* i = std::get_if<Iri>(&pt)) return *i;
  return std::get<Literal>(pt);
}

}  // namespace

std::vector<Binding> brute_force_match(const Graph& g, const std::vector<TriplePattern>& patterns) {
  std::set<std::string> names;
  for (const auto& p : patterns) {
    collect_vars(p.subject, names);
    collect_vars(p.predicate, names);
    collect_vars(p.object, names);
  }
  std::vector<Term> domain;
  for (const auto& t : g.terms()) domain.push_back(t);
  std::vector<std::string> vars(names.begin(), names.end());

  std::vector<Binding> out;
  std::vector<std::size_t> choice(vars.size(), 0);
  if (!vars.empty() && domain.empty()) return out;
  while (true) {
    Binding b;
    for (std::size_t i = 0; i < vars.size(); ++i) b.insert_or_assign(vars[i], domain[choice[i]]);
    bool all = true;
    for (const auto& p : patterns) {
      auto s = as_iri(p.subject, b);
      auto pr = as_iri(p.predicate, b);
      if (!s || !pr || !g.contains(Triple{*s, *pr, as_term(p.object, b)})) {
        all = false;
        break;
      }
    }
    if (all) out.push_back(b);
    // Odometer over the variable assignments.
    std::size_t k = 0;
    while (k < choice.size() && ++choice[k] == domain.size()) choice[k++] = 0;
    if (k == choice.size()) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

void put16(Bytes& out, std::size_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_text16(Bytes& out, const std::string& s) {
  put16(out, s.size());
  out.insert(out.end(), s.begin(), s.end());
}

}  // namespace

Bytes naive_compact_no_prefixes(const Graph& g) {
  std::set<Term> term_set;
  for (const auto& t : g) {
    term_set.insert(t.subject);
    term_set.insert(t.predicate);
    term_set.insert(t.object);
    if (auto* l = std::get_if<Literal>(&t.object); l && l->datatype()) term_set.insert(*l->datatype());
  }
  std::vector<Term> terms(term_set.begin(), term_set.end());
  auto index = [&](const Term& t) {
    return static_cast<std::size_t>(std::lower_bound(terms.begin(), terms.end(), t) - terms.begin());
  };
  Bytes out{0x01, 0x00};
  put16(out, terms.size());
  for (const auto& t : terms) {
    if (auto* i = std::get_if<Iri>(&t)) {
      out.push_back(0x01);
      put_text16(out, i->str());
      continue;
    }
    const auto& l = std::get<Literal>(t);
    switch (l.kind()) {
      case LiteralKind::plain:
        out.push_back(0x02);
        break;
      case LiteralKind::language:
        out.push_back(0x03);
        out.push_back(static_cast<std::uint8_t>(l.language_tag().size()));
        out.insert(out.end(), l.language_tag().begin(), l.language_tag().end());
        break;
      case LiteralKind::typed:
        out.push_back(0x04);
        put16(out, index(*l.datatype()));
        break;
    }
    put_text16(out, l.lexical());
  }
  put16(out, g.size());
  for (const auto& t : g) {
    put16(out, index(t.subject));
    put16(out, index(t.predicate));
    put16(out, index(t.object));
  }
  return out;
}

}  // namespace oracle

namespace gen {

namespace {

template <typename T>
const T& pick(SimRng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(v.size()) - 1))];
}

const std::vector<std::string> kNamespaces = {
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "http://www.w3.org/2000/01/rdf-schema#",
    "http://purl.org/dc/terms/",
    "http://example.org/aladdin/vocab#",
    "http://shop.example/items/",
    "http://shop.example/items/sale/",
    "https://museum.example/collection#",
    "urn:isbn:",
    "http://a.example/",
};

const std::vector<std::string> kLocal = {"a", "b", "name", "title", "x1", "item-9", "%C3%A9t%C3%A9", "", "deep/er",
                                         "q?x=1", "Offer", "seeAlso", "type"};

const std::vector<std::string> kLexical = {"", "hello", "two words", "quote \" inside", "back\\slash",
                                           "tab\there", "line\nbreak", "caf\xC3\xA9", "\xE2\x82\xAC 5", "12.50",
                                           "ctrl\x01" "char", "# not a comment", " . "};

const std::vector<std::string> kTags = {"en", "en-GB", "it", "de-CH-1996", "x-private"};

const std::vector<std::string> kDatatypes = {"http://www.w3.org/2001/XMLSchema#integer",
                                             "http://www.w3.org/2001/XMLSchema#decimal",
                                             "http://www.w3.org/2001/XMLSchema#dateTime", "urn:type:custom"};

}  // namespace

Iri iri(SimRng& rng) {
  std::string s = pick(rng, kNamespaces) + pick(rng, kLocal);
  if (s == "urn:isbn:") s += "0";
  if (rng.bernoulli(0.3)) s += std::to_string(rng.uniform_int(0, 20));
  return Iri(s);
}

Literal literal(SimRng& rng) {
  std::string lex = pick(rng, kLexical);
  if (rng.bernoulli(0.3)) lex += std::to_string(rng.uniform_int(0, 99));
  switch (rng.uniform_int(0, 2)) {
    case 0: return Literal::plain(lex);
    case 1: return Literal::language(lex, pick(rng, kTags));
    default: return Literal::typed(lex, Iri(pick(rng, kDatatypes)));
  }
}

Term term(SimRng& rng) {
  if (rng.bernoulli(0.5)) return iri(rng);
  return literal(rng);
}

Graph graph(SimRng& rng, std::size_t max_triples) {
  Graph g;
  const auto n = rng.uniform_int(0, static_cast<std::int64_t>(max_triples));
  for (std::int64_t i = 0; i < n; ++i) g.insert(Triple{iri(rng), iri(rng), term(rng)});
  return g;
}

Graph payload(SimRng& rng, std::size_t extra) {
  const Iri msg("http://shop.example/msg/" + std::to_string(rng.uniform_int(0, 1000)));
  Graph g;
  g.insert(Triple{msg, vocab::type(), vocab::aladdin_term("Offer")});
  g.insert(Triple{msg, vocab::see_also(), iri(rng)});
  const auto n = rng.uniform_int(0, static_cast<std::int64_t>(extra));
  for (std::int64_t i = 0; i < n; ++i) {
    Iri p = iri(rng);
    if (p == vocab::type()) continue;
    g.insert(Triple{msg, p, term(rng)});
  }
  return g;
}

Announcement announcement(SimRng& rng, std::size_t max_payload) {
  Announcement a;
  for (auto& b : a.beacon_id.bytes) b = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
  a.payload_version = static_cast<std::uint32_t>(rng.uniform_int(1, 0xFFFFFFFFll));
  a.payload.resize(static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(max_payload))));
  for (auto& b : a.payload) b = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
  if (rng.bernoulli(0.5)) {
    std::array<std::uint8_t, kSignatureSize> sig{};
    for (auto& b : sig) b = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    a.signature = sig;
  }
  return a;
}

std::vector<TriplePattern> patterns(SimRng& rng, const Graph& g, std::size_t count) {
  static const std::vector<std::string> kVars = {"a", "b", "c"};
  std::vector<Term> pool;
  for (const auto& t : g.terms()) pool.push_back(t);
  std::vector<Iri> iris;
  for (const auto& t : pool) {
    if (auto* i = std::get_if<Iri>(&t)) iris.push_back(*i);
  }
  auto slot = [&](bool iri_only) -> PatternTerm {
    if (rng.bernoulli(0.55) || pool.empty()) return Variable{pick(rng, kVars)};
    if (iri_only) {
      if (iris.empty()) return Variable{pick(rng, kVars)};
      return pick(rng, iris);
    }
    const Term& t = pick(rng, pool);
    if (auto* i = std::get_if<Iri>(&t)) return *i;
    return std::get<Literal>(t);
  };
  // Half the patterns are lifted from a real triple so that matches and
  // joins actually occur; the rest are free-form.
  std::vector<Triple> triples(g.begin(), g.end());
  auto lift = [&](const Term& t) -> PatternTerm {
    if (rng.bernoulli(0.5)) return Variable{pick(rng, kVars)};
    if (auto* i = std::get_if<Iri>(&t)) return *i;
    return std::get<Literal>(t);
  };
  std::vector<TriplePattern> out;
  for (std::size_t i = 0; i < count; ++i) {
    if (!triples.empty() && rng.bernoulli(0.5)) {
      const Triple& t = pick(rng, triples);
      out.push_back(TriplePattern{lift(t.subject), lift(t.predicate), lift(t.object)});
    } else {
      out.push_back(TriplePattern{slot(true), slot(true), slot(false)});
    }
  }
  return out;
}

}  // namespace gen

namespace fixture {

std::filesystem::path scenario_dir(const std::string& name) { return std::filesystem::path(ALADDIN_SCENARIO_DIR) / name; }

Graph minimal_offer(const std::string& subject) {
  Graph g;
  g.insert(Triple{Iri(subject), vocab::type(), vocab::aladdin_term("Offer")});
  g.insert(Triple{Iri(subject), vocab::see_also(), Iri("http://ex.org/doc")});
  return g;
}

}  // namespace fixture
