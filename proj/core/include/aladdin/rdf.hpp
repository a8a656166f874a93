#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "aladdin/error.hpp"

namespace aladdin {

enum class TermErrc { invalid_iri, invalid_language_tag };
using TermError = Error<TermErrc>;

// Absolute IRI. Construction validates: a scheme followed by ':' and a
// non-empty remainder, no whitespace, control characters, or characters
// that would break the angle-bracket text syntax.
class Iri {
 public:
  explicit Iri(std::string value);

  static bool is_valid(std::string_view value) noexcept;

  const std::string& str() const noexcept { return value_; }

  auto operator<=>(const Iri&) const = default;
  bool operator==(const Iri&) const = default;

 private:
  std::string value_;
};

enum class LiteralKind : std::uint8_t { plain = 0, language = 1, typed = 2 };

class Literal {
 public:
  static Literal plain(std::string lexical);
  static Literal language(std::string lexical, std::string tag);
  static Literal typed(std::string lexical, Iri datatype);

  static bool is_valid_language_tag(std::string_view tag) noexcept;

  LiteralKind kind() const noexcept { return kind_; }
  const std::string& lexical() const noexcept { return lexical_; }
  // Empty unless kind() == language.
  const std::string& language_tag() const noexcept { return tag_; }
  // Set iff kind() == typed.
  const std::optional<Iri>& datatype() const noexcept { return datatype_; }

  auto operator<=>(const Literal&) const = default;
  bool operator==(const Literal&) const = default;

 private:
  Literal(std::string lexical, LiteralKind kind, std::string tag, std::optional<Iri> datatype)
      : lexical_(std::move(lexical)), kind_(kind), tag_(std::move(tag)), datatype_(std::move(datatype)) {}

  std::string lexical_;
  LiteralKind kind_;
  std::string tag_;
  std::optional<Iri> datatype_;
};

// IRIs order before literals.
using Term = std::variant<Iri, Literal>;

struct Triple {
  Iri subject;
  Iri predicate;
  Term object;

  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;
};

// Set of triples; equality is set equality.
class Graph {
 public:
  using const_iterator = std::set<Triple>::const_iterator;

  Graph() = default;
  Graph(std::initializer_list<Triple> triples) : triples_(triples) {}

  // Returns true if the triple was not already present.
  bool insert(Triple t) { return triples_.insert(std::move(t)).second; }
  bool contains(const Triple& t) const { return triples_.count(t) != 0; }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }

  const_iterator begin() const noexcept { return triples_.begin(); }
  const_iterator end() const noexcept { return triples_.end(); }

  // Distinct terms in subject, predicate, or object position, plus the
  // datatype IRIs of typed literals.
  std::set<Term> terms() const;

  bool operator==(const Graph&) const = default;

 private:
  std::set<Triple> triples_;
};

// Set union.
Graph merge(const Graph& base, const Graph& fetched);

// Renders a term in the N-Triples text syntax: <iri>, "lex", "lex"@tag,
// "lex"^^<dt>, with string escapes applied.
std::string render_term(const Term& term);

namespace vocab {

inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view owl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view foaf = "http://xmlns.com/foaf/0.1/";
inline constexpr std::string_view dcterms = "http://purl.org/dc/terms/";
inline constexpr std::string_view geo = "http://www.w3.org/2003/01/geo/wgs84_pos#";
inline constexpr std::string_view aladdin = "http://example.org/aladdin/vocab#";

Iri type();
Iri see_also();
Iri aladdin_term(std::string_view local_name);

// Message, Notice, Offer, Menu, Timetable, Exhibit, Certification.
bool is_message_class(const Iri& iri);

}  // namespace vocab

}  // namespace aladdin
