#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aladdin/error.hpp"
#include "aladdin/rdf.hpp"

namespace aladdin {

enum class PatternErrc { syntax };
using PatternError = Error<PatternErrc>;

// `?name` in a pattern. The stored name excludes the '?'.
struct Variable {
  std::string name;
  auto operator<=>(const Variable&) const = default;
  bool operator==(const Variable&) const = default;
};

using PatternTerm = std::variant<Variable, Iri, Literal>;

struct TriplePattern {
  PatternTerm subject;    // Variable or Iri
  PatternTerm predicate;  // Variable or Iri
  PatternTerm object;

  bool operator==(const TriplePattern&) const = default;
};

// Variable name (without '?') -> bound term.
using Binding = std::map<std::string, Term>;

// Three whitespace-separated terms in payload text syntax, where any term
// may instead be `?name`; an optional trailing '.' is accepted.
TriplePattern parse_pattern(std::string_view text);

std::set<std::string> variables(const TriplePattern& p);

// Every assignment under which all patterns occur in `g`, ordered
// lexicographically by bound values (variables taken in name order),
// without duplicates. An empty pattern list yields one empty binding.
std::vector<Binding> match_patterns(const Graph& g, std::span<const TriplePattern> patterns);

}  // namespace aladdin
