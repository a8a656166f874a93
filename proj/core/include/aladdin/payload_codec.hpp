#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aladdin/bytes.hpp"
#include "aladdin/error.hpp"
#include "aladdin/rdf.hpp"

namespace aladdin {

enum class CodecErrc {
  syntax,                  // malformed text line
  unsupported_term,        // blank node in text input
  too_large,               // exceeds a 16-bit (or 8-bit) field of the compact layout
  truncated,               // compact input ends early
  unknown_format_version,  // compact byte 0 is not 0x01
  index_out_of_range,      // term/prefix index beyond its table
  malformed,               // any other structurally invalid compact input
};

class CodecError : public Error<CodecErrc> {
 public:
  CodecError(CodecErrc code, const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(code, what), line_(line), column_(column) {}

  // 1-based; zero when the error is not tied to a text position.
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// ---- Text format ---------------------------------------------------------
//
// N-Triples subset: one `<s> <p> object .` per line; objects are <iri>,
// "literal", "literal"@lang or "literal"^^<iri>. Blank lines and lines whose
// first non-space character is '#' are ignored. Blank nodes are rejected.

Graph parse_text(std::string_view input);

// One term in the same syntax: <iri>, "lex", "lex"@tag or "lex"^^<iri>.
Term parse_term(std::string_view text);

// Canonical form: rendered lines sorted bytewise, each terminated by '\n'.
std::string serialize_text(const Graph& g);

// ---- Compact binary format ----------------------------------------------

inline constexpr std::uint8_t kCompactFormatVersion = 0x01;

// Static-then-dynamic IRI prefix dictionary. Static indices 0..6 are fixed;
// dynamic entries follow densely and never repeat a static entry.
class PrefixTable {
 public:
  static const std::vector<std::string>& static_entries();
  static std::size_t static_count() { return static_entries().size(); }
  static constexpr std::size_t kMaxEntries = 256;  // 8-bit index

  PrefixTable() = default;
  // Throws CodecError(malformed) on duplicates or too_large on overflow.
  explicit PrefixTable(std::vector<std::string> dynamic_entries);

  const std::vector<std::string>& dynamic_entries() const noexcept { return dynamic_; }
  std::size_t size() const noexcept { return static_count() + dynamic_.size(); }
  const std::string& at(std::size_t index) const;

  struct Match {
    std::size_t index;
    std::size_t prefix_length;
  };
  // Longest entry that prefixes `iri` with a suffix of at most 255 bytes.
  std::optional<Match> longest_match(std::string_view iri) const;

 private:
  std::vector<std::string> dynamic_;
};

// Picks dynamic prefixes for a graph: namespaces (up to the last '#' or '/')
// shared by at least two IRIs that no static entry already covers.
PrefixTable choose_prefixes(const Graph& g);

Bytes encode_compact(const Graph& g);
Graph decode_compact(ByteView bytes);

// ---- Validation ----------------------------------------------------------

enum class Violation { no_message_node, multiple_message_nodes, missing_see_also, too_many_triples };

std::string_view violation_code(Violation v);

struct ValidationReport {
  struct Entry {
    Violation code;
    std::string message;
  };
  std::vector<Entry> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(Violation v) const;
};

struct ValidationOptions {
  std::size_t max_triples = 64;
};

ValidationReport validate_payload(const Graph& g, const ValidationOptions& options = {});

// The node typed with an Aladdin message class, and its most specific class.
struct MessageNode {
  Iri subject;
  Iri message_class;
};

// Set iff the graph has exactly one message node.
std::optional<MessageNode> find_message_node(const Graph& g);

}  // namespace aladdin
