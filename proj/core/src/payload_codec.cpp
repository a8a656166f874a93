#include "aladdin/payload_codec.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace aladdin {

// ===========================================================================
// Text format
// ===========================================================================

namespace {

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  // Returns nullopt for blank and comment lines.
  std::optional<Triple> parse() {
    skip_ws();
    if (at_end() || peek() == '#') return std::nullopt;

    Iri subject = parse_iri_position("subject");
    require_ws();
    Iri predicate = parse_iri_position("predicate");
    require_ws();
    Term object = parse_object();
    skip_ws();
    if (at_end() || peek() != '.') fail("expected '.' terminating the triple");
    ++pos_;
    skip_ws();
    if (!at_end() && peek() != '#') fail("unexpected text after '.'");
    return Triple{std::move(subject), std::move(predicate), std::move(object)};
  }

  Term parse_lone_term() {
    skip_ws();
    Term term = parse_object();
    skip_ws();
    if (!at_end()) fail("unexpected text after term");
    return term;
  }

 private:
  bool at_end() const { return pos_ >= line_.size(); }
  char peek() const { return line_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw CodecError(CodecErrc::syntax,
                     "line " + std::to_string(line_no_) + ", column " + std::to_string(pos_ + 1) + ": " + msg,
                     line_no_, pos_ + 1);
  }

  [[noreturn]] void unsupported() const {
    throw CodecError(CodecErrc::unsupported_term,
                     "line " + std::to_string(line_no_) + ": blank nodes are not supported", line_no_, pos_ + 1);
  }

  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void require_ws() {
    if (at_end() || (peek() != ' ' && peek() != '\t')) fail("expected whitespace");
    skip_ws();
  }

  bool blank_node_ahead() const { return line_.substr(pos_).starts_with("_:"); }

  Iri parse_iri_position(const char* role) {
    if (blank_node_ahead()) unsupported();
    if (at_end() || peek() != '<') fail(std::string("expected IRI as ") + role);
    return parse_iri();
  }

  Iri parse_iri() {
    const std::size_t start = pos_;
    ++pos_;
    auto close = line_.find('>', pos_);
    if (close == std::string_view::npos) fail("unterminated IRI");
    std::string_view text = line_.substr(pos_, close - pos_);
    if (!Iri::is_valid(text)) {
      pos_ = start;
      fail("invalid IRI <" + std::string(text) + ">");
    }
    pos_ = close + 1;
    return Iri(std::string(text));
  }

  Term parse_object() {
    if (blank_node_ahead()) unsupported();
    if (at_end()) fail("expected object");
    if (peek() == '<') return parse_iri();
    if (peek() == '"') return parse_literal();
    fail("expected IRI or literal as object");
  }

  Literal parse_literal() {
    ++pos_;  // opening quote
    std::string lexical;
    for (;;) {
      if (at_end()) fail("unterminated literal");
      char c = line_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        lexical.push_back(c);
        continue;
      }
      if (at_end()) fail("dangling escape");
      char e = line_[pos_++];
      switch (e) {
        case 't': lexical.push_back('\t'); break;
        case 'b': lexical.push_back('\b'); break;
        case 'n': lexical.push_back('\n'); break;
        case 'r': lexical.push_back('\r'); break;
        case 'f': lexical.push_back('\f'); break;
        case '"': lexical.push_back('"'); break;
        case '\'': lexical.push_back('\''); break;
        case '\\': lexical.push_back('\\'); break;
        case 'u': append_utf8(lexical, read_hex(4)); break;
        case 'U': append_utf8(lexical, read_hex(8)); break;
        default:
          --pos_;
          fail(std::string("unknown escape \\") + e);
      }
    }
    if (!at_end() && peek() == '@') {
      ++pos_;
      std::size_t start = pos_;
      while (!at_end() && peek() != ' ' && peek() != '\t' && peek() != '.') ++pos_;
      std::string tag(line_.substr(start, pos_ - start));
      if (!Literal::is_valid_language_tag(tag)) {
        pos_ = start;
        fail("invalid language tag '" + tag + "'");
      }
      return Literal::language(std::move(lexical), std::move(tag));
    }
    if (line_.substr(pos_).starts_with("^^")) {
      pos_ += 2;
      if (at_end() || peek() != '<') fail("expected datatype IRI after ^^");
      return Literal::typed(std::move(lexical), parse_iri());
    }
    return Literal::plain(std::move(lexical));
  }

  std::uint32_t read_hex(int digits) {
    std::uint32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      if (at_end()) fail("truncated unicode escape");
      char c = line_[pos_];
      int v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
      else fail("bad hex digit in unicode escape");
      cp = (cp << 4) | static_cast<std::uint32_t>(v);
      ++pos_;
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("invalid code point in escape");
    return cp;
  }

  static void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }

  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

}  // namespace

Graph parse_text(std::string_view input) {
  Graph g;
  std::size_t line_no = 0;
  while (!input.empty()) {
    ++line_no;
    auto nl = input.find('\n');
    std::string_view line = input.substr(0, nl);
    input = nl == std::string_view::npos ? std::string_view{} : input.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto triple = LineParser(line, line_no).parse()) g.insert(std::move(*triple));
  }
  return g;
}

Term parse_term(std::string_view text) { return LineParser(text, 1).parse_lone_term(); }

std::string serialize_text(const Graph& g) {
  std::vector<std::string> lines;
  lines.reserve(g.size());
  for (const auto& t : g) {
    lines.push_back(render_term(t.subject) + ' ' + render_term(t.predicate) + ' ' + render_term(t.object) + " .\n");
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l;
  return out;
}

// ===========================================================================
// Prefix table
// ===========================================================================

const std::vector<std::string>& PrefixTable::static_entries() {
  static const std::vector<std::string> kEntries = {
      std::string(vocab::rdf),     std::string(vocab::rdfs), std::string(vocab::owl),     std::string(vocab::foaf),
      std::string(vocab::dcterms), std::string(vocab::geo),  std::string(vocab::aladdin),
  };
  return kEntries;
}

PrefixTable::PrefixTable(std::vector<std::string> dynamic_entries) : dynamic_(std::move(dynamic_entries)) {
  if (size() > kMaxEntries) throw CodecError(CodecErrc::too_large, "prefix table exceeds 256 entries");
  const auto& st = static_entries();
  for (std::size_t i = 0; i < dynamic_.size(); ++i) {
    if (dynamic_[i].size() > 255) throw CodecError(CodecErrc::too_large, "prefix longer than 255 bytes");
    if (std::find(st.begin(), st.end(), dynamic_[i]) != st.end() ||
        std::find(dynamic_.begin(), dynamic_.begin() + static_cast<std::ptrdiff_t>(i), dynamic_[i]) !=
            dynamic_.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw CodecError(CodecErrc::malformed, "duplicate prefix '" + dynamic_[i] + "'");
    }
  }
}

const std::string& PrefixTable::at(std::size_t index) const {
  const auto& st = static_entries();
  if (index < st.size()) return st[index];
  index -= st.size();
  if (index >= dynamic_.size()) throw CodecError(CodecErrc::index_out_of_range, "prefix index out of range");
  return dynamic_[index];
}

std::optional<PrefixTable::Match> PrefixTable::longest_match(std::string_view iri) const {
  std::optional<Match> best;
  for (std::size_t i = 0; i < size(); ++i) {
    const auto& p = at(i);
    if (iri.size() - std::min(iri.size(), p.size()) > 255) continue;
    if (!iri.starts_with(p)) continue;
    if (!best || p.size() > best->prefix_length) best = Match{i, p.size()};
  }
  return best;
}

namespace {

std::string_view namespace_of(std::string_view iri) {
  auto cut = iri.find_last_of("#/");
  if (cut == std::string_view::npos) return {};
  return iri.substr(0, cut + 1);
}

}  // namespace

PrefixTable choose_prefixes(const Graph& g) {
  const PrefixTable statics;
  std::map<std::string, std::size_t> uses;
  for (const auto& term : g.terms()) {
    const auto* iri = std::get_if<Iri>(&term);
    if (!iri) continue;
    std::string_view ns = namespace_of(iri->str());
    if (ns.empty() || ns.size() > 255 || iri->str().size() - ns.size() > 255) continue;
    auto static_match = statics.longest_match(iri->str());
    if (static_match && static_match->prefix_length >= ns.size()) continue;
    ++uses[std::string(ns)];
  }
  // Sharing a namespace between two IRIs already pays for its table entry.
  struct Candidate {
    std::string ns;
    std::size_t saving;
  };
  std::vector<Candidate> candidates;
  for (auto& [ns, count] : uses) {
    if (count >= 2) candidates.push_back({ns, count * ns.size()});
  }
  const std::size_t room = PrefixTable::kMaxEntries - PrefixTable::static_count();
  if (candidates.size() > room) {
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.saving > b.saving; });
    candidates.resize(room);
  }
  std::vector<std::string> dynamic;
  dynamic.reserve(candidates.size());
  for (auto& c : candidates) dynamic.push_back(std::move(c.ns));
  std::sort(dynamic.begin(), dynamic.end());
  return PrefixTable(std::move(dynamic));
}

// ===========================================================================
// Compact binary format
// ===========================================================================

namespace {

enum TermTag : std::uint8_t {
  kPrefixedIri = 0x00,
  kFullIri = 0x01,
  kPlainLiteral = 0x02,
  kLanguageLiteral = 0x03,
  kTypedLiteral = 0x04,
};

constexpr std::size_t kMax16 = std::numeric_limits<std::uint16_t>::max();

void check16(std::size_t n, const char* what) {
  if (n > kMax16) throw CodecError(CodecErrc::too_large, std::string(what) + " exceeds 65535");
}

}  // namespace

Bytes encode_compact(const Graph& g) {
  const PrefixTable table = choose_prefixes(g);
  const std::set<Term> term_set = g.terms();
  check16(term_set.size(), "term count");
  check16(g.size(), "triple count");

  std::vector<Term> terms(term_set.begin(), term_set.end());
  auto index_of = [&terms](const Term& t) {
    return static_cast<std::uint16_t>(std::lower_bound(terms.begin(), terms.end(), t) - terms.begin());
  };

  Bytes out;
  ByteWriter w(out);
  w.u8(kCompactFormatVersion);
  w.u8(static_cast<std::uint8_t>(table.dynamic_entries().size()));
  for (const auto& p : table.dynamic_entries()) {
    w.u8(static_cast<std::uint8_t>(p.size()));
    w.raw(p);
  }

  w.u16(static_cast<std::uint16_t>(terms.size()));
  for (const auto& term : terms) {
    if (const auto* iri = std::get_if<Iri>(&term)) {
      if (auto m = table.longest_match(iri->str())) {
        std::string_view suffix = std::string_view(iri->str()).substr(m->prefix_length);
        w.u8(kPrefixedIri);
        w.u8(static_cast<std::uint8_t>(m->index));
        w.u8(static_cast<std::uint8_t>(suffix.size()));
        w.raw(suffix);
      } else {
        check16(iri->str().size(), "IRI length");
        w.u8(kFullIri);
        w.u16(static_cast<std::uint16_t>(iri->str().size()));
        w.raw(iri->str());
      }
      continue;
    }
    const auto& lit = std::get<Literal>(term);
    check16(lit.lexical().size(), "literal length");
    switch (lit.kind()) {
      case LiteralKind::plain:
        w.u8(kPlainLiteral);
        break;
      case LiteralKind::language:
        if (lit.language_tag().size() > 255) throw CodecError(CodecErrc::too_large, "language tag exceeds 255 bytes");
        w.u8(kLanguageLiteral);
        w.u8(static_cast<std::uint8_t>(lit.language_tag().size()));
        w.raw(lit.language_tag());
        break;
      case LiteralKind::typed:
        w.u8(kTypedLiteral);
        w.u16(index_of(*lit.datatype()));
        break;
    }
    w.u16(static_cast<std::uint16_t>(lit.lexical().size()));
    w.raw(lit.lexical());
  }

  w.u16(static_cast<std::uint16_t>(g.size()));
  for (const auto& t : g) {
    w.u16(index_of(t.subject));
    w.u16(index_of(t.predicate));
    w.u16(index_of(t.object));
  }
  return out;
}

namespace {

[[noreturn]] void malformed(const std::string& msg) { throw CodecError(CodecErrc::malformed, msg); }
[[noreturn]] void out_of_range(const std::string& msg) { throw CodecError(CodecErrc::index_out_of_range, msg); }

struct PendingTerm {
  std::optional<Term> term;  // unset for typed literals until resolved
  std::uint16_t datatype_index = 0;
  std::string lexical;
};

Graph decode_body(ByteReader& r) {
  const std::uint8_t version = r.u8();
  if (version != kCompactFormatVersion) {
    throw CodecError(CodecErrc::unknown_format_version, "unknown compact format version " + std::to_string(version));
  }

  const std::size_t dynamic_count = r.u8();
  std::vector<std::string> dynamic;
  dynamic.reserve(dynamic_count);
  for (std::size_t i = 0; i < dynamic_count; ++i) dynamic.push_back(r.text(r.u8()));
  PrefixTable table;
  try {
    table = PrefixTable(std::move(dynamic));
  } catch (const CodecError& e) {
    malformed(e.what());
  }

  const std::size_t term_count = r.u16();
  std::vector<PendingTerm> pending(term_count);
  for (auto& slot : pending) {
    const std::uint8_t tag = r.u8();
    switch (tag) {
      case kPrefixedIri: {
        const std::size_t idx = r.u8();
        std::string suffix = r.text(r.u8());
        if (idx >= table.size()) out_of_range("prefix index " + std::to_string(idx) + " beyond table");
        slot.term = Iri(table.at(idx) + suffix);
        break;
      }
      case kFullIri:
        slot.term = Iri(r.text(r.u16()));
        break;
      case kPlainLiteral:
        slot.term = Literal::plain(r.text(r.u16()));
        break;
      case kLanguageLiteral: {
        std::string tag_text = r.text(r.u8());
        slot.term = Literal::language(r.text(r.u16()), std::move(tag_text));
        break;
      }
      case kTypedLiteral:
        slot.datatype_index = r.u16();
        slot.lexical = r.text(r.u16());
        break;
      default:
        malformed("unknown term tag " + std::to_string(tag));
    }
  }
  for (auto& slot : pending) {
    if (slot.term) continue;
    if (slot.datatype_index >= term_count) out_of_range("datatype index beyond term table");
    const auto& dt = pending[slot.datatype_index].term;
    if (!dt || !std::holds_alternative<Iri>(*dt)) malformed("datatype index does not name an IRI");
    slot.term = Literal::typed(std::move(slot.lexical), std::get<Iri>(*dt));
  }

  const std::size_t triple_count = r.u16();
  Graph g;
  for (std::size_t i = 0; i < triple_count; ++i) {
    std::uint16_t idx[3] = {r.u16(), r.u16(), r.u16()};
    for (auto v : idx) {
      if (v >= term_count) out_of_range("term index " + std::to_string(v) + " beyond term table");
    }
    const Term& s = *pending[idx[0]].term;
    const Term& p = *pending[idx[1]].term;
    if (!std::holds_alternative<Iri>(s) || !std::holds_alternative<Iri>(p)) {
      malformed("subject and predicate must be IRIs");
    }
    g.insert(Triple{std::get<Iri>(s), std::get<Iri>(p), *pending[idx[2]].term});
  }
  if (r.remaining() != 0) malformed("trailing bytes after triple table");
  return g;
}

}  // namespace

Graph decode_compact(ByteView bytes) {
  ByteReader r(bytes);
  try {
    return decode_body(r);
  } catch (const ShortRead&) {
    throw CodecError(CodecErrc::truncated, "compact payload truncated at byte " + std::to_string(bytes.size()));
  } catch (const TermError& e) {
    malformed(e.what());
  }
}

// ===========================================================================
// Validation
// ===========================================================================

std::string_view violation_code(Violation v) {
  switch (v) {
    case Violation::no_message_node: return "NoMessageNode";
    case Violation::multiple_message_nodes: return "MultipleMessageNodes";
    case Violation::missing_see_also: return "MissingSeeAlso";
    case Violation::too_many_triples: return "TooManyTriples";
  }
  return "Unknown";
}

bool ValidationReport::has(Violation v) const {
  return std::any_of(violations.begin(), violations.end(), [v](const Entry& e) { return e.code == v; });
}

namespace {

// Subject -> message classes it is typed with.
std::map<Iri, std::vector<Iri>> message_nodes(const Graph& g) {
  const Iri type = vocab::type();
  std::map<Iri, std::vector<Iri>> nodes;
  for (const auto& t : g) {
    if (t.predicate != type) continue;
    const auto* cls = std::get_if<Iri>(&t.object);
    if (cls && vocab::is_message_class(*cls)) nodes[t.subject].push_back(*cls);
  }
  return nodes;
}

}  // namespace

std::optional<MessageNode> find_message_node(const Graph& g) {
  auto nodes = message_nodes(g);
  if (nodes.size() != 1) return std::nullopt;
  auto& [subject, classes] = *nodes.begin();
  // Classes arrive sorted; the generic Message class yields to any subclass.
  const Iri generic = vocab::aladdin_term("Message");
  auto specific = std::find_if(classes.begin(), classes.end(), [&](const Iri& c) { return c != generic; });
  return MessageNode{subject, specific != classes.end() ? *specific : classes.front()};
}

ValidationReport validate_payload(const Graph& g, const ValidationOptions& options) {
  ValidationReport report;
  auto nodes = message_nodes(g);
  if (nodes.empty()) {
    report.violations.push_back({Violation::no_message_node, "no subject is typed with an Aladdin message class"});
  } else if (nodes.size() > 1) {
    report.violations.push_back({Violation::multiple_message_nodes,
                                 std::to_string(nodes.size()) + " subjects are typed with an Aladdin message class"});
  } else {
    const Iri& subject = nodes.begin()->first;
    const Iri see_also = vocab::see_also();
    bool linked = std::any_of(g.begin(), g.end(), [&](const Triple& t) {
      return t.subject == subject && t.predicate == see_also && std::holds_alternative<Iri>(t.object);
    });
    if (!linked) {
      report.violations.push_back({Violation::missing_see_also, "message node <" + subject.str() +
                                                                    "> has no rdfs:seeAlso link to an IRI"});
    }
  }
  if (g.size() > options.max_triples) {
    report.violations.push_back({Violation::too_many_triples, std::to_string(g.size()) + " triples exceed the cap of " +
                                                                  std::to_string(options.max_triples)});
  }
  return report;
}

}  // namespace aladdin
