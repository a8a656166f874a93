#include "aladdin/rdf.hpp"

#include <array>
#include <cstdio>

namespace aladdin {

namespace {

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_forbidden_iri_char(unsigned char c) {
  if (c <= 0x20 || c == 0x7F) return true;
  switch (c) {
    case '<':
    case '>':
    case '"':
    case '{':
    case '}':
    case '|':
    case '^':
    case '`':
    case '\\':
      return true;
    default:
      return false;
  }
}

void append_escaped(std::string& out, std::string_view text) {
  for (unsigned char c : text) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (c < 0x20 || c == 0x7F) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
}

}  // namespace

Iri::Iri(std::string value) : value_(std::move(value)) {
  if (!is_valid(value_)) throw TermError(TermErrc::invalid_iri, "invalid IRI: '" + value_ + "'");
}

bool Iri::is_valid(std::string_view value) noexcept {
  auto colon = value.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 >= value.size()) return false;
  if (!is_alpha(value[0])) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    char c = value[i];
    if (!is_alpha(c) && !is_digit(c) && c != '+' && c != '-' && c != '.') return false;
  }
  for (unsigned char c : value) {
    if (is_forbidden_iri_char(c)) return false;
  }
  return true;
}

Literal Literal::plain(std::string lexical) { return Literal(std::move(lexical), LiteralKind::plain, {}, std::nullopt); }

Literal Literal::language(std::string lexical, std::string tag) {
  if (!is_valid_language_tag(tag)) {
    throw TermError(TermErrc::invalid_language_tag, "invalid language tag: '" + tag + "'");
  }
  return Literal(std::move(lexical), LiteralKind::language, std::move(tag), std::nullopt);
}

Literal Literal::typed(std::string lexical, Iri datatype) {
  return Literal(std::move(lexical), LiteralKind::typed, {}, std::move(datatype));
}

bool Literal::is_valid_language_tag(std::string_view tag) noexcept {
  if (tag.empty()) return false;
  for (char c : tag) {
    if (!is_alpha(c) && !is_digit(c) && c != '-') return false;
  }
  return true;
}

std::set<Term> Graph::terms() const {
  std::set<Term> out;
  for (const auto& t : triples_) {
    out.insert(t.subject);
    out.insert(t.predicate);
    out.insert(t.object);
    if (const auto* lit = std::get_if<Literal>(&t.object); lit && lit->datatype()) out.insert(*lit->datatype());
  }
  return out;
}

Graph merge(const Graph& base, const Graph& fetched) {
  Graph out = base;
  for (const auto& t : fetched) out.insert(t);
  return out;
}

std::string render_term(const Term& term) {
  std::string out;
  if (const auto* iri = std::get_if<Iri>(&term)) {
    out.reserve(iri->str().size() + 2);
    out.push_back('<');
    out += iri->str();
    out.push_back('>');
    return out;
  }
  const auto& lit = std::get<Literal>(term);
  out.push_back('"');
  append_escaped(out, lit.lexical());
  out.push_back('"');
  switch (lit.kind()) {
    case LiteralKind::plain:
      break;
    case LiteralKind::language:
      out.push_back('@');
      out += lit.language_tag();
      break;
    case LiteralKind::typed:
      out += "^^<";
      out += lit.datatype()->str();
      out.push_back('>');
      break;
  }
  return out;
}

namespace vocab {

Iri type() { return Iri(std::string(rdf) + "type"); }
Iri see_also() { return Iri(std::string(rdfs) + "seeAlso"); }
Iri aladdin_term(std::string_view local_name) { return Iri(std::string(aladdin) + std::string(local_name)); }

bool is_message_class(const Iri& iri) {
  static constexpr std::array<std::string_view, 7> kClasses = {"Message",   "Notice",  "Offer",        "Menu",
                                                                "Timetable", "Exhibit", "Certification"};
  std::string_view s = iri.str();
  if (!s.starts_with(aladdin)) return false;
  s.remove_prefix(aladdin.size());
  for (auto c : kClasses) {
    if (s == c) return true;
  }
  return false;
}

}  // namespace vocab

}  // namespace aladdin
