#include "aladdin/pattern.hpp"

#include <algorithm>

#include "aladdin/payload_codec.hpp"

namespace aladdin {

namespace {

[[noreturn]] void fail(std::string_view text, const std::string& msg) {
  throw PatternError(PatternErrc::syntax, "pattern '" + std::string(text) + "': " + msg);
}

bool is_space(char c) { return c == ' ' || c == '\t'; }

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
}

// Splits off one term token. Literals may contain spaces, so they are
// scanned to their closing quote before looking for whitespace.
std::string_view next_token(std::string_view& rest) {
  std::size_t i = 0;
  if (!rest.empty() && rest[0] == '"') {
    for (i = 1; i < rest.size(); ++i) {
      if (rest[i] == '\\') {
        ++i;
      } else if (rest[i] == '"') {
        ++i;
        break;
      }
    }
  }
  while (i < rest.size() && !is_space(rest[i])) ++i;
  auto token = rest.substr(0, i);
  rest.remove_prefix(i);
  while (!rest.empty() && is_space(rest.front())) rest.remove_prefix(1);
  return token;
}

PatternTerm to_pattern_term(std::string_view text, std::string_view token) {
  if (token.starts_with('?')) {
    auto name = token.substr(1);
    if (name.empty() || !std::all_of(name.begin(), name.end(), is_name_char)) fail(text, "bad variable '" + std::string(token) + "'");
    return Variable{std::string(name)};
  }
  try {
    Term t = parse_term(token);
    if (auto* iri = std::get_if<Iri>(&t)) return *iri;
    return std::get<Literal>(t);
  } catch (const CodecError& e) {
    fail(text, e.what());
  }
}

bool unify(const PatternTerm& pattern, const Term& value, Binding& binding) {
  if (const auto* var = std::get_if<Variable>(&pattern)) {
    auto [it, inserted] = binding.try_emplace(var->name, value);
    return inserted || it->second == value;
  }
  if (const auto* iri = std::get_if<Iri>(&pattern)) {
    const auto* v = std::get_if<Iri>(&value);
    return v && *v == *iri;
  }
  const auto* v = std::get_if<Literal>(&value);
  return v && *v == std::get<Literal>(pattern);
}

void search(const Graph& g, std::span<const TriplePattern> patterns, Binding& binding, std::vector<Binding>& out) {
  if (patterns.empty()) {
    out.push_back(binding);
    return;
  }
  const auto& p = patterns.front();
  for (const auto& t : g) {
    Binding next = binding;
    if (unify(p.subject, t.subject, next) && unify(p.predicate, t.predicate, next) && unify(p.object, t.object, next)) {
      search(g, patterns.subspan(1), next, out);
    }
  }
}

}  // namespace

TriplePattern parse_pattern(std::string_view text) {
  std::string_view rest = text;
  while (!rest.empty() && is_space(rest.front())) rest.remove_prefix(1);
  while (!rest.empty() && is_space(rest.back())) rest.remove_suffix(1);
  if (rest.ends_with('.')) {
    rest.remove_suffix(1);
    while (!rest.empty() && is_space(rest.back())) rest.remove_suffix(1);
  }

  PatternTerm parts[3];
  for (auto& part : parts) {
    if (rest.empty()) fail(text, "expected three terms");
    part = to_pattern_term(text, next_token(rest));
  }
  if (!rest.empty()) fail(text, "unexpected text after the object term");
  if (std::holds_alternative<Literal>(parts[0])) fail(text, "subject cannot be a literal");
  if (std::holds_alternative<Literal>(parts[1])) fail(text, "predicate cannot be a literal");
  return TriplePattern{std::move(parts[0]), std::move(parts[1]), std::move(parts[2])};
}

std::set<std::string> variables(const TriplePattern& p) {
  std::set<std::string> out;
  for (const auto* term : {&p.subject, &p.predicate, &p.object}) {
    if (const auto* v = std::get_if<Variable>(term)) out.insert(v->name);
  }
  return out;
}

std::vector<Binding> match_patterns(const Graph& g, std::span<const TriplePattern> patterns) {
  std::vector<Binding> out;
  Binding binding;
  search(g, patterns, binding, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace aladdin
