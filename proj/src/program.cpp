#include "krvqr/program.hpp"

#include <cctype>

#include "krvqr/symbols.hpp"

namespace krvqr {

int program_depth(const Query &root) {
  return (is_nested(root.first) || is_nested(root.second)) ? 2 : 1;
}

NestedSlot nested_slot(const Query &root) {
  if (is_nested(root.first)) return NestedSlot::First;
  if (is_nested(root.second)) return NestedSlot::Second;
  return NestedSlot::None;
}

std::optional<std::string> check_program_shape(const Query &root) {
  if (is_nested(root.first) && is_nested(root.second))
    return "both operands are nested queries";
  NestedSlot slot = nested_slot(root);
  if (slot == NestedSlot::None) return std::nullopt;
  // The nested query feeds an entity slot; relation slots take labels only.
  if (root.kind == QueryKind::AR && slot == NestedSlot::Second)
    return "query nested in the relation slot of an AR query";
  if (root.kind == QueryKind::RB && slot == NestedSlot::First)
    return "query nested in the relation slot of an RB query";
  const Query &inner = operand_query(slot == NestedSlot::First ? root.first : root.second);
  if (is_nested(inner.first) || is_nested(inner.second))
    return "nesting depth exceeds 2";
  // Chain linkage: the inner query must answer the shared entity, so only
  // AR (asks tail) and RB (asks head) inners are well-formed.
  if (inner.kind == QueryKind::AB)
    return "inner AB query answers a relation, not the shared entity";
  return std::nullopt;
}

int qtype_of(const Query &root) {
  if (auto why = check_program_shape(root)) throw Error(ErrorCode::InvalidProgram, *why);
  NestedSlot slot = nested_slot(root);
  if (slot == NestedSlot::None) {
    switch (root.kind) {
      case QueryKind::AB: return 0;
      case QueryKind::AR: return 1;
      case QueryKind::RB: return 2;
    }
  }
  switch (root.kind) {
    case QueryKind::AB: return slot == NestedSlot::First ? 3 : 4;
    case QueryKind::AR: return 5;  // nested slot is necessarily the head
    case QueryKind::RB: return 6;  // nested slot is necessarily the tail
  }
  throw Error(ErrorCode::InvalidProgram, "unreachable program shape");
}

const char *query_token(QueryKind kind, Domain domain) {
  bool image = domain == Domain::Image;
  switch (kind) {
    case QueryKind::AB: return image ? "Qab_I" : "Qab_K";
    case QueryKind::AR: return image ? "Qar_I" : "Qar_K";
    case QueryKind::RB: return image ? "Qrb_I" : "Qrb_K";
  }
  return "";
}

namespace {

bool needs_quoting(const std::string &label) {
  if (label.empty()) return true;
  for (char c : label) {
    if (c == ' ' || c == '(' || c == ')' || c == '"' || c == '\\') return true;
  }
  return false;
}

void print_label(std::string &out, const std::string &label) {
  if (!needs_quoting(label)) {
    out += label;
    return;
  }
  out += '"';
  for (char c : label) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
}

void print_operand(std::string &out, const Operand &op);

void print_query_into(std::string &out, const Query &q) {
  out += '(';
  out += query_token(q.kind, q.domain);
  out += ' ';
  print_operand(out, q.first);
  out += ' ';
  print_operand(out, q.second);
  out += ')';
}

void print_operand(std::string &out, const Operand &op) {
  if (is_nested(op)) {
    print_query_into(out, operand_query(op));
  } else {
    print_label(out, operand_label(op));
  }
}

struct Parser {
  std::string_view text;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string &what) const {
    throw format_error("program string, offset " + std::to_string(pos), what);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }

  std::string parse_quoted() {
    expect('"');
    std::string out;
    while (pos < text.size() && text[pos] != '"') {
      char c = text[pos++];
      if (c == '\\') {
        if (pos >= text.size()) fail("dangling escape");
        c = text[pos++];
      }
      out += c;
    }
    expect('"');
    return out;
  }

  std::string parse_bare() {
    size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')') break;
      ++pos;
    }
    if (pos == start) fail("expected a label");
    return std::string(text.substr(start, pos - start));
  }

  Operand parse_operand() {
    skip_ws();
    if (peek() == '(') return Operand{detail::Box<Query>(parse_query())};
    std::string raw = (peek() == '"') ? parse_quoted() : parse_bare();
    std::string normalized = normalize_label(raw);
    if (normalized.empty()) fail("empty label");
    return Operand{std::move(normalized)};
  }

  Query parse_query() {
    skip_ws();
    expect('(');
    skip_ws();
    std::string token = parse_bare();
    Query q;
    if (token == "Qab_I") { q.kind = QueryKind::AB; q.domain = Domain::Image; }
    else if (token == "Qar_I") { q.kind = QueryKind::AR; q.domain = Domain::Image; }
    else if (token == "Qrb_I") { q.kind = QueryKind::RB; q.domain = Domain::Image; }
    else if (token == "Qab_K") { q.kind = QueryKind::AB; q.domain = Domain::Kb; }
    else if (token == "Qar_K") { q.kind = QueryKind::AR; q.domain = Domain::Kb; }
    else if (token == "Qrb_K") { q.kind = QueryKind::RB; q.domain = Domain::Kb; }
    else fail("unknown query token \"" + token + "\"");
    q.first = parse_operand();
    q.second = parse_operand();
    skip_ws();
    expect(')');
    return q;
  }
};

}  // namespace

std::string print_query(const Query &q) {
  std::string out;
  print_query_into(out, q);
  return out;
}

std::string print_program(const Program &p) { return print_query(p.root); }

Program parse_program(std::string_view text) {
  Parser parser{text};
  Query root = parser.parse_query();
  parser.skip_ws();
  if (parser.pos != text.size()) parser.fail("trailing characters after program");
  if (auto why = check_program_shape(root)) throw Error(ErrorCode::InvalidProgram, *why);
  return Program{std::move(root), {}};
}

}  // namespace krvqr
