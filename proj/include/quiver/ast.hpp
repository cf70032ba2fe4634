#pragma once

// Tokens and abstract syntax for the MATCH/CREATE language. Structural
// equality ignores source positions; the pretty-printer (printer.hpp) and
// parser (parser.hpp) round-trip these shapes.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "quiver/store.hpp"
#include "quiver/value.hpp"

namespace quiver {

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

enum class TokenKind {
  keyword,
  identifier,
  quoted_identifier,
  string_literal,
  number_literal,
  timestamp_literal,
  punctuation,
  end_of_input,
};

struct Token {
  TokenKind kind = TokenKind::end_of_input;
  std::string text;  // keyword text as written; literal text without quotes
  int line = 1;
  int column = 1;

  bool is_punct(std::string_view p) const { return kind == TokenKind::punctuation && text == p; }
  bool is_keyword(std::string_view upper) const {
    return kind == TokenKind::keyword && to_lower_ascii(text) == to_lower_ascii(upper);
  }
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class BinaryOp { multiply, divide, add, subtract, lt, le, gt, ge, eq, ne, and_, or_ };
enum class UnaryOp { negate, not_ };

struct Expr {
  enum class Kind { literal, identifier, property, index, call, unary, binary };

  Kind kind = Kind::literal;
  int line = 0;
  int column = 0;

  Value literal;                      // literal
  Name name;                          // identifier text / property name / function name
  ExprPtr object;                     // property & index base, unary operand, binary lhs
  ExprPtr operand;                    // index subscript, binary rhs
  std::vector<ExprPtr> arguments;     // call
  bool star_argument = false;         // count(*)
  BinaryOp binary_op = BinaryOp::eq;
  UnaryOp unary_op = UnaryOp::negate;
};

inline ExprPtr make_expr(Expr::Kind kind) {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  return e;
}

// ---------------------------------------------------------------------------
// Patterns
// ---------------------------------------------------------------------------

struct PropertyEntry {
  Name key;
  ExprPtr value;
};

// Shared item shape for node and edge patterns: alias, label, property map,
// inline WHERE.
struct MatchItem {
  std::optional<Name> alias;
  std::optional<Name> label;
  std::vector<PropertyEntry> properties;
  bool has_property_map = false;
  ExprPtr where;
};

struct NodePattern {
  MatchItem item;
};

struct EdgePattern {
  MatchItem item;
  bool right_to_left = false;  // <-[ ]-  instead of  -[ ]->
};

struct QuantifiedPattern;

struct PatternElement {
  std::variant<EdgePattern, std::unique_ptr<QuantifiedPattern>> v;

  bool is_edge() const { return std::holds_alternative<EdgePattern>(v); }
  const EdgePattern& edge() const { return std::get<EdgePattern>(v); }
  EdgePattern& edge() { return std::get<EdgePattern>(v); }
  const QuantifiedPattern& quantified() const { return *std::get<std::unique_ptr<QuantifiedPattern>>(v); }
  QuantifiedPattern& quantified() { return *std::get<std::unique_ptr<QuantifiedPattern>>(v); }
};

// A linear chain: node (element node)*. elements.size() + 1 == nodes.size().
struct PatternChain {
  std::vector<NodePattern> nodes;
  std::vector<PatternElement> elements;
};

// Bracketed sub-pattern with a repetition quantifier. `?` is (0,1), `+` is
// (1,unbounded), `*` is (0,unbounded), `{a,b}` is (a,b), `{a,}` is (a,unbounded).
struct QuantifiedPattern {
  PatternChain inner;
  std::uint32_t min = 0;
  std::optional<std::uint32_t> max;  // nullopt = unbounded
};

enum class Repetition { none, trail, acyclic, simple };
enum class Selection { none, shortest, all, any };

struct MatchPart {
  Repetition repetition = Repetition::none;
  Selection selection = Selection::none;
  std::optional<Name> path_alias;
  PatternChain chain;
};

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

struct OrderKey {
  ExprPtr expr;
  bool descending = false;
};

struct TruncationSpec {
  std::optional<Name> edge_type;  // absent = the unnamed spec
  std::vector<OrderKey> order;    // empty = default ordering (ascending edge id)
  std::uint64_t limit = 0;
};

struct Projection {
  ExprPtr expr;
  std::optional<Name> alias;
};

struct ReturnClause {
  std::vector<Projection> projections;
  std::vector<OrderKey> order_by;
};

struct CreateStatement {
  std::vector<PatternChain> patterns;
};

struct MatchStatement {
  std::vector<TruncationSpec> truncation;
  std::vector<MatchPart> parts;
  ExprPtr where;
  // Dependent statement: at most one of these.
  std::unique_ptr<ReturnClause> return_clause;
  std::unique_ptr<CreateStatement> create_clause;
};

struct Statement {
  std::variant<MatchStatement, CreateStatement> v;

  bool is_match() const { return std::holds_alternative<MatchStatement>(v); }
  const MatchStatement& match() const { return std::get<MatchStatement>(v); }
  MatchStatement& match() { return std::get<MatchStatement>(v); }
  const CreateStatement& create() const { return std::get<CreateStatement>(v); }
  CreateStatement& create() { return std::get<CreateStatement>(v); }
};

// ---------------------------------------------------------------------------
// Structural equality (positions ignored)
// ---------------------------------------------------------------------------

inline bool equal(const Expr& a, const Expr& b);

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return equal(*a, *b);
}

inline bool equal(const Name& a, const Name& b) { return a.text == b.text && a.quoted == b.quoted; }

inline bool equal(const std::optional<Name>& a, const std::optional<Name>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || equal(*a, *b);
}

inline bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::literal: return value_equal(a.literal, b.literal);
    case Expr::Kind::identifier: return equal(a.name, b.name);
    case Expr::Kind::property: return equal(a.name, b.name) && equal(a.object, b.object);
    case Expr::Kind::index: return equal(a.object, b.object) && equal(a.operand, b.operand);
    case Expr::Kind::call: {
      if (to_lower_ascii(a.name.text) != to_lower_ascii(b.name.text)) return false;
      if (a.star_argument != b.star_argument) return false;
      if (a.arguments.size() != b.arguments.size()) return false;
      for (std::size_t i = 0; i < a.arguments.size(); ++i) {
        if (!equal(a.arguments[i], b.arguments[i])) return false;
      }
      return true;
    }
    case Expr::Kind::unary: return a.unary_op == b.unary_op && equal(a.object, b.object);
    case Expr::Kind::binary:
      return a.binary_op == b.binary_op && equal(a.object, b.object) && equal(a.operand, b.operand);
  }
  return false;
}

inline bool equal(const MatchItem& a, const MatchItem& b) {
  if (!equal(a.alias, b.alias) || !equal(a.label, b.label)) return false;
  if (a.has_property_map != b.has_property_map) return false;
  if (a.properties.size() != b.properties.size()) return false;
  for (std::size_t i = 0; i < a.properties.size(); ++i) {
    if (!equal(a.properties[i].key, b.properties[i].key)) return false;
    if (!equal(a.properties[i].value, b.properties[i].value)) return false;
  }
  return equal(a.where, b.where);
}

inline bool equal(const PatternChain& a, const PatternChain& b);

inline bool equal(const PatternElement& a, const PatternElement& b) {
  if (a.is_edge() != b.is_edge()) return false;
  if (a.is_edge()) {
    return a.edge().right_to_left == b.edge().right_to_left && equal(a.edge().item, b.edge().item);
  }
  const auto& qa = a.quantified();
  const auto& qb = b.quantified();
  return qa.min == qb.min && qa.max == qb.max && equal(qa.inner, qb.inner);
}

inline bool equal(const PatternChain& a, const PatternChain& b) {
  if (a.nodes.size() != b.nodes.size() || a.elements.size() != b.elements.size()) return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    if (!equal(a.nodes[i].item, b.nodes[i].item)) return false;
  }
  for (std::size_t i = 0; i < a.elements.size(); ++i) {
    if (!equal(a.elements[i], b.elements[i])) return false;
  }
  return true;
}

inline bool equal(const std::vector<OrderKey>& a, const std::vector<OrderKey>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].descending != b[i].descending || !equal(a[i].expr, b[i].expr)) return false;
  }
  return true;
}

inline bool equal(const MatchStatement& a, const MatchStatement& b) {
  if (a.truncation.size() != b.truncation.size()) return false;
  for (std::size_t i = 0; i < a.truncation.size(); ++i) {
    const auto& x = a.truncation[i];
    const auto& y = b.truncation[i];
    if (!equal(x.edge_type, y.edge_type) || x.limit != y.limit || !equal(x.order, y.order)) return false;
  }
  if (a.parts.size() != b.parts.size()) return false;
  for (std::size_t i = 0; i < a.parts.size(); ++i) {
    const auto& x = a.parts[i];
    const auto& y = b.parts[i];
    if (x.repetition != y.repetition || x.selection != y.selection) return false;
    if (!equal(x.path_alias, y.path_alias) || !equal(x.chain, y.chain)) return false;
  }
  if (!equal(a.where, b.where)) return false;
  if (static_cast<bool>(a.return_clause) != static_cast<bool>(b.return_clause)) return false;
  if (a.return_clause) {
    const auto& x = *a.return_clause;
    const auto& y = *b.return_clause;
    if (x.projections.size() != y.projections.size()) return false;
    for (std::size_t i = 0; i < x.projections.size(); ++i) {
      if (!equal(x.projections[i].alias, y.projections[i].alias)) return false;
      if (!equal(x.projections[i].expr, y.projections[i].expr)) return false;
    }
    if (!equal(x.order_by, y.order_by)) return false;
  }
  if (static_cast<bool>(a.create_clause) != static_cast<bool>(b.create_clause)) return false;
  if (a.create_clause) {
    if (a.create_clause->patterns.size() != b.create_clause->patterns.size()) return false;
    for (std::size_t i = 0; i < a.create_clause->patterns.size(); ++i) {
      if (!equal(a.create_clause->patterns[i], b.create_clause->patterns[i])) return false;
    }
  }
  return true;
}

inline bool equal(const CreateStatement& a, const CreateStatement& b) {
  if (a.patterns.size() != b.patterns.size()) return false;
  for (std::size_t i = 0; i < a.patterns.size(); ++i) {
    if (!equal(a.patterns[i], b.patterns[i])) return false;
  }
  return true;
}

inline bool equal(const Statement& a, const Statement& b) {
  if (a.is_match() != b.is_match()) return false;
  if (a.is_match()) return equal(a.match(), b.match());
  return equal(a.create(), b.create());
}

}  // namespace quiver
