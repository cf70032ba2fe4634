#pragma once

// Canonical text for statements and expressions. Printing an AST and parsing
// the result yields a structurally identical AST.

#include <string>

#include "quiver/ast.hpp"

namespace quiver {

namespace detail {

inline std::string print_name(const Name& n) {
  if (!n.quoted) return n.text;
  std::string out = "\"";
  for (char c : n.text) {
    out += c;
    if (c == '"') out += '"';
  }
  return out + "\"";
}

inline std::string print_string_literal(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out + "'";
}

inline std::string print_literal(const Value& v) {
  switch (v.kind()) {
    case ValueKind::text: return print_string_literal(v.as_text());
    case ValueKind::timestamp: return "TIMESTAMP'" + v.as_timestamp().to_iso_string() + "'";
    case ValueKind::boolean: return v.as_bool() ? "TRUE" : "FALSE";
    default: return to_text(v);
  }
}

// Binding strength; parentheses are emitted when a child binds looser than
// its context requires.
inline int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::binary:
      switch (e.binary_op) {
        case BinaryOp::or_: return 0;
        case BinaryOp::and_: return 1;
        case BinaryOp::lt:
        case BinaryOp::le:
        case BinaryOp::gt:
        case BinaryOp::ge:
        case BinaryOp::eq:
        case BinaryOp::ne: return 3;
        case BinaryOp::add:
        case BinaryOp::subtract: return 4;
        case BinaryOp::multiply:
        case BinaryOp::divide: return 5;
      }
      return 0;
    case Expr::Kind::unary: return e.unary_op == UnaryOp::not_ ? 2 : 6;
    default: return 7;
  }
}

inline const char* binary_op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::multiply: return "*";
    case BinaryOp::divide: return "/";
    case BinaryOp::add: return "+";
    case BinaryOp::subtract: return "-";
    case BinaryOp::lt: return "<";
    case BinaryOp::le: return "<=";
    case BinaryOp::gt: return ">";
    case BinaryOp::ge: return ">=";
    case BinaryOp::eq: return "=";
    case BinaryOp::ne: return "<>";
    case BinaryOp::and_: return "AND";
    case BinaryOp::or_: return "OR";
  }
  return "?";
}

inline std::string print_expr(const Expr& e, int min_precedence) {
  int prec = precedence(e);
  std::string out;
  switch (e.kind) {
    case Expr::Kind::literal:
      out = print_literal(e.literal);
      break;
    case Expr::Kind::identifier:
      out = print_name(e.name);
      break;
    case Expr::Kind::property:
      out = print_expr(*e.object, 7) + "." + print_name(e.name);
      break;
    case Expr::Kind::index:
      out = print_expr(*e.object, 7) + "[" + print_expr(*e.operand, 0) + "]";
      break;
    case Expr::Kind::call: {
      out = e.name.text + "(";
      if (e.star_argument) {
        out += "*";
      } else {
        for (std::size_t i = 0; i < e.arguments.size(); ++i) {
          if (i) out += ", ";
          out += print_expr(*e.arguments[i], 0);
        }
      }
      out += ")";
      break;
    }
    case Expr::Kind::unary:
      if (e.unary_op == UnaryOp::not_) {
        out = "NOT " + print_expr(*e.object, 2);
      } else {
        // `--` would start a comment, so a negated negation keeps its parens.
        bool nested_negate = e.object->kind == Expr::Kind::unary && e.object->unary_op == UnaryOp::negate;
        out = "-" + print_expr(*e.object, nested_negate ? 7 : 6);
      }
      break;
    case Expr::Kind::binary: {
      // Left-associative operators need one level more binding on the right;
      // comparisons do not chain, so both sides get parenthesized.
      bool comparison = e.binary_op == BinaryOp::lt || e.binary_op == BinaryOp::le ||
                        e.binary_op == BinaryOp::gt || e.binary_op == BinaryOp::ge ||
                        e.binary_op == BinaryOp::eq || e.binary_op == BinaryOp::ne;
      out = print_expr(*e.object, comparison ? prec + 1 : prec) + " " + binary_op_text(e.binary_op) +
            " " + print_expr(*e.operand, prec + 1);
      break;
    }
  }
  if (prec < min_precedence) return "(" + out + ")";
  return out;
}

inline std::string print_match_item(const MatchItem& item) {
  std::string out;
  if (item.alias) out += print_name(*item.alias);
  if (item.label) out += ":" + print_name(*item.label);
  if (item.has_property_map) {
    out += "{";
    for (std::size_t i = 0; i < item.properties.size(); ++i) {
      if (i) out += ",";
      out += print_name(item.properties[i].key) + ":" + print_expr(*item.properties[i].value, 0);
    }
    out += "}";
  } else if (item.where) {
    if (!out.empty()) out += " ";
    out += "WHERE " + print_expr(*item.where, 0);
  }
  return out;
}

inline std::string print_chain(const PatternChain& chain) {
  std::string out = "(" + print_match_item(chain.nodes[0].item) + ")";
  for (std::size_t i = 0; i < chain.elements.size(); ++i) {
    const auto& elem = chain.elements[i];
    if (elem.is_edge()) {
      const auto& edge = elem.edge();
      if (edge.right_to_left) {
        out += "<-[" + print_match_item(edge.item) + "]-";
      } else {
        out += "-[" + print_match_item(edge.item) + "]->";
      }
    } else {
      const auto& q = elem.quantified();
      out += "[" + print_chain(q.inner) + "]";
      if (q.min == 0 && q.max && *q.max == 1) {
        out += "?";
      } else if (q.min == 0 && !q.max) {
        out += "*";
      } else if (q.min == 1 && !q.max) {
        out += "+";
      } else if (q.max) {
        out += "{" + std::to_string(q.min) + "," + std::to_string(*q.max) + "}";
      } else {
        out += "{" + std::to_string(q.min) + ",}";
      }
    }
    out += "(" + print_match_item(chain.nodes[i + 1].item) + ")";
  }
  return out;
}

inline std::string print_order_keys(const std::vector<OrderKey>& keys) {
  std::string out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out += ", ";
    out += print_expr(*keys[i].expr, 0);
    if (keys[i].descending) out += " DESC";
  }
  return out;
}

inline std::string print_create_patterns(const CreateStatement& stmt) {
  std::string out;
  for (std::size_t i = 0; i < stmt.patterns.size(); ++i) {
    if (i) out += ", ";
    out += print_chain(stmt.patterns[i]);
  }
  return out;
}

}  // namespace detail

inline std::string pretty_print(const Expr& e) { return detail::print_expr(e, 0); }

inline std::string pretty_print(const Statement& stmt) {
  using namespace detail;
  if (!stmt.is_match()) return "CREATE " + print_create_patterns(stmt.create());

  const MatchStatement& m = stmt.match();
  std::string out = "MATCH";
  if (!m.truncation.empty()) {
    out += " TRUNCATING ";
    for (std::size_t i = 0; i < m.truncation.size(); ++i) {
      if (i) out += ", ";
      const auto& spec = m.truncation[i];
      if (spec.edge_type) out += print_name(*spec.edge_type);
      if (!spec.order.empty()) out += "(" + print_order_keys(spec.order) + ")";
      out += "=" + std::to_string(spec.limit);
    }
  }
  for (std::size_t i = 0; i < m.parts.size(); ++i) {
    out += i ? ", " : " ";
    const auto& part = m.parts[i];
    switch (part.repetition) {
      case Repetition::trail: out += "TRAIL "; break;
      case Repetition::acyclic: out += "ACYCLIC "; break;
      case Repetition::simple: out += "SIMPLE "; break;
      case Repetition::none: break;
    }
    switch (part.selection) {
      case Selection::shortest: out += "SHORTEST "; break;
      case Selection::all: out += "ALL "; break;
      case Selection::any: out += "ANY "; break;
      case Selection::none: break;
    }
    if (part.path_alias) out += print_name(*part.path_alias) + "=";
    out += print_chain(part.chain);
  }
  if (m.where) out += " WHERE " + print_expr(*m.where, 0);
  if (m.return_clause) {
    out += " RETURN ";
    const auto& ret = *m.return_clause;
    for (std::size_t i = 0; i < ret.projections.size(); ++i) {
      if (i) out += ", ";
      out += print_expr(*ret.projections[i].expr, 0);
      if (ret.projections[i].alias) out += " AS " + print_name(*ret.projections[i].alias);
    }
    if (!ret.order_by.empty()) out += " ORDER BY " + print_order_keys(ret.order_by);
  }
  if (m.create_clause) out += " CREATE " + print_create_patterns(*m.create_clause);
  return out;
}

}  // namespace quiver
