#pragma once

// Recursive-descent parser for the MATCH/CREATE language:
//
//   MatchStatement = MATCH [Truncation] Match {',' Match} [WhereClause] [Statement] .
//   Truncation     = TRUNCATING TruncationSpec {',' TruncationSpec} .
//   TruncationSpec = [EdgeType_id] ['(' OrderSpec {',' OrderSpec} ')'] '=' int .
//   Match          = MatchMode [id '='] MatchNode .
//   MatchNode      = '(' MatchItem ')' {(MatchEdge | MatchPath) MatchNode} .
//   MatchEdge      = '-[' MatchItem ']->' | '<-[' MatchItem ']-' .
//   MatchItem      = [id] [GraphLabel] [Document | Where] .
//   MatchPath      = '[' MatchNode ']' MatchQuantifier .
//   MatchQuantifier= '?' | '*' | '+' | '{' int ',' [int] '}' .
//   MatchMode      = [TRAIL | ACYCLIC | SIMPLE] [SHORTEST | ALL | ANY] .
//
// A GraphLabel is ':' name, or ':' alias ':' label which binds the alias and
// tests the label in one item. CREATE reuses the node/edge pattern shapes
// without quantifiers, inline WHERE or match modes.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quiver/ast.hpp"
#include "quiver/error.hpp"
#include "quiver/lexer.hpp"

namespace quiver {

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Statement parse_statement() {
    Statement stmt = parse_one_statement();
    if (!at_end()) error("unexpected trailing input");
    return stmt;
  }

 private:
  // ---- token helpers ----

  const Token& cur() const { return tokens_[pos_]; }
  const Token& ahead(std::size_t n) const {
    std::size_t p = pos_ + n;
    return p < tokens_.size() ? tokens_[p] : tokens_.back();
  }
  bool at_end() const { return cur().kind == TokenKind::end_of_input; }
  void next() {
    if (pos_ + 1 < tokens_.size()) ++pos_;
  }

  [[noreturn]] void error(const std::string& message) const {
    const Token& t = cur();
    std::string where = t.kind == TokenKind::end_of_input ? "end of input" : "'" + t.text + "'";
    throw Error(ErrorCode::parse_error, message + ", found " + where, t.line, t.column);
  }

  bool accept_punct(std::string_view p) {
    if (cur().is_punct(p)) {
      next();
      return true;
    }
    return false;
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) error("expected '" + std::string(p) + "'");
  }
  bool accept_keyword(std::string_view kw) {
    if (cur().is_keyword(kw)) {
      next();
      return true;
    }
    return false;
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) error("expected " + std::string(kw));
  }

  bool at_name() const {
    return cur().kind == TokenKind::identifier || cur().kind == TokenKind::quoted_identifier;
  }

  Name expect_name(const char* what) {
    if (!at_name()) error(std::string("expected ") + what);
    Name n{cur().text, cur().kind == TokenKind::quoted_identifier};
    next();
    return n;
  }

  // Property names may also be spelled as bare keywords (`x.type`).
  Name expect_property_name() {
    if (cur().kind == TokenKind::keyword) {
      Name n{cur().text, false};
      next();
      return n;
    }
    return expect_name("property name");
  }

  // Splits a compound `]-` / `]->` back into `]` plus the remainder; used
  // when an index subscript is being closed inside an expression, so that
  // e.g. `p[i]-1` parses as subtraction.
  void expect_index_close() {
    if (accept_punct("]")) return;
    if (cur().is_punct("]-") || cur().is_punct("]->")) {
      Token rest = cur();
      rest.text = rest.text.substr(1);
      rest.column += 1;
      if (rest.text == "-") {
        rest.text = "-";
      }
      tokens_[pos_] = rest;
      if (rest.text == "->") {
        // '->' is not a token on its own; split again into '-' and '>'.
        Token gt = rest;
        gt.text = ">";
        gt.column += 1;
        tokens_[pos_].text = "-";
        tokens_.insert(tokens_.begin() + static_cast<std::ptrdiff_t>(pos_) + 1, gt);
      }
      return;
    }
    error("expected ']'");
  }

  // ---- statements ----

  Statement parse_one_statement() {
    if (accept_keyword("match")) {
      Statement s{MatchStatement{}};
      parse_match_statement(s.match());
      return s;
    }
    if (accept_keyword("create")) {
      Statement s{CreateStatement{}};
      parse_create_statement(s.create());
      return s;
    }
    error("expected MATCH or CREATE");
  }

  void parse_match_statement(MatchStatement& stmt) {
    if (accept_keyword("truncating")) parse_truncation(stmt.truncation);
    stmt.parts.push_back(parse_match_part());
    while (cur().is_punct(",")) {
      next();
      stmt.parts.push_back(parse_match_part());
    }
    if (accept_keyword("where")) stmt.where = parse_expr();
    if (accept_keyword("return")) {
      stmt.return_clause = std::make_unique<ReturnClause>(parse_return_clause());
    } else if (accept_keyword("create")) {
      stmt.create_clause = std::make_unique<CreateStatement>();
      parse_create_statement(*stmt.create_clause);
    } else if (!at_end()) {
      error("expected RETURN, CREATE or end of statement");
    }
  }

  void parse_truncation(std::vector<TruncationSpec>& specs) {
    specs.push_back(parse_truncation_spec());
    while (cur().is_punct(",") && truncation_spec_follows()) {
      next();
      specs.push_back(parse_truncation_spec());
    }
  }

  // Lookahead after a comma: [id] ['(' ... ')'] '=' shapes a further spec.
  bool truncation_spec_follows() const {
    std::size_t p = pos_ + 1;
    auto tok = [&](std::size_t k) -> const Token& {
      return k < tokens_.size() ? tokens_[k] : tokens_.back();
    };
    if (tok(p).kind == TokenKind::identifier || tok(p).kind == TokenKind::quoted_identifier) ++p;
    if (tok(p).is_punct("(")) {
      int depth = 1;
      ++p;
      while (depth > 0) {
        if (tok(p).kind == TokenKind::end_of_input) return false;
        if (tok(p).is_punct("(")) ++depth;
        if (tok(p).is_punct(")")) --depth;
        ++p;
      }
    }
    return tok(p).is_punct("=");
  }

  TruncationSpec parse_truncation_spec() {
    TruncationSpec spec;
    if (at_name()) spec.edge_type = expect_name("edge type");
    if (accept_punct("(")) {
      spec.order.push_back(parse_order_key());
      while (accept_punct(",")) spec.order.push_back(parse_order_key());
      expect_punct(")");
    }
    expect_punct("=");
    const Token& t = cur();
    if (t.kind != TokenKind::number_literal || t.text.find('.') != std::string::npos) {
      error("expected integer truncation limit");
    }
    std::uint64_t limit = 0;
    for (char c : t.text) {
      if (limit > (std::numeric_limits<std::uint64_t>::max() - 9) / 10) error("truncation limit too large");
      limit = limit * 10 + static_cast<std::uint64_t>(c - '0');
    }
    if (limit == 0) error("truncation limit must be at least 1");
    spec.limit = limit;
    next();
    return spec;
  }

  OrderKey parse_order_key() {
    OrderKey key;
    key.expr = parse_expr();
    if (accept_keyword("desc")) {
      key.descending = true;
    } else {
      accept_keyword("asc");
    }
    return key;
  }

  MatchPart parse_match_part() {
    MatchPart part;
    if (accept_keyword("trail")) {
      part.repetition = Repetition::trail;
    } else if (accept_keyword("acyclic")) {
      part.repetition = Repetition::acyclic;
    } else if (accept_keyword("simple")) {
      part.repetition = Repetition::simple;
    }
    if (accept_keyword("shortest")) {
      part.selection = Selection::shortest;
    } else if (accept_keyword("all")) {
      part.selection = Selection::all;
    } else if (accept_keyword("any")) {
      part.selection = Selection::any;
    }
    if (at_name() && ahead(1).is_punct("=")) {
      part.path_alias = expect_name("path identifier");
      next();  // '='
    }
    part.chain = parse_chain();
    return part;
  }

  PatternChain parse_chain() {
    PatternChain chain;
    chain.nodes.push_back(parse_node_pattern());
    while (true) {
      if (cur().is_punct("-[") || cur().is_punct("<-[")) {
        chain.elements.push_back(PatternElement{parse_edge_pattern()});
      } else if (cur().is_punct("[")) {
        chain.elements.push_back(PatternElement{parse_quantified_pattern()});
      } else {
        break;
      }
      chain.nodes.push_back(parse_node_pattern());
    }
    return chain;
  }

  NodePattern parse_node_pattern() {
    expect_punct("(");
    NodePattern node;
    node.item = parse_match_item();
    expect_punct(")");
    return node;
  }

  EdgePattern parse_edge_pattern() {
    EdgePattern edge;
    if (accept_punct("-[")) {
      edge.right_to_left = false;
      edge.item = parse_match_item();
      expect_punct("]->");
    } else {
      expect_punct("<-[");
      edge.right_to_left = true;
      edge.item = parse_match_item();
      expect_punct("]-");
    }
    return edge;
  }

  std::unique_ptr<QuantifiedPattern> parse_quantified_pattern() {
    expect_punct("[");
    auto q = std::make_unique<QuantifiedPattern>();
    q->inner = parse_chain();
    expect_punct("]");
    if (accept_punct("?")) {
      q->min = 0;
      q->max = 1;
    } else if (accept_punct("*")) {
      q->min = 0;
      q->max = std::nullopt;
    } else if (accept_punct("+")) {
      q->min = 1;
      q->max = std::nullopt;
    } else if (accept_punct("{")) {
      q->min = parse_small_int("quantifier minimum");
      expect_punct(",");
      if (cur().kind == TokenKind::number_literal) {
        q->max = parse_small_int("quantifier maximum");
        if (*q->max < 1) error("quantifier maximum must be at least 1");
        if (q->min > *q->max) error("quantifier minimum exceeds maximum");
      } else {
        q->max = std::nullopt;
      }
      expect_punct("}");
    } else {
      error("expected quantifier after ']'");
    }
    return q;
  }

  std::uint32_t parse_small_int(const char* what) {
    const Token& t = cur();
    if (t.kind != TokenKind::number_literal || t.text.find('.') != std::string::npos) {
      error(std::string("expected ") + what);
    }
    std::uint64_t v = 0;
    for (char c : t.text) {
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
      if (v > 1000000) error(std::string(what) + " too large");
    }
    next();
    return static_cast<std::uint32_t>(v);
  }

  MatchItem parse_match_item() {
    MatchItem item;
    if (at_name()) item.alias = expect_name("identifier");
    if (accept_punct(":")) {
      Name first = expect_name("label");
      if (accept_punct(":")) {
        // ':alias:label' form: the first name binds, the second is the label.
        if (item.alias) error("unexpected second ':' in pattern item");
        item.alias = first;
        item.label = expect_name("label");
      } else {
        item.label = first;
      }
    }
    if (cur().is_punct("{")) {
      next();
      item.has_property_map = true;
      if (!cur().is_punct("}")) {
        item.properties.push_back(parse_property_entry());
        while (accept_punct(",")) item.properties.push_back(parse_property_entry());
      }
      expect_punct("}");
    } else if (accept_keyword("where")) {
      item.where = parse_expr();
    }
    return item;
  }

  PropertyEntry parse_property_entry() {
    PropertyEntry entry;
    entry.key = expect_property_name();
    expect_punct(":");
    entry.value = parse_expr();
    return entry;
  }

  void parse_create_statement(CreateStatement& stmt) {
    stmt.patterns.push_back(parse_create_pattern());
    while (accept_punct(",")) stmt.patterns.push_back(parse_create_pattern());
  }

  PatternChain parse_create_pattern() {
    PatternChain chain = parse_chain();
    for (const auto& elem : chain.elements) {
      if (!elem.is_edge()) error("quantified patterns are not allowed in CREATE");
      if (elem.edge().item.where) error("WHERE is not allowed in CREATE patterns");
    }
    for (const auto& node : chain.nodes) {
      if (node.item.where) error("WHERE is not allowed in CREATE patterns");
    }
    return chain;
  }

  ReturnClause parse_return_clause() {
    ReturnClause ret;
    ret.projections.push_back(parse_projection());
    while (accept_punct(",")) ret.projections.push_back(parse_projection());
    for (std::size_t i = 0; i < ret.projections.size(); ++i) {
      for (std::size_t j = i + 1; j < ret.projections.size(); ++j) {
        const auto& a = ret.projections[i].alias;
        const auto& b = ret.projections[j].alias;
        if (a && b && a->text == b->text) error("duplicate projection alias '" + a->text + "'");
      }
    }
    if (accept_keyword("order")) {
      expect_keyword("by");
      ret.order_by = parse_order_by_keys();
    }
    return ret;
  }

  Projection parse_projection() {
    Projection p;
    p.expr = parse_expr();
    if (accept_keyword("as")) p.alias = expect_name("alias");
    return p;
  }

  // Accepts both `ORDER BY a DESC, b` and the tuple form `ORDER BY (a, b, c)`.
  std::vector<OrderKey> parse_order_by_keys() {
    std::vector<OrderKey> keys;
    if (cur().is_punct("(")) {
      std::size_t save = pos_;
      next();
      OrderKey first = parse_order_key();
      if (cur().is_punct(",")) {
        keys.push_back(std::move(first));
        while (accept_punct(",")) keys.push_back(parse_order_key());
        expect_punct(")");
        return keys;
      }
      // A parenthesized single expression; reparse as an ordinary key.
      pos_ = save;
    }
    keys.push_back(parse_order_key());
    while (accept_punct(",")) keys.push_back(parse_order_key());
    return keys;
  }

  // ---- expressions ----
  // precedence: property/index > unary > * / > + - > comparisons > NOT > AND > OR

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (cur().is_keyword("or")) {
      int l = cur().line, c = cur().column;
      next();
      auto e = make_expr(Expr::Kind::binary);
      e->binary_op = BinaryOp::or_;
      e->object = std::move(lhs);
      e->operand = parse_and();
      e->line = l;
      e->column = c;
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (cur().is_keyword("and")) {
      int l = cur().line, c = cur().column;
      next();
      auto e = make_expr(Expr::Kind::binary);
      e->binary_op = BinaryOp::and_;
      e->object = std::move(lhs);
      e->operand = parse_not();
      e->line = l;
      e->column = c;
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (cur().is_keyword("not")) {
      int l = cur().line, c = cur().column;
      next();
      auto e = make_expr(Expr::Kind::unary);
      e->unary_op = UnaryOp::not_;
      e->object = parse_not();
      e->line = l;
      e->column = c;
      return e;
    }
    return parse_comparison();
  }

  ExprPtr parse_comparison() {
    ExprPtr lhs = parse_additive();
    std::optional<BinaryOp> op;
    if (cur().is_punct("<")) op = BinaryOp::lt;
    else if (cur().is_punct("<=")) op = BinaryOp::le;
    else if (cur().is_punct(">")) op = BinaryOp::gt;
    else if (cur().is_punct(">=")) op = BinaryOp::ge;
    else if (cur().is_punct("=")) op = BinaryOp::eq;
    else if (cur().is_punct("<>")) op = BinaryOp::ne;
    if (!op) return lhs;
    int l = cur().line, c = cur().column;
    next();
    auto e = make_expr(Expr::Kind::binary);
    e->binary_op = *op;
    e->object = std::move(lhs);
    e->operand = parse_additive();
    e->line = l;
    e->column = c;
    return e;
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    while (cur().is_punct("+") || cur().is_punct("-")) {
      BinaryOp op = cur().is_punct("+") ? BinaryOp::add : BinaryOp::subtract;
      int l = cur().line, c = cur().column;
      next();
      auto e = make_expr(Expr::Kind::binary);
      e->binary_op = op;
      e->object = std::move(lhs);
      e->operand = parse_multiplicative();
      e->line = l;
      e->column = c;
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_unary();
    while (cur().is_punct("*") || cur().is_punct("/")) {
      BinaryOp op = cur().is_punct("*") ? BinaryOp::multiply : BinaryOp::divide;
      int l = cur().line, c = cur().column;
      next();
      auto e = make_expr(Expr::Kind::binary);
      e->binary_op = op;
      e->object = std::move(lhs);
      e->operand = parse_unary();
      e->line = l;
      e->column = c;
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (cur().is_punct("-")) {
      int l = cur().line, c = cur().column;
      next();
      auto e = make_expr(Expr::Kind::unary);
      e->unary_op = UnaryOp::negate;
      e->object = parse_unary();
      e->line = l;
      e->column = c;
      return e;
    }
    if (cur().is_punct("+")) {
      next();
      return parse_unary();
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    while (true) {
      if (cur().is_punct(".")) {
        int l = cur().line, c = cur().column;
        next();
        auto p = make_expr(Expr::Kind::property);
        p->name = expect_property_name();
        p->object = std::move(e);
        p->line = l;
        p->column = c;
        e = std::move(p);
      } else if (cur().is_punct("[")) {
        int l = cur().line, c = cur().column;
        next();
        auto idx = make_expr(Expr::Kind::index);
        idx->object = std::move(e);
        idx->operand = parse_expr();
        idx->line = l;
        idx->column = c;
        expect_index_close();
        e = std::move(idx);
      } else {
        break;
      }
    }
    return e;
  }

  ExprPtr parse_primary() {
    const Token& t = cur();
    int l = t.line, c = t.column;
    switch (t.kind) {
      case TokenKind::number_literal: {
        auto e = make_expr(Expr::Kind::literal);
        if (t.text.find('.') == std::string::npos) {
          std::int64_t v = 0;
          for (char ch : t.text) {
            if (v > (std::numeric_limits<std::int64_t>::max() - 9) / 10) {
              error("integer literal out of range");
            }
            v = v * 10 + (ch - '0');
          }
          e->literal = Value::integer(v);
        } else {
          auto d = Decimal::parse(t.text);
          if (!d) error("bad decimal literal");
          e->literal = Value::decimal(*d);
        }
        e->line = l;
        e->column = c;
        next();
        return e;
      }
      case TokenKind::string_literal: {
        auto e = make_expr(Expr::Kind::literal);
        e->literal = Value::text(t.text);
        e->line = l;
        e->column = c;
        next();
        return e;
      }
      case TokenKind::timestamp_literal: {
        auto ts = Timestamp::parse(t.text);
        if (!ts) error("bad timestamp literal '" + t.text + "'");
        auto e = make_expr(Expr::Kind::literal);
        e->literal = Value::timestamp(*ts);
        e->line = l;
        e->column = c;
        next();
        return e;
      }
      case TokenKind::keyword: {
        if (t.is_keyword("true") || t.is_keyword("false")) {
          auto e = make_expr(Expr::Kind::literal);
          e->literal = Value::boolean(t.is_keyword("true"));
          e->line = l;
          e->column = c;
          next();
          return e;
        }
        error("unexpected keyword in expression");
      }
      case TokenKind::identifier:
      case TokenKind::quoted_identifier: {
        Name name{t.text, t.kind == TokenKind::quoted_identifier};
        next();
        if (!name.quoted && cur().is_punct("(")) {
          next();
          auto call = make_expr(Expr::Kind::call);
          call->name = name;
          call->line = l;
          call->column = c;
          if (cur().is_punct("*")) {
            call->star_argument = true;
            next();
          } else if (!cur().is_punct(")")) {
            call->arguments.push_back(parse_expr());
            while (accept_punct(",")) call->arguments.push_back(parse_expr());
          }
          expect_punct(")");
          return call;
        }
        auto e = make_expr(Expr::Kind::identifier);
        e->name = name;
        e->line = l;
        e->column = c;
        return e;
      }
      case TokenKind::punctuation: {
        if (t.is_punct("(")) {
          next();
          ExprPtr e = parse_expr();
          expect_punct(")");
          return e;
        }
        error("unexpected token in expression");
      }
      default:
        error("expected expression");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

inline Statement parse_statement(std::string_view text) {
  return Parser(tokenize(text)).parse_statement();
}

}  // namespace quiver
