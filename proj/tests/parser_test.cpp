#include "quiver/parser.hpp"

#include <gtest/gtest.h>

#include "quiver/printer.hpp"

namespace quiver {
namespace {

// The worked query exactly as printed, with the same alias on both transfer
// endpoints (parse-only: the bundled fixture uses a distinct second variable).
const char* kFig2Verbatim =
    "MATCH (:Person{name:'Hatfield'})-[:own]->(C)-[:transfer{amount:m,\"timestamp\":d}]->(C)\n"
    "<-[:own]-(:person{name:r})";

const char* kFig2Fixture =
    "MATCH (:Person{name:'Hatfield'})-[:own]->(C)-[:transfer{amount:m,\"timestamp\":d}]->(c2)\n"
    "<-[:own]-(:person{name:r})";

// The complex read query after parameter substitution.
const char* kComplexRead =
    "MATCH\n"
    "truncating Transfer\n"
    "  (\"timestamp\" desc)=10\n"
    "trail p=(m:Medium{isBlocked:true})\n"
    "-[:signIn where \"timestamp\">timestamp'2022-01-01' and\n"
    "  \"timestamp\"<timestamp'2022-12-31']->\n"
    "  (:Account{id:otherId})\n"
    "  [()-[:x:transfer\n"
    "where \"timestamp\" >timestamp'2022-01-01' and \"timestamp\" <timestamp'2022-12-31'\n"
    "and later(p.x,\"timestamp\")]->()]{1,3}\n"
    "  (:Account{id:4884435270860017215})\n"
    "return\n"
    "  otherId,\n"
    "  (cardinality(p)-3)/2 as accountDistance,\n"
    "  m.id as mediumId,\n"
    "  m.type as mediumType\n"
    "order by (accountDistance,otherId,mediumId)";

TEST(Parser, Fig2QueryShape) {
  for (const char* text : {kFig2Verbatim, kFig2Fixture}) {
    Statement stmt = parse_statement(text);
    ASSERT_TRUE(stmt.is_match());
    const MatchStatement& m = stmt.match();
    EXPECT_TRUE(m.truncation.empty());
    ASSERT_EQ(m.parts.size(), 1u);
    const MatchPart& part = m.parts[0];
    EXPECT_EQ(part.repetition, Repetition::none);
    EXPECT_EQ(part.selection, Selection::none);
    EXPECT_FALSE(part.path_alias.has_value());
    EXPECT_EQ(part.chain.nodes.size(), 4u);
    EXPECT_EQ(part.chain.elements.size(), 3u);
    EXPECT_FALSE(m.where);
    EXPECT_FALSE(m.return_clause);
    EXPECT_FALSE(m.create_clause);
    // middle edge binds amount and the quoted timestamp property
    const EdgePattern& transfer = part.chain.elements[1].edge();
    ASSERT_TRUE(transfer.item.label.has_value());
    EXPECT_EQ(transfer.item.label->text, "transfer");
    ASSERT_EQ(transfer.item.properties.size(), 2u);
    EXPECT_EQ(transfer.item.properties[0].key.text, "amount");
    EXPECT_FALSE(transfer.item.properties[0].key.quoted);
    EXPECT_EQ(transfer.item.properties[1].key.text, "timestamp");
    EXPECT_TRUE(transfer.item.properties[1].key.quoted);
    // last edge is right-to-left
    EXPECT_TRUE(part.chain.elements[2].edge().right_to_left);
  }
}

TEST(Parser, ComplexReadShape) {
  Statement stmt = parse_statement(kComplexRead);
  ASSERT_TRUE(stmt.is_match());
  const MatchStatement& m = stmt.match();

  ASSERT_EQ(m.truncation.size(), 1u);
  const TruncationSpec& spec = m.truncation[0];
  ASSERT_TRUE(spec.edge_type.has_value());
  EXPECT_EQ(spec.edge_type->text, "Transfer");
  ASSERT_EQ(spec.order.size(), 1u);
  EXPECT_TRUE(spec.order[0].descending);
  EXPECT_EQ(spec.order[0].expr->kind, Expr::Kind::identifier);
  EXPECT_TRUE(spec.order[0].expr->name.quoted);
  EXPECT_EQ(spec.limit, 10u);

  ASSERT_EQ(m.parts.size(), 1u);
  const MatchPart& part = m.parts[0];
  EXPECT_EQ(part.repetition, Repetition::trail);
  ASSERT_TRUE(part.path_alias.has_value());
  EXPECT_EQ(part.path_alias->text, "p");

  ASSERT_EQ(part.chain.nodes.size(), 3u);
  ASSERT_EQ(part.chain.elements.size(), 2u);
  EXPECT_TRUE(part.chain.elements[0].is_edge());
  ASSERT_FALSE(part.chain.elements[1].is_edge());
  const QuantifiedPattern& q = part.chain.elements[1].quantified();
  EXPECT_EQ(q.min, 1u);
  ASSERT_TRUE(q.max.has_value());
  EXPECT_EQ(*q.max, 3u);
  // ':x:transfer' binds x and tests the transfer label
  const EdgePattern& inner = q.inner.elements[0].edge();
  ASSERT_TRUE(inner.item.alias.has_value());
  EXPECT_EQ(inner.item.alias->text, "x");
  ASSERT_TRUE(inner.item.label.has_value());
  EXPECT_EQ(inner.item.label->text, "transfer");
  ASSERT_TRUE(inner.item.where);

  ASSERT_TRUE(m.return_clause);
  EXPECT_EQ(m.return_clause->projections.size(), 4u);
  EXPECT_EQ(m.return_clause->order_by.size(), 3u);
  EXPECT_FALSE(m.return_clause->projections[0].alias.has_value());
  ASSERT_TRUE(m.return_clause->projections[1].alias.has_value());
  EXPECT_EQ(m.return_clause->projections[1].alias->text, "accountDistance");
}

TEST(Parser, SingleNode) {
  Statement stmt = parse_statement("MATCH (x)");
  const MatchPart& part = stmt.match().parts[0];
  ASSERT_EQ(part.chain.nodes.size(), 1u);
  const MatchItem& item = part.chain.nodes[0].item;
  ASSERT_TRUE(item.alias.has_value());
  EXPECT_EQ(item.alias->text, "x");
  EXPECT_FALSE(item.label.has_value());
  EXPECT_TRUE(item.properties.empty());
  EXPECT_FALSE(stmt.match().return_clause);
}

TEST(Parser, TruncationSpecs) {
  Statement stmt = parse_statement("MATCH TRUNCATING Transfer(\"timestamp\" DESC)=10 (x)");
  ASSERT_EQ(stmt.match().truncation.size(), 1u);
  EXPECT_EQ(stmt.match().truncation[0].limit, 10u);

  Statement unnamed = parse_statement("MATCH TRUNCATING =5 (x)");
  ASSERT_EQ(unnamed.match().truncation.size(), 1u);
  EXPECT_FALSE(unnamed.match().truncation[0].edge_type.has_value());
  EXPECT_TRUE(unnamed.match().truncation[0].order.empty());
  EXPECT_EQ(unnamed.match().truncation[0].limit, 5u);

  Statement multi = parse_statement("MATCH TRUNCATING =4, Transfer(amount ASC)=2 (x)");
  ASSERT_EQ(multi.match().truncation.size(), 2u);
  EXPECT_FALSE(multi.match().truncation[0].edge_type.has_value());
  ASSERT_TRUE(multi.match().truncation[1].edge_type.has_value());
  EXPECT_FALSE(multi.match().truncation[1].order[0].descending);
}

TEST(Parser, TruncationErrors) {
  for (const char* text : {
           "MATCH TRUNCATING Transfer=0 (x)",     // limit must be >= 1
           "MATCH TRUNCATING Transfer (x)",       // missing '='
           "MATCH TRUNCATING Transfer=1.5 (x)",   // not an integer
           "MATCH TRUNCATING Transfer=x (x)",     // not a number
       }) {
    try {
      parse_statement(text);
      FAIL() << "expected ParseError for: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::parse_error) << text;
    }
  }
}

TEST(Parser, QuantifierNormalization) {
  auto quantifier = [](const char* text) {
    Statement stmt = parse_statement(text);
    const auto& q = stmt.match().parts[0].chain.elements[0].quantified();
    return std::make_pair(q.min, q.max);
  };
  EXPECT_EQ(quantifier("MATCH (a)[()-[:e]->()]?(b)"), std::make_pair(0u, std::optional<std::uint32_t>(1)));
  EXPECT_EQ(quantifier("MATCH (a)[()-[:e]->()]*(b)"), std::make_pair(0u, std::optional<std::uint32_t>()));
  EXPECT_EQ(quantifier("MATCH (a)[()-[:e]->()]+(b)"), std::make_pair(1u, std::optional<std::uint32_t>()));
  EXPECT_EQ(quantifier("MATCH (a)[()-[:e]->()]{2,5}(b)"),
            std::make_pair(2u, std::optional<std::uint32_t>(5)));
  EXPECT_EQ(quantifier("MATCH (a)[()-[:e]->()]{3,}(b)"), std::make_pair(3u, std::optional<std::uint32_t>()));
}

TEST(Parser, QuantifierErrors) {
  for (const char* text : {
           "MATCH (a)[()-[:e]->()]{3,2}(b)",  // min > max
           "MATCH (a)[()-[:e]->()]{0,0}(b)",  // max must be >= 1
           "MATCH (a)[()-[:e]->()]{2}(b)",    // comma required
           "MATCH (a)[()-[:e]->()](b)",       // quantifier required
       }) {
    EXPECT_THROW(parse_statement(text), Error) << text;
  }
}

TEST(Parser, MatchModes) {
  EXPECT_EQ(parse_statement("MATCH TRAIL (x)").match().parts[0].repetition, Repetition::trail);
  EXPECT_EQ(parse_statement("MATCH ACYCLIC (x)").match().parts[0].repetition, Repetition::acyclic);
  EXPECT_EQ(parse_statement("MATCH SIMPLE (x)").match().parts[0].repetition, Repetition::simple);
  EXPECT_EQ(parse_statement("MATCH SHORTEST (x)").match().parts[0].selection, Selection::shortest);
  EXPECT_EQ(parse_statement("MATCH ALL (x)").match().parts[0].selection, Selection::all);
  EXPECT_EQ(parse_statement("MATCH ANY (x)").match().parts[0].selection, Selection::any);
  Statement combined = parse_statement("MATCH TRAIL SHORTEST q=(x)");
  const MatchPart& both = combined.match().parts[0];
  EXPECT_EQ(both.repetition, Repetition::trail);
  EXPECT_EQ(both.selection, Selection::shortest);
  EXPECT_EQ(both.path_alias->text, "q");
}

TEST(Parser, CommaJoinedParts) {
  Statement stmt = parse_statement("MATCH (a)-[:e]->(b), (b)-[:f]->(c) WHERE a.v = 1 RETURN c");
  EXPECT_EQ(stmt.match().parts.size(), 2u);
  EXPECT_TRUE(stmt.match().where != nullptr);
  ASSERT_TRUE(stmt.match().return_clause);
}

TEST(Parser, DependentCreate) {
  Statement stmt = parse_statement("MATCH (a:Person) CREATE (a)-[:flag]->(:Alert{level:2})");
  ASSERT_TRUE(stmt.match().create_clause);
  EXPECT_EQ(stmt.match().create_clause->patterns.size(), 1u);
}

TEST(Parser, CreateStatement) {
  Statement stmt = parse_statement(
      "CREATE (a:Person{name:'X'})-[:own]->(b:Account{id:1}),(a)-[:own]->(c:Account{id:2})");
  ASSERT_FALSE(stmt.is_match());
  EXPECT_EQ(stmt.create().patterns.size(), 2u);
}

TEST(Parser, CreateRejectsMatchOnlyForms) {
  EXPECT_THROW(parse_statement("CREATE (a)[()-[:e]->()]+(b)"), Error);
  EXPECT_THROW(parse_statement("CREATE (a WHERE a.v = 1)"), Error);
}

TEST(Parser, TrailingGarbage) {
  try {
    parse_statement("MATCH (x) nonsense");
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse_error);
    EXPECT_GT(e.column(), 1);
  }
}

TEST(Parser, ErrorsCarryPosition) {
  try {
    parse_statement("MATCH (x");
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse_error);
    EXPECT_EQ(e.line(), 1);
  }
}

TEST(Parser, OrderByTupleAndListForms) {
  Statement tuple = parse_statement("MATCH (x) RETURN x.a AS a, x.b AS b ORDER BY (a, b)");
  EXPECT_EQ(tuple.match().return_clause->order_by.size(), 2u);
  Statement list = parse_statement("MATCH (x) RETURN x.a AS a, x.b AS b ORDER BY a DESC, b");
  ASSERT_EQ(list.match().return_clause->order_by.size(), 2u);
  EXPECT_TRUE(list.match().return_clause->order_by[0].descending);
  Statement single = parse_statement("MATCH (x) RETURN x.a AS a ORDER BY (a + 1) DESC");
  ASSERT_EQ(single.match().return_clause->order_by.size(), 1u);
  EXPECT_TRUE(single.match().return_clause->order_by[0].descending);
}

TEST(Parser, DuplicateProjectionAlias) {
  EXPECT_THROW(parse_statement("MATCH (x) RETURN x.a AS a, x.b AS a"), Error);
}

TEST(Parser, ExpressionPrecedence) {
  Statement stmt = parse_statement("MATCH (x) WHERE NOT x.a + 2 * 3 < 9 AND x.b = 1 OR x.c = 2");
  const Expr& e = *stmt.match().where;
  // OR at the top
  ASSERT_EQ(e.kind, Expr::Kind::binary);
  EXPECT_EQ(e.binary_op, BinaryOp::or_);
  const Expr& lhs = *e.object;
  EXPECT_EQ(lhs.binary_op, BinaryOp::and_);
  // NOT binds tighter than AND, looser than '<'
  EXPECT_EQ(lhs.object->kind, Expr::Kind::unary);
  EXPECT_EQ(lhs.object->unary_op, UnaryOp::not_);
  EXPECT_EQ(lhs.object->object->binary_op, BinaryOp::lt);
  // and * tighter than +
  const Expr& add = *lhs.object->object->object;
  EXPECT_EQ(add.binary_op, BinaryOp::add);
  EXPECT_EQ(add.operand->binary_op, BinaryOp::multiply);
}

TEST(Parser, IndexBracketSplitsEdgeTokens) {
  // ']-' after an index must not eat the minus of a subtraction
  Statement stmt = parse_statement("MATCH (x) WHERE p[0]-1 = 0");
  const Expr& cmp = *stmt.match().where;
  EXPECT_EQ(cmp.binary_op, BinaryOp::eq);
  EXPECT_EQ(cmp.object->binary_op, BinaryOp::subtract);
  EXPECT_EQ(cmp.object->object->kind, Expr::Kind::index);

  // ']->' splits too; `p[0]->q` is still nonsense and must error cleanly,
  // while a plain comparison after an index works.
  EXPECT_THROW(parse_statement("MATCH (x) WHERE p[0]->q"), Error);
  Statement cmp2 = parse_statement("MATCH (x) WHERE p[0] > 1");
  EXPECT_EQ(cmp2.match().where->binary_op, BinaryOp::gt);
}

TEST(Parser, PropertyNamesMayBeKeywordsOrQuoted) {
  Statement stmt = parse_statement("MATCH (x) WHERE x.type = 'phone' AND x.\"timestamp\" < x.order");
  EXPECT_TRUE(stmt.match().where != nullptr);
  Statement map = parse_statement("MATCH (x{\"timestamp\":d, type:t})");
  EXPECT_EQ(map.match().parts[0].chain.nodes[0].item.properties.size(), 2u);
}

TEST(Parser, GrammarCoverageCorpus) {
  // Every production of the grammar appears at least once across this corpus.
  const char* corpus[] = {
      "MATCH (x)",
      "MATCH (x:Person)",
      "MATCH (:Person{name:'a'})",
      "MATCH (x WHERE x.v = 1)",
      "MATCH (a)-[:own]->(b)",
      "MATCH (a)<-[e:own]-(b)",
      "MATCH (a)-[e]->(b)",
      "MATCH (a)-[:x:transfer]->(b)",
      "MATCH (a)-[e:own{since:2020}]->(b)",
      "MATCH (a)-[e WHERE e.v = 1]->(b)",
      "MATCH (a)[()-[:e]->()]?(b)",
      "MATCH (a)[()-[:e]->()]*(b)",
      "MATCH (a)[()-[:e]->()]+(b)",
      "MATCH (a)[()-[:e]->()]{1,3}(b)",
      "MATCH (a)[()-[:e]->()]{2,}(b)",
      "MATCH TRAIL (a)-[:e]->(b)",
      "MATCH ACYCLIC (a)-[:e]->(b)",
      "MATCH SIMPLE (a)-[:e]->(b)",
      "MATCH SHORTEST p=(a)-[:e]->(b)",
      "MATCH ALL (a)-[:e]->(b)",
      "MATCH ANY (a)-[:e]->(b)",
      "MATCH TRAIL ANY p=(a)-[:e]->(b)",
      "MATCH TRUNCATING =5 (x)",
      "MATCH TRUNCATING Transfer=5 (x)",
      "MATCH TRUNCATING Transfer(\"timestamp\" DESC)=10 (x)",
      "MATCH TRUNCATING Transfer(\"timestamp\" DESC, amount ASC)=10 (x)",
      "MATCH TRUNCATING =4, Transfer(amount)=2 (x)",
      "MATCH (a), (b)",
      "MATCH (a) WHERE a.v = 1",
      "MATCH (a) RETURN a.v",
      "MATCH (a) RETURN a.v AS v ORDER BY v DESC",
      "MATCH (a) RETURN a.v AS v, a.w AS w ORDER BY (v, w)",
      "MATCH (a) CREATE (b:T{v:a.v})",
      "MATCH (a:Person) RETURN count(*)",
      "CREATE (:Person{name:'Hatfield'})",
      "CREATE (a:Person)-[:own]->(b:Account), (a)-[:own]->(c:Account)",
  };
  for (const char* text : corpus) {
    try {
      Statement stmt = parse_statement(text);
      // And the canonical form reparses to the same AST.
      Statement again = parse_statement(pretty_print(stmt));
      EXPECT_TRUE(equal(stmt, again)) << text << "\n  printed: " << pretty_print(stmt);
    } catch (const Error& e) {
      FAIL() << text << " -> " << e.what();
    }
  }
}

}  // namespace
}  // namespace quiver
