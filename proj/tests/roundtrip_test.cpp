#include <gtest/gtest.h>

#include "quiver/parser.hpp"
#include "quiver/printer.hpp"
#include "support/astgen.hpp"

namespace quiver {
namespace {

TEST(RoundTrip, GeneratedStatements) {
  // parse(pretty_print(ast)) must be structurally identical to ast.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    testing::AstGenerator gen(seed);
    Statement stmt = gen.statement();
    std::string text = pretty_print(stmt);
    SCOPED_TRACE("seed " + std::to_string(seed) + ": " + text);
    Statement reparsed = parse_statement(text);
    EXPECT_TRUE(equal(stmt, reparsed));
    // and printing is a fixed point
    EXPECT_EQ(pretty_print(reparsed), text);
  }
}

TEST(RoundTrip, QuantifierSugar) {
  Statement q = parse_statement("MATCH (a)[()-[:e]->()]{0,1}(b)");
  EXPECT_EQ(pretty_print(q), "MATCH (a)[()-[:e]->()]?(b)");
  Statement star = parse_statement("MATCH (a)[()-[:e]->()]{0,}(b)");
  EXPECT_EQ(pretty_print(star), "MATCH (a)[()-[:e]->()]*(b)");
  Statement plus = parse_statement("MATCH (a)[()-[:e]->()]{1,}(b)");
  EXPECT_EQ(pretty_print(plus), "MATCH (a)[()-[:e]->()]+(b)");
}

TEST(RoundTrip, SimpleStatementIsStable) {
  EXPECT_EQ(pretty_print(parse_statement("match (x)")), "MATCH (x)");
  EXPECT_EQ(pretty_print(parse_statement("MATCH (a) return a.v as V order by (V)")),
            "MATCH (a) RETURN a.v AS V ORDER BY V");
}

TEST(RoundTrip, NestedNegation) {
  Statement stmt = parse_statement("MATCH (x) WHERE -(-1) = 1");
  Statement again = parse_statement(pretty_print(stmt));
  EXPECT_TRUE(equal(stmt, again));
}

}  // namespace
}  // namespace quiver
