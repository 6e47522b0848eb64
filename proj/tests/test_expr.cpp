#include "doctest.h"
#include "tfta/expr.hpp"
#include "tfta/parser.hpp"

using namespace tfta;

TEST_CASE("events_of reads all atoms") {
  CHECK(events_of(parse_expr("A < B")) == std::set<EventId>{"A", "B"});
  CHECK(events_of(Expr::make_true()).empty());
  CHECK(events_of(parse_expr("!C & (A < B)")) == std::set<EventId>{"A", "B", "C"});
}

TEST_CASE("is_part_of on conjunction chains") {
  CHECK(is_part_of("B", parse_expr("A < B")));
  CHECK(is_part_of("A", parse_expr("A & B")));
  CHECK_FALSE(is_part_of("C", parse_expr("A < B")));
  CHECK(is_part_of("B", parse_expr("A < B < C")));
  CHECK(is_part_of("A", parse_expr("A = B = C")));
  CHECK_THROWS_AS((void)is_part_of("A", parse_expr("A | B")), std::invalid_argument);
  CHECK_THROWS_AS((void)is_part_of("A", parse_expr("A & (B < C)")), std::invalid_argument);
}

TEST_CASE("canonical ordering and flattening") {
  ExprPtr e = parse_expr("C & A & B");
  CHECK(to_string(canonicalize(e)) == "A & B & C");
  CHECK(to_string(canonicalize(parse_expr("B = C = A"))) == "A = B = C");
  CHECK(to_string(canonicalize(parse_expr("B | false | A"))) == "A | B");
  CHECK(to_string(canonicalize(parse_expr("A & true"))) == "A");
  CHECK(to_string(canonicalize(parse_expr("A & false"))) == "false");
  CHECK(to_string(canonicalize(parse_expr("!!A"))) == "A");
  CHECK(to_string(canonicalize(parse_expr("A = A"))) == "A");
}

TEST_CASE("negated conjunctions keep their scope") {
  // (!A & B) & C is not the same statement as !A & (B & C).
  ExprPtr nested = parse_expr("(!A & B) & C");
  ExprPtr flat = parse_expr("!A & (B & C)");
  CHECK_FALSE(equal(canonicalize(nested), canonicalize(flat)));
  // Binary & associates left, so the unparenthesized form nests.
  CHECK(equal(canonicalize(parse_expr("!A & B & C")), canonicalize(nested)));
}

TEST_CASE("print/parse round trip is a fixpoint") {
  const char* samples[] = {
      "A",
      "A & B | C",
      "A < (B | C)",
      "(A = B) < C",
      "!A & B",
      "(!A & B) & C",
      "!(A < B) & C",
      "A < B < C",
      "A < (B < C)",
      "C & (A & !B)",
      "true",
      "false",
  };
  for (const char* s : samples) {
    ExprPtr e = canonicalize(parse_expr(s));
    ExprPtr back = parse_expr(to_string(e));
    CHECK_MESSAGE(equal(e, back), "round trip failed for ", s, " printed as ", to_string(e));
  }
}
