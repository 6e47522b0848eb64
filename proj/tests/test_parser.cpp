#include <random>

#include "doctest.h"
#include "tfta/analysis.hpp"

using namespace tfta;

TEST_CASE("expression parsing with precedence") {
  CHECK(to_string(parse_expr("A < (B | C)")) == "A < (B | C)");
  CHECK(to_string(parse_expr("A = B = C")) == "A = B = C");
  CHECK(to_string(parse_expr("!(A < B) & C")) == "C & !(A < B)");
  // NOT > SAND > PAND > AND > OR
  CHECK(equal(parse_expr("A | B & C"), parse_expr("A | (B & C)")));
  CHECK(equal(parse_expr("A & B < C"), parse_expr("A & (B < C)")));
  CHECK(equal(parse_expr("A < B = C"), parse_expr("A < (B = C)")));
  CHECK(equal(parse_expr("!A = B"), parse_expr("(!A) = B")));
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_expr("A < (B"), ParseError);
  CHECK_THROWS_AS(parse_expr("A &"), ParseError);
  CHECK_THROWS_AS(parse_expr("A B"), ParseError);
  try {
    parse_expr("A < (B | )");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() >= 1);
    CHECK(e.col() > 1);
  }
}

TEST_CASE("model file parsing") {
  const char* text =
      "# comment\n"
      "event E lambda=1e-9\n"
      "event U lambda=5e-6\n"
      "event A lambda=1e-6\n"
      "event B lambda=1e-6\n"
      "gate seq PAND U A\n"
      "gate via_a OR A E\n"
      "gate via_b OR B E seq\n"
      "gate top_x AND via_a via_b\n"
      "top top_x\n"
      "config mission_time=400 grid_points=4001\n";
  Model m = parse_model(text);
  CHECK(m.tree.basic_events.size() == 4);
  CHECK(m.config.mission_time == 400.0);
  ExprPtr e = expr_from_tree(m.tree);
  CHECK(equal(e, parse_expr("(A | E) & (B | E | (U < A))")));

  SUBCASE("round trip") {
    Model again = parse_model(print_model(m));
    CHECK(equal(expr_from_tree(again.tree), e));
    CHECK(again.config.mission_time == m.config.mission_time);
    CHECK(again.config.grid_points == m.config.grid_points);
  }
}

TEST_CASE("single basic event as top") {
  Model m = parse_model("event A lambda=1e-6\ntop A\n");
  CHECK(to_string(expr_from_tree(m.tree)) == "A");
}

TEST_CASE("model validation errors") {
  CHECK_THROWS_AS(parse_model("event A lambda=1e-6\ngate g OR A A\ntop g\ntop g\n"),
                  ValidationError);
  CHECK_THROWS_AS(parse_model("event A lambda=-1\ntop A\n"), ValidationError);
  CHECK_THROWS_AS(parse_model("event A lambda=1e-6\ngate g OR A h\ntop g\n"), ValidationError);
  // a gate referencing itself is a cycle
  CHECK_THROWS_AS(parse_model("event A lambda=1e-6\ngate g OR A g\ntop g\n"), std::exception);
  CHECK_THROWS_AS(parse_model("event A lambda=1e-6\ntop A\nconfig grid_points=1\n"),
                  ValidationError);
}

TEST_CASE("monotonicity checks") {
  CHECK(check_monotone(parse_expr("!A & B")).ok);
  CHECK(check_monotone(parse_expr("(!A & B) | C")).ok);
  CHECK_FALSE(check_monotone(parse_expr("!A | B")).ok);
  CHECK_FALSE(check_monotone(parse_expr("!A < !B")).ok);
  CHECK_FALSE(check_monotone(parse_expr("!A = B")).ok);
  CHECK_FALSE(check_monotone(parse_expr("!A")).ok);
  CHECK(check_monotone(parse_expr("!(A < B) & C")).ok);
}

TEST_CASE("fuzzed inputs never crash, only error") {
  std::mt19937_64 rng(7);
  const std::string alphabet = "AB C()<=&|!truefals0123.";
  for (int i = 0; i < 3000; ++i) {
    std::string s;
    int len = 1 + int(rng() % 24);
    for (int j = 0; j < len; ++j) s += alphabet[rng() % alphabet.size()];
    try {
      (void)parse_expr(s);
    } catch (const ParseError&) {
    }
  }
  CHECK(true);
}
