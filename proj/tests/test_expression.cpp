#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "poincare/expression.hpp"
#include "poincare/jet.hpp"
#include "support/expression_corpus.hpp"

using namespace poincare;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("documented parse examples", "[expr]") {
  CHECK_THAT(evaluate(parse_expression("sin(pi*x)*sin(pi*y)"), 0.5, 0.5), WithinAbs(1.0, 1e-15));
  CHECK(evaluate(parse_expression("x*y"), 0.0, 0.7) == 0.0);
  try {
    parse_expression("sin(x");
    FAIL("no error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 1);
    CHECK(e.col() == 6);
    CHECK(e.expected() == ")");
    CHECK(e.code() == ErrorCode::SyntaxError);
  }
}

TEST_CASE("corpus evaluates like hand-written code", "[expr]") {
  const auto corpus = testing::expression_corpus();
  REQUIRE(corpus.size() >= 30);
  for (const auto& entry : corpus) {
    INFO(entry.text);
    const auto e = parse_expression(entry.text);
    for (double x : {-0.3, 0.25, 0.9})
      for (double y : {0.2, 0.7, 1.4}) {
        const double want = entry.value(x, y);
        CHECK_THAT(evaluate(e, x, y), WithinAbs(want, 1e-14 * (1 + std::abs(want))));
      }
  }
}

TEST_CASE("parse print parse is a fixed point", "[expr]") {
  for (const auto& entry : testing::expression_corpus()) {
    INFO(entry.text);
    const auto a = parse_expression(entry.text);
    const auto text = print(a);
    const auto b = parse_expression(text);
    CHECK(equal(a, b));
    CHECK(print(b) == text);
  }
}

TEST_CASE("precedence and associativity", "[expr]") {
  CHECK(print(parse_expression("1-2-3")) == "1-2-3");
  CHECK(evaluate(parse_expression("1-2-3"), 0, 0) == -4.0);
  CHECK(evaluate(parse_expression("8/4/2"), 0, 0) == 1.0);
  CHECK(evaluate(parse_expression("2+3*4"), 0, 0) == 14.0);
  CHECK(evaluate(parse_expression("-2*3"), 0, 0) == -6.0);
  CHECK(print(parse_expression("(1-2)-3")) == "1-2-3");
  CHECK(print(parse_expression("1-(2-3)")) == "1-(2-3)");
  CHECK(print(parse_expression("(x*y)*2")) == "x*y*2");
  CHECK(print(parse_expression("x*(y*2)")) == "x*(y*2)");
  CHECK(print(parse_expression("-(x+y)")) == "-(x+y)");
}

TEST_CASE("printed numbers keep every bit", "[expr]") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, 1.7976931348623157e308, std::numbers::pi}) {
    const auto e = parse_expression(print(expr::number(v)));
    CHECK(evaluate(e, 0, 0) == v);
  }
}

TEST_CASE("syntax errors carry positions", "[expr]") {
  struct Case {
    const char* src;
    int line, col;
    const char* expected;
  };
  for (const auto& c : {Case{"", 1, 1, "number, identifier or '('"}, Case{"1+", 1, 3, "number, identifier or '('"},
                        Case{"(x", 1, 3, ")"}, Case{"x y", 1, 3, "end of input"}, Case{"sin x", 1, 5, "("},
                        Case{"x*\n)", 2, 1, "number, identifier or '('"}, Case{"1e+", 1, 4, "digit"},
                        Case{"2 $ 3", 1, 3, "end of input"}}) {
    INFO(c.src);
    try {
      parse_expression(c.src);
      FAIL("no error");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == c.line);
      CHECK(e.col() == c.col);
      CHECK(e.expected() == c.expected);
    }
  }
}

TEST_CASE("unknown identifiers", "[expr]") {
  for (const char* src : {"z", "log(x)", "x + Pi", "sinx"}) {
    INFO(src);
    try {
      parse_expression(src);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownIdentifier);
    }
  }
}

TEST_CASE("division by zero is the only evaluation error", "[expr]") {
  const auto e = parse_expression("1/(x-y)");
  CHECK_THROWS_AS(evaluate(e, 0.5, 0.5), Error);
  CHECK_THAT(evaluate(e, 1.0, 0.5), WithinAbs(2.0, 0.0));
  CHECK(std::isnan(evaluate(parse_expression("sqrt(x)"), -1.0, 0.0)));
}

TEST_CASE("jet evaluation gives the gradient", "[expr]") {
  const auto e = parse_expression("sin(pi*x)*exp(y) + x*x*y");
  const double x = 0.3, y = 0.8, pi = std::numbers::pi;
  const auto j = evaluate(e, Jet<2>::variable(x, 0), Jet<2>::variable(y, 1));
  CHECK_THAT(j.v, WithinRel(std::sin(pi * x) * std::exp(y) + x * x * y, 1e-14));
  CHECK_THAT(j.g[0], WithinRel(pi * std::cos(pi * x) * std::exp(y) + 2 * x * y, 1e-14));
  CHECK_THAT(j.g[1], WithinRel(std::sin(pi * x) * std::exp(y) + x * x, 1e-14));
}

TEST_CASE("constant detection", "[expr]") {
  CHECK(is_constant(parse_expression("2*pi + sqrt(3)")));
  CHECK_FALSE(is_constant(parse_expression("1 + 0*x")));
}
