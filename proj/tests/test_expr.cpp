#include <catch2/catch_amalgamated.hpp>

#include "vikit/expr.hpp"

using namespace vikit;

namespace {

double ev(const std::string& src, int dim, const Point& p) {
  return Expression::parse(src, dim).eval(p);
}

}  // namespace

TEST_CASE("operator precedence") {
  CHECK(ev("x^2*y", 2, {2.0, 3.0}) == 12.0);
  CHECK(ev("2*x^2", 1, {3.0}) == 18.0);
  CHECK(ev("(2*x)^2", 1, {3.0}) == 36.0);
  CHECK(ev("-x^2", 1, {2.0}) == -4.0);
  CHECK(ev("2 - 3 - 4", 1, {0.0}) == -5.0);
  CHECK(ev("2 - (3 - 4)", 1, {0.0}) == 3.0);
  CHECK(ev("12/4/3", 1, {0.0}) == 1.0);
  CHECK(ev("2*3 + 4*5", 1, {0.0}) == 26.0);
  CHECK(ev("1 + 2*3^2", 1, {0.0}) == 19.0);
}

TEST_CASE("chained exponents fold right-associatively") {
  CHECK(ev("x^2^3", 1, {2.0}) == 256.0);
  CHECK(ev("x^3^2", 1, {2.0}) == 512.0);
  CHECK(ev("x^-2", 1, {2.0}) == 0.25);
  CHECK(ev("x^0", 1, {0.0}) == 1.0);
}

TEST_CASE("dyadic inputs evaluate exactly") {
  CHECK(ev("x^2*y", 2, {0.5, 0.5}) == 0.125);
  CHECK(ev("x*y", 2, {0.5, 0.5}) == 0.25);
  CHECK(ev("abs(x) - 2", 1, {-0.75}) == -1.25);
}

TEST_CASE("variable aliases and indexed names") {
  CHECK(ev("x1 + 2*x2 + 4*x3", 3, {1.0, 1.0, 1.0}) == 7.0);
  CHECK(ev("x + y + z", 3, {1.0, 2.0, 4.0}) == 7.0);
  CHECK(ev("x", 1, {5.0}) == 5.0);
  CHECK_THROWS_AS(Expression::parse("y", 1), ParseError);
  CHECK_THROWS_AS(Expression::parse("x3", 2), ParseError);
  CHECK_THROWS_AS(Expression::parse("x0", 2), ParseError);
}

TEST_CASE("piecewise picks the first true branch") {
  const std::string src =
      "piecewise(x <= -0.5 -> -2*x - 1, x <= 0 -> 2*x + 1, else -> -2*x + 1)";
  CHECK(ev(src, 1, {-0.5}) == 0.0);
  CHECK(ev(src, 1, {-0.75}) == 0.5);
  CHECK(ev(src, 1, {-0.25}) == 0.5);
  CHECK(ev(src, 1, {0.0}) == 1.0);
  CHECK(ev(src, 1, {0.25}) == 0.5);
  CHECK(ev(src, 1, {1.0}) == -1.0);

  const std::string tie = "piecewise(x <= 0 -> 1, x >= 0 -> 2, else -> 3)";
  CHECK(ev(tie, 1, {0.0}) == 1.0);
  CHECK(ev(tie, 1, {1e-300}) == 2.0);
}

TEST_CASE("piecewise conditions support conjunction") {
  const std::string src = "piecewise(x > 0 and x < 1 -> 1, else -> 0)";
  CHECK(ev(src, 1, {0.5}) == 1.0);
  CHECK(ev(src, 1, {0.0}) == 0.0);
  CHECK(ev(src, 1, {1.0}) == 0.0);
  const std::string three = "piecewise(x >= 0 and y >= 0 and x < y -> 1, else -> 0)";
  CHECK(ev(three, 2, {1.0, 2.0}) == 1.0);
  CHECK(ev(three, 2, {2.0, 1.0}) == 0.0);
}

TEST_CASE("min max and abs take any arity above one") {
  CHECK(ev("min(3, x, 2)", 1, {5.0}) == 2.0);
  CHECK(ev("min(3, x, 2)", 1, {1.0}) == 1.0);
  CHECK(ev("max(abs(x), 1)", 1, {-3.0}) == 3.0);
  CHECK(ev("max(abs(x), 1)", 1, {0.5}) == 1.0);
  CHECK(ev("abs(0)", 1, {0.0}) == 0.0);
  CHECK(ev("min(1, 2) + max(1, 2, 3, 4)", 1, {0.0}) == 5.0);
}

TEST_CASE("parse errors carry one-based positions") {
  const auto pos = [](const std::string& src, int dim) -> std::size_t {
    try {
      Expression::parse(src, dim);
    } catch (const ParseError& e) {
      return e.position();
    }
    return 0;
  };
  CHECK(pos("x +", 1) == 4);       // runs off the end
  CHECK(pos("x $ y", 2) == 3);     // bad character
  CHECK(pos("1 + + 2", 1) == 5);   // operator where a value belongs
  CHECK(pos("w + 1", 1) == 1);     // unknown identifier
  CHECK(pos("(x + 1", 1) == 7);    // unbalanced paren
  CHECK_THROWS_AS(Expression::parse("", 1), ParseError);
}

TEST_CASE("exponents must be integer literals") {
  CHECK_THROWS_AS(Expression::parse("x^2.5", 1), ParseError);
  CHECK_THROWS_AS(Expression::parse("x^y", 2), ParseError);
  CHECK_THROWS_AS(Expression::parse("x^(2)", 1), ParseError);
}

TEST_CASE("piecewise requires an else branch") {
  CHECK_THROWS_WITH(Expression::parse("piecewise(x > 0 -> 1)", 1),
                    Catch::Matchers::ContainsSubstring("else"));
  CHECK_THROWS_AS(Expression::parse("piecewise(else -> 1, x > 0 -> 2)", 1), ParseError);
}

TEST_CASE("evaluation faults raise EvalError") {
  CHECK_THROWS_AS(ev("1/x", 1, {0.0}), EvalError);
  CHECK_THROWS_AS(ev("x^-2", 1, {0.0}), EvalError);
  CHECK_THROWS_AS(ev("(x^9)^9", 1, {1e4}), EvalError);  // overflows to infinity
  CHECK(ev("1/x", 1, {2.0}) == 0.5);
  CHECK_THROWS_AS(Expression::parse("x", 1).eval({1.0, 2.0}), DimensionError);
}

TEST_CASE("printing round-trips through the parser") {
  const std::vector<std::pair<std::string, int>> cases = {
      {"x^2*y", 2},
      {"piecewise(x <= -0.5 -> -2*x - 1, x <= 0 -> 2*x + 1, else -> -2*x + 1)", 1},
      {"piecewise(x <= 0.5 -> (-2*x)/3 + 1/3, else -> -2*x + 1)", 1},
      {"min(max(x, -1), 1) - abs(y)/2", 2},
      {"-(x + y)^3 + 0.125*x", 2},
      {"piecewise(x > 0 and y > 0 -> x*y, else -> 0 - x)", 2},
  };
  Rng rng(23);
  for (const auto& [src, dim] : cases) {
    const Expression e1 = Expression::parse(src, dim);
    const std::string printed = e1.str();
    const Expression e2 = Expression::parse(printed, dim);
    CHECK(e2.str() == printed);  // printing is a fixed point
    for (int i = 0; i < 50; ++i) {
      Point p(dim);
      for (int c = 0; c < dim; ++c) p[c] = rng.uniform(-2.0, 2.0);
      CHECK(e1.eval(p) == e2.eval(p));
    }
  }
}

TEST_CASE("numbers print in shortest round-trip form") {
  CHECK(Expression::parse("0.1", 1).str() == "0.1");
  CHECK(Expression::parse("1", 1).str() == "1");
  CHECK(Expression::parse("1e3", 1).str() == "1000");
  CHECK(Expression::parse("x^2", 1).str() == "x^2");
}
