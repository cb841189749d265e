#include <cmath>
#include <random>

#include "doctest.h"
#include "liftkit/errors.hpp"
#include "liftkit/expr.hpp"

using namespace liftkit;
using Eigen::VectorXd;

namespace {
VectorXd v(std::initializer_list<double> xs) {
  VectorXd p(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) p(i++) = x;
  return p;
}

// Random expression over x, y built from smooth pieces.
std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
  std::uniform_real_distribution<double> c(-2, 2);
  switch (pick(rng)) {
    case 0: return "x";
    case 1: return "y";
    case 2: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", c(rng));
      return std::string("(") + buf + ")";
    }
    case 3: return "(" + random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1) + ")";
    case 4: return "(" + random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1) + ")";
    case 5: return "(" + random_expr(rng, depth - 1) + " * " + random_expr(rng, depth - 1) + ")";
    case 6: return "sin(" + random_expr(rng, depth - 1) + ")";
    case 7: return "atan(" + random_expr(rng, depth - 1) + ")";
    case 8: return "(" + random_expr(rng, depth - 1) + ")^2";
    default: return "exp(" + random_expr(rng, depth - 1) + "/4)";
  }
}
}  // namespace

TEST_SUITE("exprlang") {
  TEST_CASE("parse examples") {
    const auto comps = expr::parse("(x + y^3, y)", {"x", "y"});
    CHECK(comps.size() == 2);
    try {
      expr::parse("x + ", {"x"});
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 4);
      CHECK_FALSE(e.expected().empty());
    }
    CHECK(expr::parse_scalar("2^3^2", {}).eval(VectorXd()) == 512.0);
    CHECK_THROWS_AS(expr::parse_scalar("foo + x", {"x"}), ParseError);
    CHECK_THROWS_AS(expr::parse_scalar("sin(x, x)", {"x"}), ParseError);
    CHECK_THROWS_AS(expr::parse_scalar("max(x)", {"x"}), ParseError);
  }

  TEST_CASE("unary minus binds to the atom") {
    CHECK(expr::parse_scalar("-x^2", {"x"}).eval(v({3})) == 9.0);
    CHECK(expr::parse_scalar("-(x^2)", {"x"}).eval(v({3})) == -9.0);
  }

  TEST_CASE("eval examples") {
    const auto comps = expr::parse("(x + y^3, y)", {"x", "y"});
    CHECK((expr::eval(comps, v({1, 2})) - v({9, 2})).norm() == 0.0);
    CHECK_THROWS_AS(expr::parse_scalar("log(x)", {"x"}).eval(v({-1})), EvalDomainError);
    CHECK_THROWS_AS(expr::parse_scalar("sqrt(x)", {"x"}).eval(v({-1})), EvalDomainError);
    CHECK_THROWS_AS(expr::parse_scalar("1/x", {"x"}).eval(v({0})), EvalDomainError);
    CHECK(std::abs(expr::parse_scalar("atan(x)", {"x"}).eval(v({1})) - M_PI / 4) <= 1e-15);
    CHECK_THROWS_AS(expr::parse_scalar("x", {"x"}).eval(v({1, 2})), InputError);
  }

  TEST_CASE("evaluation-domain error carries the span") {
    try {
      expr::parse_scalar("1 + log(x)", {"x"}).eval(v({-2}));
      FAIL("expected an evaluation-domain error");
    } catch (const EvalDomainError& e) {
      CHECK(e.span().begin == 4);
      CHECK(e.span().end == 10);
    }
  }

  TEST_CASE("jacobian examples") {
    const auto j = expr::jacobian_ad(expr::parse("(x + y^3, y)", {"x", "y"}), v({0, 1}));
    Eigen::MatrixXd want(2, 2);
    want << 1, 3, 0, 1;
    CHECK((j - want).norm() == 0.0);
    CHECK((expr::jacobian_ad(expr::parse("(x, y, z)", {"x", "y", "z"}), v({1, 2, 3})) -
           Eigen::MatrixXd::Identity(3, 3))
              .norm() == 0.0);
    CHECK(expr::jacobian_ad(expr::parse("exp(x)", {"x"}), v({0}))(0, 0) == 1.0);
  }

  TEST_CASE("AD agrees with central differences on random expressions") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1, 1);
    int checked = 0;
    while (checked < 1000) {
      const std::string src = random_expr(rng, 4);
      const auto ast = expr::parse_scalar(src, {"x", "y"});
      const VectorXd x = v({u(rng), u(rng)});
      Eigen::MatrixXd ad;
      try {
        ad = expr::jacobian_ad({ast}, x);
      } catch (const EvalDomainError&) {
        continue;
      }
      for (int j = 0; j < 2; ++j) {
        const double h = 1e-5;
        VectorXd xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        const double fd = (ast.eval(xp) - ast.eval(xm)) / (2 * h);
        CHECK_MESSAGE(std::abs(ad(0, j) - fd) <= 1e-6 * (1 + std::abs(ad(0, j))), src);
      }
      ++checked;
    }
  }

  TEST_CASE("pretty-print round trip") {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 300; ++k) {
      const std::string src = random_expr(rng, 4);
      const auto a = expr::parse_scalar(src, {"x", "y"});
      const std::string printed = a.to_string();
      const auto b = expr::parse_scalar(printed, {"x", "y"});
      CHECK(b.to_string() == printed);
      const VectorXd x = v({0.3, -0.7});
      CHECK(a.eval(x) == b.eval(x));
    }
  }

  TEST_CASE("free names") {
    const auto names = expr::free_names("sin(y) + x*q + pi");
    REQUIRE(names.size() == 3);
    CHECK(names[0] == "x");
    CHECK(names[1] == "y");
    CHECK(names[2] == "q");
  }
}
