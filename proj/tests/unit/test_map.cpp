#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "liftkit/errors.hpp"
#include "liftkit/map.hpp"

using namespace liftkit;
using testing::pt;

TEST_SUITE("mapdef") {
  TEST_CASE("resolve_map examples") {
    const MapHandle s = resolve_map("shear3");
    CHECK(s.jacobian_mode() == JacobianMode::Analytic);
    Mat want(2, 2);
    want << 1, 3 * 4.0, 0, 1;
    CHECK((jacobian_at(s, pt({5, 2})) - want).norm() == 0.0);

    const MapHandle e = resolve_map("(x*x, x+y)");
    CHECK(e.jacobian_mode() == JacobianMode::Automatic);
    CHECK(e.domain().dim() == 2);
    CHECK(e.codomain().dim() == 2);

    try {
      resolve_map("powk(0)");
      FAIL("expected an input error");
    } catch (const InputError& err) {
      CHECK(std::string(err.what()).find("nonzero integer") != std::string::npos);
    }
    CHECK_THROWS_AS(resolve_map("nosuchmap"), InputError);
    CHECK_THROWS_AS(resolve_map("(x +"), ParseError);
    CHECK_THROWS_AS(resolve_map("identity(-1)"), InputError);
    MapSpec bad;
    bad.text = "(x, y)";
    bad.domain = Space::euclidean(3);
    CHECK_THROWS_AS(resolve_map(bad), InputError);
  }

  TEST_CASE("finite differences only on request") {
    MapSpec spec;
    spec.text = "(x*x, x+y)";
    spec.finite_difference = true;
    CHECK(resolve_map(spec).jacobian_mode() == JacobianMode::FiniteDifference);
  }

  TEST_CASE("registry-style analytic jacobian text") {
    MapSpec spec;
    spec.text = "(x + y^3, y)";
    spec.jacobian = "1, 3*y^2; 0, 1";
    const MapHandle h = resolve_map(spec);
    CHECK(h.jacobian_mode() == JacobianMode::Analytic);
    CHECK(jacobian_at(h, pt({0, 2}))(0, 1) == 12.0);
  }

  TEST_CASE("jacobian_at examples") {
    Mat want(2, 2);
    want << 1, 3, 0, 1;
    CHECK((jacobian_at(resolve_map("shear3"), pt({0, 1})) - want).norm() == 0.0);
    CHECK((jacobian_at(resolve_map("identity(3)"), pt({4, 5, 6})) - Mat::Identity(3, 3)).norm() == 0.0);
    CHECK(jacobian_at(resolve_map("expmap"), pt({0}))(0, 0) == 1.0);
    CHECK_THROWS_AS(jacobian_at(resolve_map("logmap"), pt({-1})), DomainError);
  }

  TEST_CASE("local_solve examples") {
    const auto r = local_solve(resolve_map("shear3"), pt({9, 2}), pt({0, 0}));
    CHECK((r.x - pt({1, 2})).norm() <= 1e-10);
    CHECK(r.residual <= 1e-10);
    CHECK(r.sigma_min > 0.0);

    const auto id = local_solve(resolve_map("identity(2)"), pt({3, -4}), pt({10, 10}));
    CHECK((id.x - pt({3, -4})).norm() <= 1e-12);

    // Section y^3 + y = 2 of cubic_implicit at x = 0: the y-map y -> y^3 + y.
    const auto c = local_solve(resolve_map("y^3 + y"), pt({2}), pt({0}));
    CHECK(std::abs(c.x(0) - 1.0) <= 1e-10);
    const MapHandle cubic = resolve_map("cubic_implicit");
    CHECK(cubic.eval(pt({2, 1}))(0) == 0.0);
  }

  TEST_CASE("local_solve errors") {
    CHECK_THROWS_AS(local_solve(resolve_map("inclusion"), pt({1, 0}), pt({0})), InputError);
    CHECK_THROWS_AS(local_solve(resolve_map("(x^2, y)"), pt({1, 0}), pt({0, 0})), SingularityError);
    SolveOptions o;
    o.max_iter = 2;
    CHECK_THROWS_AS(local_solve(resolve_map("expmap"), pt({1e6}), pt({-30}), o), ConvergenceError);
    CHECK_THROWS_AS(local_solve(resolve_map("logmap"), pt({0}), pt({-1})), DomainError);
  }

  TEST_CASE("closed-form inverses") {
    std::mt19937_64 rng(5);
    const MapHandle sh = resolve_map("shear3");
    for (int k = 0; k < 200; ++k) {
      const Point x = testing::uniform_point(rng, 2, -2, 2);
      const auto r = local_solve(sh, sh.eval(x), x + testing::uniform_point(rng, 2, -0.1, 0.1));
      CHECK((r.x - x).norm() <= 1e-9);
    }
    const MapHandle ex = resolve_map("expmap");
    for (int k = 0; k < 200; ++k) {
      const Point x = testing::uniform_point(rng, 1, -3, 3);
      const auto r = local_solve(ex, ex.eval(x), x + testing::uniform_point(rng, 1, -0.5, 0.5));
      CHECK(std::abs(r.x(0) - x(0)) <= 1e-9);
    }
  }

  TEST_CASE("analytic and finite-difference Jacobians agree on every built-in") {
    std::mt19937_64 rng(17);
    for (const std::string name : {"identity(2)", "shear3", "shear3_inv", "expmap", "logmap", "polar_exp",
                                   "powk(2)", "powk(3)", "powk(-2)", "arctan", "inclusion", "cubic_implicit"}) {
      const MapHandle f = resolve_map(name);
      const MapHandle fd = f.with_finite_difference();
      int n = 0;
      while (n < 1000) {
        Point x = testing::uniform_point(rng, f.domain().dim(), -2, 2);
        if (!f.domain().contains(x)) continue;
        ++n;
        const Mat a = jacobian_at(f, x);
        const Mat b = jacobian_at(fd, x);
        CHECK_MESSAGE((a - b).norm() <= 1e-5 * std::max(1.0, a.norm()), name);
      }
    }
  }

  TEST_CASE("builtin names and inverses") {
    CHECK(is_builtin("powk(3)"));
    CHECK_FALSE(is_builtin("(x, y)"));
    CHECK(builtin_inverse(resolve_map("shear3"))->name() == "shear3_inv");
    CHECK(builtin_inverse(resolve_map("expmap"))->name() == "logmap");
    CHECK_FALSE(builtin_inverse(resolve_map("polar_exp")).has_value());
    CHECK(builtin_names().size() >= 10);
  }

  TEST_CASE("annulus domain of powk") {
    const MapHandle p = resolve_map("powk(2)");
    CHECK(p.domain().contains(pt({1, 0})));
    CHECK_FALSE(p.domain().contains(pt({0.1, 0})));
    CHECK_FALSE(p.domain().contains(pt({3, 0})));
    CHECK_THROWS_AS(p.eval(pt({0, 0})), DomainError);
  }
}
