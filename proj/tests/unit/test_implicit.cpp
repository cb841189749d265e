#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "liftkit/errors.hpp"
#include "liftkit/implicit.hpp"
#include "liftkit/lift.hpp"

using namespace liftkit;
using testing::pt;

namespace {
ImplicitProblem scalar_problem(const std::string& text) {
  MapSpec s;
  s.text = text;
  s.vars = {"x", "y"};
  return ImplicitProblem::make(resolve_map(s), 1, pt({0}));
}

// Root of y + 0.5 sin y = 1 by bisection, computed before the build.
constexpr double kKeplerRoot = 0.68403665667782954;

void check_residuals(const ImplicitTrace& tr) {
  for (const auto& n : tr.nodes) CHECK(n.residual <= 1e-8);
}
}  // namespace

TEST_SUITE("implicit") {
  TEST_CASE("cubic endpoint") {
    const auto prob = ImplicitProblem::make(resolve_map("cubic_implicit"), 1, pt({0}));
    const auto tr = davidenko_lift(prob, Path::segment(pt({0}), pt({2})), pt({0}));
    REQUIRE(tr.verdict.completed());
    CHECK(std::abs(tr.endpoint()[0] - 1) < 1e-8);
    check_residuals(tr);
  }

  TEST_CASE("identity section") {
    const auto prob = scalar_problem("y - x");
    const auto tr = davidenko_lift(prob, Path::segment(pt({0}), pt({5})), pt({0}));
    REQUIRE(tr.verdict.completed());
    for (const auto& n : tr.nodes) CHECK(std::abs(n.y[0] - n.x[0]) < 1e-9);
  }

  TEST_CASE("kepler endpoint") {
    const auto prob = scalar_problem("y + 0.5*sin(y) - x");
    const auto tr = davidenko_lift(prob, Path::segment(pt({0}), pt({1})), pt({0}));
    REQUIRE(tr.verdict.completed());
    CHECK(std::abs(tr.endpoint()[0] - kKeplerRoot) < 1e-8);
    check_residuals(tr);
  }

  TEST_CASE("implicit_eval forward and reverse") {
    const auto prob = ImplicitProblem::make(resolve_map("cubic_implicit"), 1, pt({0}));
    const auto fwd = implicit_eval(prob, pt({2}), pt({0}), pt({0}));
    REQUIRE(fwd.y);
    CHECK(std::abs((*fwd.y)[0] - 1) < 1e-8);
    const auto back = implicit_eval(prob, pt({0}), pt({2}), pt({1}));
    REQUIRE(back.y);
    CHECK(std::abs((*back.y)[0]) < 1e-8);
  }

  TEST_CASE("fold gives a singular verdict") {
    const auto prob = scalar_problem("y^3 - y - x");
    const double fold_x = -2.0 / (3.0 * std::sqrt(3.0));
    const auto r = implicit_eval(prob, pt({-1}), pt({0}), pt({1}));
    CHECK_FALSE(r.y);
    CHECK(r.trace.verdict.kind == VerdictKind::FailedSingular);
    CHECK(r.trace.verdict.d_minus < 1e-6);
    REQUIRE(r.trace.fold_x);
    CHECK(std::abs((*r.trace.fold_x)[0] - fold_x) < 1e-8);
    CHECK(std::abs((*r.trace.fold_y)[0] - 1 / std::sqrt(3.0)) < 1e-6);
    check_residuals(r.trace);
  }

  TEST_CASE("start residual") {
    const auto prob = ImplicitProblem::make(resolve_map("cubic_implicit"), 1, pt({0}));
    CHECK_THROWS_AS(davidenko_lift(prob, Path::segment(pt({0}), pt({1})), pt({1})), InputError);
  }

  TEST_CASE("oracle equivalence with a direct solve") {
    const auto prob = scalar_problem("y + 0.5*sin(y) - x");
    const auto r = implicit_eval(prob, pt({3}), pt({0}), pt({0}));
    REQUIRE(r.y);
    const auto& nodes = r.trace.nodes;
    const Point seed = nodes[nodes.size() - 2].y;
    MapSpec s;
    s.text = "y + 0.5*sin(y) - 3";
    s.vars = {"y"};
    const auto direct = local_solve(resolve_map(s), pt({0}), seed);
    CHECK(std::abs(direct.x[0] - (*r.y)[0]) < 1e-8);
  }

  TEST_CASE("weight bound is logged and holds") {
    const auto prob = ImplicitProblem::make(resolve_map("cubic_implicit"), 1, pt({0}));
    // monitor = 1 / (3y^2 + 1) <= 1 <= omega.
    const auto tr = davidenko_lift(prob, Path::segment(pt({0}), pt({5})), pt({0}), Weight::affine(1, 1));
    REQUIRE(tr.verdict.completed());
    CHECK(tr.bound_status == BoundStatus::Holds);
    for (const auto& n : tr.nodes) {
      REQUIRE(n.weight_integral);
      CHECK(*n.weight_integral <= 5 * n.t + 1e-6);
    }
  }

  TEST_CASE("agreement with lifting the projection") {
    const auto prob = scalar_problem("y + 0.5*sin(y) - x");
    const auto tr = davidenko_lift(prob, Path::segment(pt({0}), pt({2})), pt({0}));
    REQUIRE(tr.verdict.completed());
    const MapHandle g = projection_lift_map(prob);
    const auto lt = lift_path(g, Path::segment(pt({0, 0}), pt({2, 0})), pt({0, 0}));
    REQUIRE(lt.verdict.completed());
    CHECK(std::abs(lt.endpoint()[1] - tr.endpoint()[0]) < 1e-7);
  }

  TEST_CASE("branch probe") {
    const std::vector<Point> grid{pt({0.5}), pt({1.0}), pt({1.5}), pt({2.0})};
    const Region seeds = Region::box(pt({-3}), pt({3}));
    const auto cubic = branch_probe(ImplicitProblem::make(resolve_map("cubic_implicit"), 1, pt({0})), grid, seeds, 16);
    CHECK(cubic.count == 1);
    CHECK(branch_probe(scalar_problem("y^2 - x"), grid, seeds, 16).count == 2);
    CHECK(branch_probe(scalar_problem("y - x"), grid, seeds, 16).count == 1);
    CHECK_FALSE(cubic.label.empty());
  }
}
