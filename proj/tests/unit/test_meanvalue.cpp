#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "liftkit/errors.hpp"
#include "liftkit/meanvalue.hpp"

using namespace liftkit;
using testing::pt;

TEST_SUITE("meanvalue") {
  TEST_CASE("split slack examples") {
    const Path q = reparam_arclength(Path::polyline({pt({0, 0}), pt({1, 2}), pt({3, 1})})).path;
    const double mid = 0.5 * (q.t0() + q.t1());
    CHECK(split_inequality_slack(resolve_map("identity(2)"), q, mid) >= -1e-12);

    // f(x) = x^2 on the arc-length segment [0, 1]: ratios 1 (whole), 0.5 and 1.5 (halves).
    const Path seg = Path::segment(pt({0}), pt({1}));
    CHECK(std::abs(split_inequality_slack(resolve_map("x^2"), seg, 0.5) - 0.5) < 1e-12);

    MapSpec c;
    c.text = "(1, 2)";
    c.vars = {"x", "y"};
    CHECK(split_inequality_slack(resolve_map(c), q, mid) == 0.0);
  }

  TEST_CASE("zero-length pieces are rejected") {
    const Path q = Path::polyline({pt({0, 0}), pt({0, 0}), pt({1, 1})});
    CHECK_THROWS_AS(split_inequality_slack(resolve_map("identity(2)"), q, 0.25), PreconditionError);
  }

  TEST_CASE("find_tau upper for x^2") {
    const auto cert = find_tau(resolve_map("x^2"), Path::segment(pt({0}), pt({1})));
    CHECK(2 * cert.tau >= 1 - 1e-6);
    CHECK(cert.satisfied);
    for (std::size_t i = 1; i < cert.ratios.size(); ++i) CHECK(cert.ratios[i] >= cert.ratios[i - 1] - 1e-12);
    for (std::size_t i = 1; i < cert.intervals.size(); ++i) {
      const auto [a, b] = cert.intervals[i];
      const auto [pa, pb] = cert.intervals[i - 1];
      CHECK(a >= pa);
      CHECK(b <= pb);
      CHECK(std::abs((b - a) - 0.5 * (pb - pa)) < 1e-15);
      CHECK(cert.tau >= a);
      CHECK(cert.tau <= b);
    }
  }

  TEST_CASE("find_tau lower for x^2 on [1, 2]") {
    LengthOptions o;
    o.rel_tol = 1e-7;
    const auto cert = find_tau(resolve_map("x^2"), Path::segment(pt({1}), pt({2})), Direction::Lower, 1e-9, o);
    CHECK(std::abs(cert.global_ratio - 3) < 1e-6);
    CHECK(2 * cert.tau <= 3 + 1e-6);
    CHECK(cert.satisfied);
  }

  TEST_CASE("identity certificate slack is zero") {
    const auto cert = find_tau(resolve_map("identity(2)"), Path::segment(pt({0, 0}), pt({2, 1})));
    CHECK(std::abs(cert.final_slack) < 1e-9);
  }

  TEST_CASE("length bounds") {
    const Path q = Path::polyline({pt({0, 0}), pt({1, 2}), pt({3, 1})});
    const auto id = length_bounds_report(resolve_map("identity(2)"), q);
    CHECK(std::abs(id.upper.lhs - id.upper.rhs) < 1e-9);
    CHECK(std::abs(id.lower.lhs - id.lower.rhs) < 1e-9);
    CHECK(id.upper.pass);
    CHECK(id.lower.pass);

    std::mt19937_64 rng(8);
    for (int k = 0; k < 20; ++k) {
      std::vector<Point> knots;
      for (int i = 0; i < 5; ++i) knots.push_back(testing::uniform_point(rng, 2, -2, 2));
      const auto r = length_bounds_report(resolve_map("shear3"), Path::polyline(knots));
      CHECK(r.upper.pass);
      CHECK(r.lower.pass);
    }

    MapSpec c;
    c.text = "(1, 2)";
    c.vars = {"x", "y"};
    const auto cr = length_bounds_report(resolve_map(c), q);
    CHECK(cr.upper.pass);
    CHECK(cr.upper.lhs == 0.0);
    CHECK(cr.lower.skipped);
  }
}
