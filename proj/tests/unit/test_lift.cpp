#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "liftkit/errors.hpp"
#include "liftkit/lift.hpp"
#include "liftkit/linalg.hpp"

using namespace liftkit;
using testing::pt;

TEST_SUITE("lift") {
  TEST_CASE("options validation") {
    LiftOptions o;
    CHECK_NOTHROW(o.validate());
    o.step_min = 1.0;
    CHECK_THROWS_AS(o.validate(), InputError);
    LiftOptions c;
    c.corrector_tol = 0;
    CHECK_THROWS_AS(c.validate(), InputError);
  }

  TEST_CASE("identity lift follows the path") {
    const Path p = Path::polyline({pt({0, 0}), pt({1, 2}), pt({-1, 3})});
    const auto tr = lift_path(resolve_map("identity(2)"), p, p.eval(p.t0()));
    REQUIRE(tr.verdict.completed());
    for (const auto& n : tr.nodes) {
      const double t = p.t0() + n.t * (p.t1() - p.t0());
      CHECK((n.x - p.eval(t)).norm() <= 1e-10);
    }
    CHECK(analyze_trace(tr, Space::euclidean(2)).alpha_hat == doctest::Approx(1.0));
  }

  TEST_CASE("shear3 segment lands on the explicit inverse") {
    const auto tr = lift_path(resolve_map("shear3"), Path::segment(pt({0, 0}), pt({9, 2})), pt({0, 0}));
    REQUIRE(tr.verdict.completed());
    CHECK((tr.endpoint() - pt({1, 2})).norm() < 1e-8);
    for (std::size_t i = 1; i < tr.nodes.size(); ++i) CHECK(tr.nodes[i].t > tr.nodes[i - 1].t);
    for (const auto& n : tr.nodes) CHECK(n.residual <= 1e-10);
    CHECK(tr.nodes.back().t == 1.0);

    const auto an = analyze_trace(tr, Space::euclidean(2));
    for (std::size_t i = 1; i < an.tail_diameters.size(); ++i)
      CHECK(an.tail_diameters[i].diameter <= an.tail_diameters[i - 1].diameter + 1e-9);
    CHECK(an.tail_diameters.back().diameter < 0.5);
  }

  TEST_CASE("expmap lift toward 0 fails") {
    const auto tr = lift_path(resolve_map("expmap"), Path::segment(pt({1}), pt({0})), pt({0}));
    CHECK_FALSE(tr.verdict.completed());
    CHECK(tr.verdict.b >= 0.999);
    CHECK(tr.endpoint()[0] <= -5);
    CHECK(analyze_trace(tr, Space::euclidean(1)).alpha_hat <= std::exp(-5.0));
  }

  TEST_CASE("unique lifting across step sizes") {
    const MapHandle f = resolve_map("shear3");
    const Path p = Path::segment(pt({0, 0}), pt({9, 2}));
    LiftOptions a, b;
    b.step_init = 1e-3;
    b.step_max = 0.03;
    const auto ta = lift_path(f, p, pt({0, 0}), a);
    const auto tb = lift_path(f, p, pt({0, 0}), b);
    REQUIRE(ta.verdict.completed());
    REQUIRE(tb.verdict.completed());
    // The lift of a segment under shear3 is (x - y^3, y) along y = 2t: compare both to it.
    for (const auto* tr : {&ta, &tb})
      for (const auto& n : tr->nodes) {
        const double y = 2 * n.t;
        CHECK((n.x - pt({9 * n.t - y * y * y, y})).norm() < 1e-9);
      }
  }

  TEST_CASE("reverse consistency") {
    const MapHandle f = resolve_map("polar_exp");
    const Path p = Path::polyline({pt({1, 0}), pt({0.5, 2}), pt({-3, 1})});
    const auto fwd = lift_path(f, p, pt({0, 0}));
    REQUIRE(fwd.verdict.completed());
    const auto back = lift_path(f, reverse_path(p), fwd.endpoint());
    REQUIRE(back.verdict.completed());
    CHECK(back.endpoint().norm() < 1e-9);
  }

  TEST_CASE("length transfer bounds") {
    const MapHandle f = resolve_map("shear3");
    const Path p = Path::segment(pt({0, 0}), pt({9, 2}));
    const auto tr = lift_path(f, p, pt({0, 0}));
    double lo = 1e300, hi = 0;
    for (const auto& n : tr.nodes) {
      const auto s = singular_summary(jacobian_at(f, n.x));
      lo = std::min(lo, s.sigma_min);
      hi = std::max(hi, s.sigma_max);
    }
    const double lp = path_length(p).value;
    CHECK(tr.lift_length >= lp / hi * 0.95);
    CHECK(tr.lift_length <= lp / lo * 1.05);
  }

  TEST_CASE("domain exit") {
    // z^2 reaches 9 only at |z| = 3, outside the annulus |z| < 2.
    const auto tr = lift_path(resolve_map("powk(2)"), Path::segment(pt({1, 0}), pt({9, 0})), pt({1, 0}));
    CHECK(tr.verdict.kind == VerdictKind::FailedDomainExit);
    CHECK(tr.verdict.b > 0.0);
  }

  TEST_CASE("start residual is an input error") {
    CHECK_THROWS_AS(lift_path(resolve_map("shear3"), Path::segment(pt({0, 0}), pt({1, 1})), pt({1, 1})),
                    InputError);
    CHECK_THROWS_AS(lift_path(resolve_map("inclusion"), Path::segment(pt({0, 0}), pt({1, 1})), pt({0})),
                    InputError);
  }

  TEST_CASE("weighted alpha") {
    const auto tr = lift_path(resolve_map("expmap"), Path::segment(pt({1}), pt({std::exp(-3.0)})), pt({0}));
    REQUIRE(tr.verdict.completed());
    const auto an = analyze_trace(tr, Space::euclidean(1), Weight::affine(1, 1), pt({0}));
    REQUIRE(an.weighted_alpha_hat);
    CHECK(std::abs(*an.weighted_alpha_hat - 0.19914827347145578) < 1e-6);
  }
}
