#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "liftkit/errors.hpp"
#include "liftkit/hadamard.hpp"
#include "liftkit/linalg.hpp"

using namespace liftkit;
using testing::pt;

namespace {
void check_profile_invariants(const HadamardProfile& p) {
  for (std::size_t j = 1; j < p.infima.size(); ++j) {
    CHECK(p.infima[j] <= p.infima[j - 1]);
    CHECK(p.partial_integrals[j] >= p.partial_integrals[j - 1]);
  }
}
}  // namespace

TEST_SUITE("hadamard") {
  TEST_CASE("default radii") {
    const auto r = default_radii(pt({0, 0}));
    REQUIRE(r.size() == 24);
    CHECK(r.back() == doctest::Approx(100));
    CHECK(r.front() == doctest::Approx(0.1));
  }

  TEST_CASE("identity profile is divergent") {
    const auto p = ball_infimum_profile(resolve_map("identity(2)"), pt({0, 0}));
    check_profile_invariants(p);
    for (double r : p.infima) CHECK(r == doctest::Approx(1.0));
    const auto rep = classify_divergence(p);
    CHECK(rep.cls == DivergenceClass::Divergent);
    CHECK(rep.caveat.empty());
  }

  TEST_CASE("expmap profile is exponential and convergent") {
    const auto p = ball_infimum_profile(resolve_map("expmap"), pt({0}));
    check_profile_invariants(p);
    for (std::size_t j = 0; j < p.radii.size(); ++j) {
      // e^{-t} underflows for the largest radii; compare in log space there.
      const double expect = -p.radii[j];
      CHECK(std::abs(std::log(p.infima[j]) - expect) <= std::max(0.05, 0.05 * p.radii[j]));
    }
    const auto rep = classify_divergence(p);
    CHECK(rep.cls == DivergenceClass::Convergent);
    CHECK(rep.best_model == "exponential");
    CHECK(rep.caveat.rfind("sufficient condition only", 0) == 0);
  }

  TEST_CASE("shear3 profile is never divergent") {
    const MapHandle f = resolve_map("shear3");
    const auto p = ball_infimum_profile(f, pt({0, 0}));
    check_profile_invariants(p);
    // det = 1 and |J| ~ 3t^2, so sigma_min ~ 1/(3t^2) at the ball edge.
    for (std::size_t j = p.radii.size() - 4; j < p.radii.size(); ++j) {
      const double t = p.radii[j];
      const double oracle = singular_summary(jacobian_at(f, pt({0, t}))).sigma_min;
      CHECK(p.infima[j] <= oracle * 1.05);
      CHECK(p.infima[j] >= oracle * 0.5);
    }
    const auto rep = classify_divergence(p);
    CHECK(rep.cls != DivergenceClass::Divergent);
    CHECK_FALSE(rep.caveat.empty());
  }

  TEST_CASE("classifier preconditions") {
    auto p = ball_infimum_profile(resolve_map("identity(2)"), pt({0, 0}), {1, 2, 3});
    CHECK_THROWS_AS(classify_divergence(p), InputError);
    std::vector<double> narrow;
    for (int i = 0; i < 10; ++i) narrow.push_back(1.0 + i);
    p = ball_infimum_profile(resolve_map("identity(2)"), pt({0, 0}), narrow);
    CHECK_THROWS_AS(classify_divergence(p), InputError);
  }

  TEST_CASE("validate_weight") {
    const auto aff = validate_weight(Weight::affine(1, 1));
    CHECK(aff.ok);
    CHECK(aff.divergence == Divergence::Divergent);
    CHECK_FALSE(validate_weight(Weight::power(1, 1, 2)).ok);
    CHECK_FALSE(validate_weight(Weight::expression("exp(t)")).ok);
    CHECK_FALSE(validate_weight(Weight::expression("1 - t")).ok);
    CHECK_FALSE(validate_weight(Weight::constant(0)).ok);
    CHECK(validate_weight(Weight::expression("2 + 3*t")).ok);
    CHECK(validate_weight(Weight::power(1, 2, 0.5)).ok);
  }

  TEST_CASE("weight_certificate examples") {
    const auto id = weight_certificate(resolve_map("identity(2)"), pt({0, 0}), Weight::constant(1),
                                       Region::box(pt({-5, -5}), pt({5, 5})), 200);
    CHECK(id.pass);
    CHECK(id.worst_margin >= -1e-12);
    CHECK(id.hadamard_holds_on_region);

    const auto ex = weight_certificate(resolve_map("expmap"), pt({0}), Weight::affine(1, 1), {pt({-3})});
    CHECK_FALSE(ex.pass);
    CHECK(std::abs(ex.worst_margin + 1 - 0.19914827347145578) < 1e-9);

    const auto sh = weight_certificate(resolve_map("shear3"), pt({0, 0}), Weight::affine(1, 1),
                                       Region::box(pt({-10, -10}), pt({10, 10})), 400);
    CHECK_FALSE(sh.pass);

    CHECK_THROWS_AS(weight_certificate(resolve_map("expmap"), pt({0}), Weight::power(1, 1, 2), {pt({0})}),
                    PreconditionError);
  }

  TEST_CASE("weight from a divergent profile round-trips") {
    const MapHandle f = resolve_map("identity(2)");
    const auto p = ball_infimum_profile(f, pt({0.5, -0.5}));
    const auto rep = classify_divergence(p);
    REQUIRE(rep.cls == DivergenceClass::Divergent);
    const Weight w = weight_from_profile(p, rep.cls);
    std::vector<Point> xs;
    for (const auto& s : p.samples) xs.push_back(s.x);
    const auto cert = weight_certificate(f, p.x0, w, xs);
    CHECK(cert.pass);
    CHECK(cert.worst_margin >= -1e-9);
  }
}
