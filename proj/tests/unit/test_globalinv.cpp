#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "liftkit/globalinv.hpp"

using namespace liftkit;
using testing::pt;

TEST_SUITE("globalinv") {
  TEST_CASE("invert_at examples") {
    const auto sh = invert_at(resolve_map("shear3"), pt({9, 2}), pt({0, 0}));
    REQUIRE(sh.x);
    CHECK((*sh.x - pt({1, 2})).norm() < 1e-8);
    const auto id = invert_at(resolve_map("identity(2)"), pt({4, -7}), pt({1, 1}));
    REQUIRE(id.x);
    CHECK((*id.x - pt({4, -7})).norm() < 1e-10);
    const auto ex = invert_at(resolve_map("expmap"), pt({-1}), pt({0}));
    CHECK_FALSE(ex.x);
    CHECK_FALSE(ex.trace.verdict.completed());
  }

  TEST_CASE("invert then evaluate") {
    const MapHandle f = resolve_map("polar_exp");
    std::mt19937_64 rng(3);
    for (int k = 0; k < 20; ++k) {
      const Point y = testing::uniform_point(rng, 2, -3, 3);
      if (y.norm() < 0.1) continue;
      const auto r = invert_at(f, y, pt({0, 0}));
      REQUIRE(r.x);
      CHECK((f.eval(*r.x) - y).norm() <= 1e-9);
    }
  }

  TEST_CASE("fiber_enumerate examples") {
    const auto pk = fiber_enumerate(resolve_map("powk(2)"), pt({1, 0}), Region::box(pt({-2, -2}), pt({2, 2})), 64);
    REQUIRE(pk.preimages.size() == 2);
    CHECK((pk.preimages[0].x - pt({-1, 0})).norm() < 1e-9);
    CHECK((pk.preimages[1].x - pt({1, 0})).norm() < 1e-9);
    CHECK_FALSE(pk.disclaimer.empty());

    const auto id = fiber_enumerate(resolve_map("identity(2)"), pt({0.3, 0.4}), Region::box(pt({-1, -1}), pt({1, 1})), 16);
    REQUIRE(id.preimages.size() == 1);
    CHECK((id.preimages[0].x - pt({0.3, 0.4})).norm() < 1e-12);

    const auto sh = fiber_enumerate(resolve_map("shear3"), pt({5, -1}), Region::box(pt({-5, -5}), pt({5, 5})), 32);
    CHECK(sh.preimages.size() == 1);
    for (const auto& p : sh.preimages) CHECK(p.residual <= 1e-12);
  }

  TEST_CASE("sheet counts agree for powk") {
    for (int k = 2; k <= 4; ++k) {
      const MapHandle f = resolve_map("powk(" + std::to_string(k) + ")");
      const auto orbit = sheet_count(f, pt({1, 0}), Path::loop(pt({0, 0}), 1.0), pt({1, 0}));
      REQUIRE(orbit.monodromy);
      CHECK(orbit.monodromy->closed);
      CHECK(orbit.monodromy->orbit_size == k);
      const auto fiber = fiber_enumerate(f, pt({1, 0}), Region::box(pt({-2, -2}), pt({2, 2})), 128);
      CHECK(static_cast<int>(fiber.preimages.size()) == k);
    }
    const auto o2 = sheet_count(resolve_map("powk(2)"), pt({1, 0}), Path::loop(pt({0, 0}), 1.0), pt({1, 0}));
    REQUIRE(o2.preimages.size() == 2);
    CHECK((o2.preimages[1].x - pt({-1, 0})).norm() < 1e-8);
    CHECK(o2.monodromy->permutation == std::vector<int>{1, 0});
  }

  TEST_CASE("identity loop closes at once") {
    const auto r = sheet_count(resolve_map("identity(2)"), pt({1, 0}), Path::loop(pt({0, 0}), 1.0), pt({1, 0}));
    REQUIRE(r.monodromy);
    CHECK(r.monodromy->orbit_size == 1);
  }

  TEST_CASE("polar_exp translation") {
    const auto r = sheet_count(resolve_map("polar_exp"), pt({1, 0}), Path::loop(pt({0, 0}), 1.0), pt({0, 0}));
    REQUIRE(r.monodromy);
    CHECK_FALSE(r.monodromy->closed);
    CHECK(r.preimages.size() == 9);
    REQUIRE(r.monodromy->translation);
    CHECK(std::abs((*r.monodromy->translation)[0]) < 1e-6);
    CHECK(std::abs((*r.monodromy->translation)[1] - 2 * M_PI) < 1e-6);
  }

  TEST_CASE("quasi-isometry bounds") {
    const auto id = quasi_isometry_bounds(resolve_map("identity(2)"), Region::box(pt({-3, -3}), pt({3, 3})), 50);
    CHECK(id.alpha_hat == doctest::Approx(1.0));
    CHECK(id.beta_hat == doctest::Approx(1.0));

    const auto sh = quasi_isometry_bounds(resolve_map("shear3"), Region::box(pt({-1, -1}), pt({1, 1})), 2000);
    CHECK(std::abs(sh.beta_hat - 3.3027756377319946) < 0.02);
    CHECK(std::abs(sh.alpha_hat - 0.30277563773199465) < 0.01);
    CHECK(sh.alpha_hat <= sh.beta_hat);

    const auto ex = quasi_isometry_bounds(resolve_map("expmap"), Region::box(pt({-3}), pt({3})), 400,
                                          Region::box(pt({std::exp(-1.0)}), pt({std::exp(1.0)})));
    REQUIRE(ex.alpha_k);
    CHECK(std::abs(*ex.alpha_k / std::exp(-1.0) - 1) < 0.05);
    CHECK(ex.n_in_k > 0);
    CHECK(ex.n_in_k < ex.n_samples);
  }
}
