#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "liftkit/map.hpp"
#include "liftkit/sderiv.hpp"

using namespace liftkit;
using testing::pt;

namespace {
// Singular values of [[1,3],[0,1]] from the eigenvalues of J J^T: (sqrt(13) -+ 3) / 2.
constexpr double kShearMin = 0.30277563773199465;
constexpr double kShearMax = 3.3027756377319946;
}  // namespace

TEST_SUITE("sderiv") {
  TEST_CASE("jacobian_svd examples") {
    auto id = scalar_derivatives(resolve_map("identity(2)"), pt({3, -1}));
    CHECK(id.d_minus == doctest::Approx(1.0));
    CHECK(id.d_plus == doctest::Approx(1.0));
    auto sh = scalar_derivatives(resolve_map("shear3"), pt({0, 1}));
    CHECK(std::abs(sh.d_minus - kShearMin) < 1e-12);
    CHECK(std::abs(sh.d_plus - kShearMax) < 1e-12);
    auto ex = scalar_derivatives(resolve_map("expmap"), pt({0}));
    CHECK(ex.d_minus == 1.0);
    CHECK(ex.d_plus == 1.0);
    auto inc = scalar_derivatives(resolve_map("inclusion"), pt({0}));
    CHECK(inc.d_minus == 1.0);
    auto proj = scalar_derivatives(resolve_map("(x)"), pt({0}));
    CHECK(proj.d_minus == 1.0);
    MapSpec s;
    s.text = "x";
    s.vars = {"x", "y"};
    CHECK(scalar_derivatives(resolve_map(s), pt({0, 0})).d_minus == 0.0);
  }

  TEST_CASE("shell sampling examples") {
    auto sh = scalar_derivatives(resolve_map("shear3"), pt({0, 1}), DerivMethod::ShellSampling);
    CHECK(std::abs(sh.d_minus / kShearMin - 1) < 0.02);
    CHECK(std::abs(sh.d_plus / kShearMax - 1) < 0.02);
    CHECK(sh.scale_report.size() == 7);
    CHECK(sh.d_minus <= sh.d_plus);
    auto ex = scalar_derivatives(resolve_map("expmap"), pt({0}), DerivMethod::ShellSampling);
    CHECK(std::abs(ex.d_minus - 1) < 0.02);
    CHECK(std::abs(ex.d_plus - 1) < 0.02);
  }

  TEST_CASE("shell radius shrinks near the domain boundary") {
    const MapHandle lg = resolve_map("logmap");
    auto e = scalar_derivatives(lg, pt({1e-3}), DerivMethod::ShellSampling);
    CHECK(std::abs(e.d_minus / 1e3 - 1) < 0.02);
    CHECK(e.scale_report.front().radius < 1e-3);
  }

  TEST_CASE("duality with explicit inverses") {
    std::mt19937_64 rng(41);
    for (int k = 0; k < 100; ++k) {
      const MapHandle f = resolve_map("shear3");
      const MapHandle g = *builtin_inverse(f);
      const Point x = testing::uniform_point(rng, 2, -2, 2);
      const double prod = scalar_derivatives(g, f.eval(x)).d_plus * scalar_derivatives(f, x).d_minus;
      CHECK(std::abs(prod - 1) <= 0.02);
    }
  }

  TEST_CASE("surjection constant examples") {
    const auto inc = surjection_constant(resolve_map("inclusion"), pt({0}));
    CHECK(inc.value < 1e-3);
    CHECK(inc.dimension_shortcut);
    const auto id = surjection_constant(resolve_map("identity(2)"), pt({0.5, 0.5}));
    CHECK(std::abs(id.value - 1) < 1e-6);
    const auto sh = surjection_constant(resolve_map("shear3"), pt({0, 1}));
    CHECK(std::abs(sh.value / kShearMin - 1) < 0.02);
    CHECK(sh.radii_used.size() == sh.ratios.size());
  }
}
