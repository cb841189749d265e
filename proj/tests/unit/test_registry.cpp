#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "liftkit/errors.hpp"
#include "liftkit/registry.hpp"

using namespace liftkit;
using testing::pt;

namespace {
const char* kSample = R"(# sample
[map twist]
components = (x + y^3, y)
vars = x, y

[map halfplane]
components = (log(x))
vars = x
predicate = x

[weight lin]
family = affine
a = 1
b = 2

[weight grow]
expression = 1 + t

[path diag]
kind = segment
a = 0, 0
b = 9, 2

[path ring]
kind = loop
center = 0, 0
radius = 1

[implicit kepler]
map = y + 0.5*sin(y) - x
vars = x, y
x_dim = 1
w = 0
)";
}  // namespace

TEST_SUITE("registry") {
  TEST_CASE("parse numbers and points") {
    CHECK(parse_numbers("9, 2").size() == 2);
    CHECK(parse_point("1,-2.5e1", 2)[1] == -25.0);
    CHECK_THROWS_AS(parse_point("1,2", 3), InputError);
    CHECK_THROWS_AS(parse_numbers("1,x"), InputError);
  }

  TEST_CASE("path specs") {
    const Path s = parse_path_spec("seg:1,0");
    CHECK(s.dim() == 1);
    CHECK(s.eval(1.0)[0] == 0.0);
    const Path s2 = parse_path_spec("seg:0,0;9,2");
    CHECK((s2.eval(1.0) - pt({9, 2})).norm() == 0.0);
    const Path poly = parse_path_spec("poly:0,0;1,0;1,1");
    CHECK((poly.eval(poly.t1()) - pt({1, 1})).norm() < 1e-15);
    const Path loop = parse_path_spec("loop:0,0,2,3");
    CHECK((loop.eval(0.0) - pt({2, 0})).norm() < 1e-15);
    const Path ex = parse_path_spec("expr:(t, t^2)@0,2");
    CHECK((ex.eval(2.0) - pt({2, 4})).norm() < 1e-15);
    CHECK_THROWS_AS(parse_path_spec("spiral:1"), InputError);
  }

  TEST_CASE("lookups") {
    const Registry r = Registry::parse(kSample);
    CHECK(r.names("map") == std::vector<std::string>{"twist", "halfplane"});
    const MapHandle f = r.map("twist");
    CHECK((f.eval(pt({1, 2})) - pt({9, 2})).norm() == 0.0);
    CHECK_THROWS_AS(r.map("halfplane").eval(pt({-1})), DomainError);
    CHECK(r.map("shear3").name() == "shear3");
    CHECK(r.weight("lin")(3.0) == 7.0);
    CHECK(r.weight("grow")(3.0) == 4.0);
    CHECK(r.weight("power:1,1,2")(3.0) == 10.0);
    CHECK((r.path("diag").eval(1.0) - pt({9, 2})).norm() == 0.0);
    CHECK((r.path("ring").eval(0.25) - pt({0, 1})).norm() < 1e-15);
    const auto k = r.implicit("kepler");
    CHECK(k.x_dim == 1);
    CHECK(k.y_dim == 1);
    CHECK(r.validate().empty());
  }

  TEST_CASE("errors carry locations") {
    CHECK_THROWS_AS(Registry::parse("[map a]\ncomponents = x\n[map a]\ncomponents = y\n"), InputError);
    CHECK_THROWS_AS(Registry::parse("[map a]\ncomponents = x\ncomponents = y\n"), InputError);
    CHECK_THROWS_AS(Registry::parse("[planet a]\n"), InputError);
    CHECK_THROWS_AS(Registry::parse("key = 1\n"), InputError);
    const Registry bad = Registry::parse("[map broken]\ncomponents = (x +\n[weight w]\nfamily = cubic\n");
    const auto problems = bad.validate();
    REQUIRE(problems.size() == 2);
    CHECK(problems[0].find("<registry>:1: [map broken]") != std::string::npos);
  }

  TEST_CASE("unknown names") {
    const Registry r;
    CHECK_THROWS_AS(r.map("nosuchmap"), InputError);
    CHECK_THROWS_AS(r.implicit("nothing"), InputError);
  }
}
