#include <doctest.h>

#include "hkmc/config.hpp"

using namespace hkmc;
using nlohmann::json;

TEST_SUITE("config") {

TEST_CASE("typed lookups with dotted paths") {
  ConfigReader c(json::parse(R"({"estimator": {"n_paths": 1000, "dt": 0.001, "times": [0.1, 0.2]},
                                 "geometry": {"U": {"kind": "open_interval", "a": -1, "b": 1}}})"));
  CHECK(c.count("estimator.n_paths") == 1000);
  CHECK(c.number("estimator.dt") == 0.001);
  CHECK(c.numbers("estimator.times").size() == 2);
  CHECK(c.number("estimator.missing", 3.0) == 3.0);
  const auto U = c.region("geometry.U");
  CHECK(U.kind == RegionKind::open_interval);
  CHECK(c.ok());
}

TEST_CASE("every problem is reported with its path") {
  ConfigReader c(json::parse(R"({"estimator": {"n_paths": -5, "dt": "fast"},
                                 "model": {"kind": "levy_flight"}})"));
  c.count("estimator.n_paths");
  c.number("estimator.dt");
  c.number("geometry.R");
  c.model();
  CHECK_FALSE(c.ok());
  try {
    c.check();
    FAIL("check() should throw");
  } catch (const ConfigIssues& e) {
    CHECK(e.issues().size() == 4);
    const std::string all = e.what();
    for (const char* p : {"estimator.n_paths", "estimator.dt", "geometry.R", "model.kind"})
      CHECK(all.find(p) != std::string::npos);
  }
}

TEST_CASE("models, scales and bounds") {
  ConfigReader c(json::parse(R"({
    "model": {"kind": "brownian_killed", "a": -1, "b": 1, "bridge": true},
    "m2": {"kind": "gasket_walk", "level": 3},
    "scale_function": {"kind": "piecewise", "breakpoints": [1], "exponents": [2, 3], "c_psi": 1, "beta1": 2, "beta2": 3},
    "bound_function": {"kind": "power", "c3": 1, "a1": 0.5, "a2": 0, "a3": 0, "c_F": 1, "alpha_F": 0.5}})"));
  const auto m = c.model();
  CHECK(m.kind() == ModelKind::brownian_killed);
  CHECK(m.bridge());
  CHECK(c.model("m2").kind() == ModelKind::gasket_walk);
  const auto sf = c.scale();
  CHECK(sf.beta2() == 3.0);
  const auto F = c.bound("bound_function", m.space(), sf);
  CHECK(F.alpha_F() == 0.5);
  CHECK(c.ok());
}

TEST_CASE("grid times") {
  ConfigReader c(json::object());
  c.require_grid_times("estimator.times", {0.1, 0.25}, 1e-3);
  CHECK(c.ok());
  c.require_grid_times("estimator.times", {0.1, 0.2505}, 1e-3);
  CHECK_FALSE(c.ok());
}

TEST_CASE("region kinds") {
  ConfigReader c(json::parse(R"({"a": "whole", "b": {"kind": "ball", "center": 1, "radius": 0.5},
                                 "c": {"kind": "vertex_set", "vertices": [3, 1, 2]}, "d": {"kind": "blob"}})"));
  CHECK(c.region("a").kind == RegionKind::whole);
  CHECK(c.region("b").radius == 0.5);
  CHECK(c.region("c").vertices == std::vector<std::size_t>{1, 2, 3});
  CHECK_FALSE(c.optional_region("missing").has_value());
  c.region("d");
  CHECK_FALSE(c.ok());
}

}
