#include <doctest.h>

#include <cmath>

#include "hkmc/scale.hpp"
#include "oracles.hpp"

using namespace hkmc;

TEST_SUITE("scale") {

TEST_CASE("phi matches frozen values") {
  CHECK(phi_eval(ScaleFunction::power(3.0), 1.0, 1.0) == doctest::Approx(oracle::kPhiBeta3_R1_t1).epsilon(1e-7));
  CHECK(phi_eval(ScaleFunction::power(2.5), 2.0, 0.7) == doctest::Approx(oracle::kPhiBeta25_R2_t07).epsilon(1e-9));
  // beta = 2: R^2 / (4t)
  CHECK(phi_eval(ScaleFunction::power(2.0), 3.0, 0.5) == doctest::Approx(4.5).epsilon(1e-10));
}

TEST_CASE("numeric phi agrees with closed form on a wide grid") {
  for (double beta : {1.5, 2.0, 2.3219280948873622, 3.0, 5.0}) {
    const auto sf = ScaleFunction::power(beta);
    for (double R : {1e-2, 0.3, 1.0, 7.0, 1e2})
      for (double t : {1e-2, 0.2, 1.0, 40.0, 1e2}) {
        const double c = phi_power_closed_form(beta, R, t);
        CHECK(std::fabs(phi_eval(sf, R, t) - c) <= 1e-6 * c);
      }
  }
}

TEST_CASE("psi and its inverse") {
  const auto pw = ScaleFunction::piecewise({1.0}, {2.0, 3.0}, 1.0, 2.0, 3.0);
  CHECK(pw.psi(0.5) == doctest::Approx(0.25));
  CHECK(pw.psi(2.0) == doctest::Approx(8.0));
  const auto tab = ScaleFunction::tabulated({0.1, 1.0, 10.0}, {0.01, 1.0, 1000.0}, 2.0, 2.0, 3.0);
  for (const auto* sf : {&pw, &tab})
    for (double r : {1e-3, 0.05, 0.9, 1.0, 3.0, 50.0}) CHECK(sf->psi_inv(sf->psi(r)) == doctest::Approx(r).epsilon(1e-10));
  CHECK(tab.psi(1.0) == doctest::Approx(1.0));
  CHECK(tab.psi(20.0) == doctest::Approx(8000.0));
}

TEST_CASE("psi is increasing") {
  const auto tab = ScaleFunction::tabulated({0.1, 0.5, 1.0, 4.0, 10.0}, {0.01, 0.2, 1.0, 30.0, 900.0}, 4.0, 2.0, 3.0);
  double prev = 0.0;
  for (double r = 0.01; r < 30.0; r *= 1.05) {
    const double v = tab.psi(r);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("doubling check accepts declared constants and rejects false ones") {
  std::vector<std::pair<double, double>> grid;
  for (double r = 0.01; r < 100; r *= 1.7)
    for (double R = r; R < 100; R *= 1.9) grid.push_back({r, R});
  CHECK(psi_doubling_verify(ScaleFunction::piecewise({1.0}, {2.0, 3.0}, 1.0, 2.0, 3.0), grid).pass);
  CHECK_FALSE(psi_doubling_verify(ScaleFunction::piecewise({1.0}, {2.0, 3.0}, 1.0, 2.0, 2.5), grid).pass);
}

TEST_CASE("sandwich, homogeneity and monotonicity") {
  std::vector<std::pair<double, double>> grid;
  for (double R = 0.01; R < 100; R *= 2.3)
    for (double t = 0.01; t < 100; t *= 2.9) grid.push_back({R, t});
  for (const auto& sf : {ScaleFunction::power(2.0), ScaleFunction::piecewise({1.0}, {2.0, 3.0}, 1.0, 2.0, 3.0)}) {
    const auto s = phi_sandwich_check(sf, grid);
    CHECK(s.pass);
    CHECK(s.violations == 0);
    for (const auto& [R, t] : grid) {
      CHECK(phi_eval(sf, 1.1 * R, t) >= phi_eval(sf, R, t));
      CHECK(phi_eval(sf, R, 1.1 * t) <= phi_eval(sf, R, t));
      CHECK(phi_lower_bound(sf, R, t) <= phi_eval(sf, R, t) * (1 + 1e-9));
      CHECK(phi_eval(sf, R, t) <= phi_upper_bound(sf, R, t) * (1 + 1e-9));
    }
  }
}

TEST_CASE("lower prefactor") {
  CHECK(phi_lower_prefactor(ScaleFunction::power(2.0)) == doctest::Approx(0.25));
  CHECK(phi_lower_prefactor(ScaleFunction::piecewise({1.0}, {2.0, 3.0}, 2.0, 2.0, 3.0)) == doctest::Approx(0.125));
}

}
