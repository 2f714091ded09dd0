#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hkmc/bounds.hpp"
#include "oracles.hpp"

using namespace hkmc;

namespace {
ChainInputs inputs() {
  ChainInputs in;
  in.c_psi = 1;
  in.beta1 = 2;
  in.beta2 = 2;
  in.c_F = 1.2;
  in.alpha_F = 0.5;
  in.c = 1.346;
  in.gamma = 0.297;
  return in;
}
}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("power bound function") {
  const auto F = BoundFunction::power(2.0, 0.5, 1.0, 0.0, 1.0, 0.5);
  CHECK(F(0.5, 0, 1) == doctest::Approx(2.0 / std::sqrt(0.5) * std::log(4.0)));
  CHECK(F.scaled(3.0)(0.5, 0, 1) == doctest::Approx(3.0 * F(0.5, 0, 1)));
  CHECK(F.inf_over(Space::line(), Region::open_interval(-1, 1), 0.5) == doctest::Approx(F(0.5, 0, 0)));
}

TEST_CASE("volume bound function on the line") {
  const auto sf = ScaleFunction::power(2.0);
  const auto F = BoundFunction::volume(1.0, Space::line(), sf, 2.0, 0.5);
  // nu(B(x, sqrt t)) = 2 sqrt t on the line
  CHECK(F(0.25, 0, 3) == doctest::Approx(1.0));
}

TEST_CASE("doubling of F in time") {
  const auto sf = ScaleFunction::power(2.0);
  std::vector<DbTuple> grid;
  for (double t : {0.01, 0.1, 0.5, 1.0})
    for (double x : {0.0, 0.5}) grid.push_back({t, x, 0.0});
  CHECK(db_psi_verify(BoundFunction::power(1.0, 0.5, 0, 0, 1.0, 0.5), sf, Space::line(), grid).pass);
  CHECK_FALSE(db_psi_verify(BoundFunction::power(1.0, 0.5, 0, 0, 1.0, 0.25), sf, Space::line(), grid).pass);
}

TEST_CASE("displayed c_eps_2 with a unit c_eps_1") {
  auto in = inputs();
  in.alpha_F = 1.0;
  const auto L = derive_constants(in, DeriveMode::chain, {{"c_eps_1", 1.0}});
  CHECK(L.get("c_eps_2") == doctest::Approx(oracle::k32OverE3).epsilon(1e-9));
}

TEST_CASE("chain ledger is complete, displayed-only is not") {
  const auto chain = derive_constants(inputs(), DeriveMode::chain);
  CHECK(chain.complete());
  CHECK(chain.complete_global());
  CHECK(chain.get("gamma_eps") == doctest::Approx(0.25 * 0.297 / 5));
  CHECK(chain.get("gamma_prime_delta") == doctest::Approx(0.297 / 40));
  CHECK(chain.get("c_prime") >= chain.get("c_eps@1/4"));
  const auto disp = derive_constants(inputs(), DeriveMode::displayed);
  CHECK_FALSE(disp.complete());
  CHECK_THROWS_AS(disp.get("c_eps"), ConfigError);
}

TEST_CASE("overrides and provenance") {
  const auto L = derive_constants(inputs(), DeriveMode::displayed,
                                  {{"c_eps_1", 0.1}, {"c_eps_3", 2.0}, {"c_eps_4", 0.2}});
  CHECK(L.complete());
  bool seen = false;
  for (const auto& e : L.entries)
    if (e.name == "c_eps_3") {
      seen = true;
      CHECK(e.provenance == Provenance::override_);
    }
  CHECK(seen);
  std::ostringstream os;
  write_ledger_csv(os, L);
  CHECK(os.str().find("user-override") != std::string::npos);
}

TEST_CASE("constants grow when eps shrinks") {
  auto in = inputs();
  in.epsilon = 0.5;
  const double big = derive_constants(in, DeriveMode::chain).get("c_eps");
  in.epsilon = 0.1;
  CHECK(derive_constants(in, DeriveMode::chain).get("c_eps") > big);
}

TEST_CASE("invalid inputs are rejected") {
  auto in = inputs();
  in.c_psi = 0.5;
  CHECK_THROWS_AS(derive_constants(in, DeriveMode::chain), ConfigError);
  in = inputs();
  in.epsilon = 1.0;
  CHECK_THROWS_AS(derive_constants(in, DeriveMode::chain), ConfigError);
}

TEST_CASE("three-case bound") {
  const auto sf = ScaleFunction::power(2.0);
  const auto F = BoundFunction::power(1.01 / std::sqrt(2 * M_PI), 0.5, 0, 0, 1.0, 0.5);
  const auto L = derive_constants(inputs(), DeriveMode::chain);
  const auto line = Space::line();
  const auto U = Region::open_interval(-1, 1);
  const double ce = L.get("c_eps"), ge = L.get("gamma_eps");
  CHECK(localized_rhs(L, F, sf, line, 2.0, U, 0.1, 0.0, 0.0) == doctest::Approx(ce * F(0.1, 0, 0)));
  CHECK(localized_rhs(L, F, sf, line, 2.0, U, 0.1, 0.5, 0.1) ==
        doctest::Approx(ce * F(0.1, 0.5, 0.1) * std::exp(-phi_eval(sf, ge * 0.4, 0.1))));
  CHECK(localized_rhs(L, F, sf, line, 2.0, U, 0.1, 3.0, 0.1) ==
        doctest::Approx(ce * F(0.2, 0, 0) * std::exp(-phi_eval(sf, ge * 2.0, 0.1))));
  CHECK(localized_rhs(L, F, sf, line, 2.0, U, 5.0, 3.0, 0.1) == doctest::Approx(ce * F(4.0, 0, 0)));
  CHECK_THROWS_AS(localized_rhs(L, F, sf, line, 2.0, U, 0.1, 0.0, 0.8), ConfigError);
  // decays in distance
  double prev = kInf;
  for (double x = 0.0; x < 0.99; x += 0.1) {
    const double v = localized_rhs(L, F, sf, line, 2.0, U, 0.05, x, 0.0);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(global_rhs(L, F, sf, line, kInf, 0.1, 0, 0) == doctest::Approx(L.get("c_prime") * F(0.1, 0, 0)));
}

TEST_CASE("exit chain steps") {
  const auto sf = ScaleFunction::power(2.0);
  auto k = exit_constants_none();
  k.epsilon = 0.3;
  k.delta = 0.5;
  CHECK(exit_chain_constants(ChainStep::c2_to_3, k, sf).epsilon == doctest::Approx(0.35));
  k = exit_constants_none();
  k.epsilon = 0.7;
  const auto k4 = exit_chain_constants(ChainStep::c3_to_4, k, sf);
  CHECK(k4.epsilon == doctest::Approx(1 - 0.7 / M_E));
  CHECK(k4.delta == 1.0);

  k = exit_constants_none();
  k.epsilon = 0.125;
  k.delta = 1.0;
  const auto k5 = exit_chain_constants(ChainStep::c4_to_5, k, sf);
  CHECK(1.0 / k5.gamma == doctest::Approx(oracle::kInvLog8).epsilon(1e-7));
  CHECK(k5.c == doctest::Approx(8.0));
  const auto k6 = exit_chain_constants(ChainStep::c5_to_6, k5, sf);
  CHECK(k6.c == k5.c);
  CHECK(k6.gamma == k5.gamma);

  const auto k7 = exit_chain_constants(ChainStep::c6_to_7, k6, sf);
  CHECK(k7.gamma == doctest::Approx(0.25));
  CHECK(k7.c == doctest::Approx(8.0));
  auto k7e = k7;
  k7e.epsilon = 0.25;
  CHECK(exit_chain_constants(ChainStep::c7_to_2, k7e, sf).delta == doctest::Approx(0.25 / std::log(32.0)));

  k = exit_constants_none();
  k.epsilon = 0.2;
  k.delta = 1.0;
  const auto k2 = exit_chain_constants(ChainStep::c1p_to_2, k, sf);
  CHECK(k2.epsilon == doctest::Approx(0.4));
  CHECK(k2.delta == doctest::Approx(0.25));
  CHECK_THROWS_AS(exit_chain_constants(ChainStep::c1p_to_2, k, sf, false), ConfigError);
}

TEST_CASE("mean exit criterion") {
  const auto sf = ScaleFunction::power(2.0);
  const auto m = mean_exit_criterion(2.0, 1.0, 2.0, sf, 1.0);
  CHECK(m.threshold == doctest::Approx(0.25));
  CHECK(m.bound == doctest::Approx(1.0 - 1.0 / 32.0));
  CHECK_THROWS_AS(mean_exit_criterion(0.5, 1.0, 2.0, sf, 1.0), ConfigError);
}

TEST_CASE("region grid") {
  const auto g = region_grid(Space::line(), Region::open_interval(-1, 1));
  CHECK(g.size() >= 1000);
  for (double x : g) CHECK((x > -1 && x < 1));
  CHECK(region_grid(Space::gasket(2), Region::whole()).size() == 15);
}

}
