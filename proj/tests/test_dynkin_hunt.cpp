#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hkmc/dynkin_hunt.hpp"
#include "hkmc/reference.hpp"

using namespace hkmc;

TEST_SUITE("dynkin_hunt") {

TEST_CASE("single identity holds") {
  DhOptions opt;
  opt.n_paths = 4000;
  opt.dt = 1e-3;
  opt.seed = 31;
  opt.inner_m = 8;
  const auto m = ProcessModel::brownian_line(1.0, true);
  const auto res = verify_single_dh(m, Region::open_interval(-0.5, 0.5), Region::closed_interval(-0.2, 0.2), 0.0,
                                    {0.1, 0.3}, opt);
  REQUIRE(res.size() == 2);
  for (const auto& r : res) {
    CHECK(r.pass);
    CHECK(r.part.estimate <= r.lhs.estimate);
    CHECK(std::fabs(r.lhs.estimate - reference::gaussian_interval(r.t, 0.0, -0.2, 0.2)) <= 4 * r.lhs.se);
  }
}

TEST_CASE("multiple identity ledger") {
  MdhOptions opt;
  opt.n_paths = 2000;
  opt.dt = 1e-3;
  opt.seed = 32;
  opt.inner_m = 8;
  opt.n_max = 20;
  const auto m = ProcessModel::brownian_line(1.0, true);
  const auto L = verify_multiple_dh(m, Region::open_interval(-1, 1), Region::open_interval(-0.5, 0.5),
                                    Region::closed_interval(-0.4, 0.4), 0.0, {0.5, 1.0}, opt);
  REQUIRE(L.size() == 2);
  for (const auto& l : L) {
    CHECK(l.pass);
    CHECK(l.monotone_p_sigma);
    CHECK(l.terms.size() == 20);
    CHECK(l.truncation <= 20);
    CHECK(l.remainder >= 0.0);
    for (std::size_t n = 1; n < l.terms.size(); ++n)
      CHECK(l.terms[n].p_sigma.estimate <= l.terms[n - 1].p_sigma.estimate);
  }
  std::ostringstream os;
  write_mdh_csv(os, L[0]);
  CHECK(os.str().rfind("n,e_n,se_n,p_sigma_n_le_t", 0) == 0);
}

TEST_CASE("n_max limit") {
  MdhOptions opt;
  opt.n_paths = 10;
  opt.n_max = 64;
  CHECK_THROWS_AS(verify_multiple_dh(ProcessModel::brownian_line(), Region::open_interval(-1, 1),
                                     Region::open_interval(-0.5, 0.5), Region::open_interval(-0.5, 0.5), 0.0, {0.1},
                                     opt),
                  ConfigError);
}

}
