#include <doctest.h>

#include "hkmc/reference.hpp"
#include "oracles.hpp"

using namespace hkmc::reference;

TEST_SUITE("reference") {

TEST_CASE("exit series") {
  for (const auto& row : oracle::kExitBy) CHECK(exit_prob_series(row[0]) == doctest::Approx(row[1]).epsilon(2e-7));
}

TEST_CASE("capped mean series") {
  CHECK(capped_mean_series(1.0) == doctest::Approx(oracle::kCappedMeanAt1).epsilon(1e-6));
  CHECK(capped_mean_series(0.5) == doctest::Approx(oracle::kCappedMeanAtHalf).epsilon(1e-6));
  CHECK(capped_mean_series(60.0) == doctest::Approx(oracle::kMeanExit).epsilon(1e-6));
}

TEST_CASE("Dirichlet kernel") {
  CHECK(dirichlet_kernel(0.1, 0, 0, -1, 1) == doctest::Approx(oracle::kDirichlet_01_0_0).epsilon(1e-10));
  CHECK(dirichlet_kernel(0.3, 0.2, -0.5, -1, 1) == doctest::Approx(oracle::kDirichlet_03_02_m05).epsilon(1e-10));
  CHECK(dirichlet_cell_average(0.1, 0, 0, 2.0 / 1024, -1, 1) ==
        doctest::Approx(oracle::kDirichletCell_01_first).epsilon(1e-8));
  CHECK(dirichlet_cell_average(0.1, 0, -0.1, 0.1, -1, 1) * 0.2 == doctest::Approx(oracle::kPartProb_01).epsilon(1e-9));
  CHECK(dirichlet_kernel(0.1, 0.3, -1, -1, 1) == doctest::Approx(0.0));
}

TEST_CASE("Gaussian") {
  CHECK(gaussian_interval(1.0, 0, -1, 1) == doctest::Approx(oracle::kGaussAbsLt1).epsilon(1e-7));
  const double ts[3] = {0.1, 0.5, 1.0}, xs[2] = {0, 2};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(gaussian_interval(ts[j], xs[i], -0.5, 0.5) == doctest::Approx(oracle::kGaussHalf[i][j]).epsilon(1e-4));
}

}
