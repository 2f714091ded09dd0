#include <doctest.h>

#include <cmath>

#include "hkmc/estimate.hpp"
#include "hkmc/parallel.hpp"
#include "hkmc/reference.hpp"
#include "oracles.hpp"

using namespace hkmc;

namespace {
Ensemble ens(std::uint64_t n, double dt, std::uint64_t seed) {
  Ensemble e;
  e.n_paths = n;
  e.dt = dt;
  e.seed = seed;
  return e;
}
bool within(const EstimateWithError& e, double target, double k = 4.0) {
  return std::fabs(e.estimate - target) <= k * e.se + 1e-12;
}
// for probabilities, where a rare event can leave se = 0
bool within_binomial(const EstimateWithError& e, double p, double k = 4.0) {
  return std::fabs(e.estimate - p) <= k * std::sqrt(p * (1 - p) / static_cast<double>(e.n)) + 1e-12;
}
}  // namespace

TEST_SUITE("estimate") {

TEST_CASE("transition probability against the Gaussian") {
  const auto m = ProcessModel::brownian_line();
  const std::vector<double> ts{0.1, 0.5, 1.0};
  const double xs[2] = {0.0, 2.0};
  for (int i = 0; i < 2; ++i) {
    const auto est = transition_prob_curve(m, xs[i], ts, Region::closed_interval(-0.5, 0.5), ens(20000, 0.01, 3));
    for (int j = 0; j < 3; ++j) {
      CHECK(within_binomial(est[j], oracle::kGaussHalf[i][j]));
      CHECK(est[j].n == 20000);
    }
  }
}

TEST_CASE("part probability below full, near the image-sum value") {
  const auto m = ProcessModel::brownian_line(1.0, true);
  const auto A = Region::open_interval(-0.1, 0.1);
  const auto part = part_transition_prob(m, 0.0, 0.1, Region::open_interval(-1, 1), A, ens(40000, 1e-3, 5));
  const auto full = transition_prob(m, 0.0, 0.1, A, ens(40000, 1e-3, 5));
  CHECK(part.estimate <= full.estimate);
  CHECK(within(part, oracle::kPartProb_01));
}

TEST_CASE("exit probability curve is a distribution function") {
  const auto m = ProcessModel::brownian_line(1.0, true);
  const std::vector<double> ts{0.25, 0.5, 1.0};
  const auto est = exit_prob_curve(m, 0.0, 1.0, ts, ens(20000, 1e-3, 8));
  for (std::size_t j = 0; j < ts.size(); ++j) CHECK(within(est[j], oracle::kExitBy[j + 2][1]));
  CHECK(est[0].estimate <= est[1].estimate);
  CHECK(est[1].estimate <= est[2].estimate);
}

TEST_CASE("mean exit times") {
  const auto m = ProcessModel::brownian_line(1.0, true);
  const auto capped = mean_exit_time(m, 0.0, 1.0, 0.5, 0.5, ens(20000, 1e-3, 12));
  CHECK(within(capped.value, oracle::kCappedMeanAtHalf));
  const auto full = mean_exit_time(m, 0.0, 1.0, std::nullopt, 8.0, ens(5000, 1e-3, 12));
  CHECK(full.censoring_ok);
  CHECK(within(full.value, oracle::kMeanExit));
}

TEST_CASE("Laplace transform brackets") {
  const auto m = ProcessModel::brownian_line(1.0, true);
  const auto L = laplace_exit(m, 0.0, 1.0, 1.0, 6.0, ens(10000, 1e-3, 13));
  CHECK(L.lower.estimate <= L.upper);
  CHECK(within(L.lower, oracle::kLaplaceAt1));
}

TEST_CASE("partition hierarchy") {
  const PartitionHierarchy h(Space::line(), Region::open_interval(-1, 1), 3);
  CHECK(h.cells(3) == 8);
  CHECK(h.cell_of(-0.99) == 0);
  CHECK(h.cell_of(0.0) == 4);
  CHECK(h.cell_of(1.5) == -1);
  CHECK(h.measure(3, 2) == doctest::Approx(0.25));
  CHECK(h.bounds(1, 1).first == doctest::Approx(0.0));
}

TEST_CASE("density telescopes exactly") {
  const auto m = ProcessModel::brownian_killed(-1, 1);
  const auto K =
      density_extract(m, 0.0, 0.1, Region::whole(), Region::open_interval(-1, 1), 6, ens(20000, 1e-3, 21));
  for (int l = 0; l < 6; ++l) {
    const auto a = K.level_counts(l), b = K.level_counts(l + 1);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[2 * i] + b[2 * i + 1]);
  }
  CHECK(K.level_counts(0)[0] == K.mass_count);
  // centre cell near the Dirichlet kernel
  const auto cells = K.level(3);
  const auto& c = cells[4];
  const double ref = reference::dirichlet_cell_average(0.1, 0.0, c.left, c.right, -1, 1);
  CHECK(std::fabs(c.density - ref) <= 4 * c.se);
}

TEST_CASE("results do not depend on thread count") {
  const auto m = ProcessModel::brownian_line(1.0, true);
  const auto e = ens(3000, 1e-3, 77);
  set_thread_count(1);
  const auto a = exit_prob_curve(m, 0.0, 0.5, {0.1, 0.2}, e);
  const auto ka = density_extract(m, 0.0, 0.1, Region::whole(), Region::open_interval(-1, 1), 5, e);
  set_thread_count(8);
  const auto b = exit_prob_curve(m, 0.0, 0.5, {0.1, 0.2}, e);
  const auto kb = density_extract(m, 0.0, 0.1, Region::whole(), Region::open_interval(-1, 1), 5, e);
  set_thread_count(0);
  for (int j = 0; j < 2; ++j) {
    CHECK(a[j].estimate == b[j].estimate);
    CHECK(a[j].se == b[j].se);
  }
  CHECK(ka.counts == kb.counts);
}

}
