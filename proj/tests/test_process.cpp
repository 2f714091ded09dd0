#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hkmc/process.hpp"
#include "oracles.hpp"

using namespace hkmc;

TEST_SUITE("process") {

TEST_CASE("grid helpers") {
  CHECK(grid_steps(1.0, 1e-3) == 1000);
  CHECK(grid_steps(0.1, 1e-3) == 100);
  CHECK(grid_steps(1.0005, 1e-3) == 1001);
  CHECK(grid_index(0.25, 1e-3) == 250);
  CHECK_THROWS_AS(grid_index(0.2505, 1e-3), ConfigError);
}

TEST_CASE("walker reproduces sample_path") {
  for (const auto& m : {ProcessModel::brownian_line(), ProcessModel::brownian_killed(-1, 1, 1.0, true),
                        ProcessModel::brownian_circle(4.0), ProcessModel::gasket_walk(4)}) {
    const double dt = m.kind() == ModelKind::gasket_walk ? m.step_time() : 1e-3;
    const double x0 = m.kind() == ModelKind::gasket_walk ? 5.0 : 0.1;
    const auto p = sample_path(m, x0, 0.5, dt, SeedId{11, 7});
    Walker w(m, x0, dt, SeedId{11, 7});
    for (std::uint64_t k = 1; k <= p.steps(); ++k) {
      w.advance();
      if (is_cemetery(p.states[k])) CHECK(is_cemetery(w.state()));
      else CHECK(w.state() == p.states[k]);
    }
    CHECK(w.zeta() == p.zeta);
  }
}

TEST_CASE("paths do not depend on horizon") {
  const auto m = ProcessModel::brownian_line();
  const auto a = sample_path(m, 0.0, 0.2, 1e-3, SeedId{5, 1});
  const auto b = sample_path(m, 0.0, 1.0, 1e-3, SeedId{5, 1});
  for (std::size_t k = 0; k < a.states.size(); ++k) CHECK(a.states[k] == b.states[k]);
}

TEST_CASE("killed model absorbs in the cemetery") {
  const auto m = ProcessModel::brownian_killed(-0.2, 0.2);
  int dead = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto p = sample_path(m, 0.0, 1.0, 1e-3, SeedId{9, i});
    if (p.zeta == kNever) continue;
    ++dead;
    for (std::uint64_t k = 0; k < p.zeta; ++k) CHECK(m.killing_set().contains(m.space(), p.states[k]));
    for (std::uint64_t k = p.zeta; k <= p.steps(); ++k) CHECK(is_cemetery(p.states[k]));
  }
  CHECK(dead > 190);
  CHECK_FALSE(m.conservative());
}

TEST_CASE("circle states stay in range") {
  const auto m = ProcessModel::brownian_circle(1.0);
  const auto p = sample_path(m, 0.5, 2.0, 1e-3, SeedId{1, 2});
  for (double x : p.states) CHECK((x >= 0.0 && x < 1.0));
}

TEST_CASE("gasket walk moves to neighbours") {
  const auto m = ProcessModel::gasket_walk(3);
  CHECK_THROWS_AS(m.check_dt(1e-3), ConfigError);
  const auto p = sample_path(m, 0.0, 2.0, m.step_time(), SeedId{3, 0});
  const auto& g = m.space().graph();
  for (std::size_t k = 1; k < p.states.size(); ++k)
    CHECK(g.distance(static_cast<std::size_t>(p.states[k - 1]), static_cast<std::size_t>(p.states[k])) ==
          doctest::Approx(g.edge_length()));
}

TEST_CASE("free motion marginal") {
  const auto m = ProcessModel::brownian_line();
  const int n = 40000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const auto p = sample_path(m, 0.0, 1.0, 0.01, SeedId{17, static_cast<std::uint64_t>(i)});
    hits += std::fabs(p.states.back()) < 1.0;
  }
  const double est = static_cast<double>(hits) / n, se = std::sqrt(est * (1 - est) / n);
  CHECK(std::fabs(est - oracle::kGaussAbsLt1) < 4 * se);
}

TEST_CASE("crossing probability of the bridge") {
  const auto line = Space::line();
  const auto U = Region::open_interval(-1, 1);
  // both endpoints on the barrier: the bridge crosses surely
  CHECK(crossing_probability(line, U, 0.999999, 0.999999, 1.0) == doctest::Approx(1.0).epsilon(1e-4));
  // one-sided barrier formula exp(-2 (b-x)(b-y)/v)
  CHECK(crossing_probability(line, Region::open_interval(-kInf, 1), 0.5, 0.8, 0.01) ==
        doctest::Approx(std::exp(-2 * 0.5 * 0.2 / 0.01)));
  CHECK(crossing_probability(line, Region::whole(), 0.0, 0.1, 1.0) == 0.0);
}

TEST_CASE("path dump round trip") {
  const auto m = ProcessModel::brownian_killed(-0.3, 0.3);
  std::vector<Path> paths;
  for (std::uint64_t i = 0; i < 5; ++i) paths.push_back(sample_path(m, 0.0, 0.2, 1e-3, SeedId{2, i}));
  std::stringstream ss;
  write_path_dump(ss, paths);
  const auto d = read_path_dump(ss);
  CHECK(d.model_id == static_cast<std::uint32_t>(ModelKind::brownian_killed));
  CHECK(d.n_paths == 5);
  CHECK(d.n_steps == 200);
  CHECK(d.dt == 1e-3);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = 0; k <= 200; ++k) {
      const double a = paths[i].states[k], b = d.states[i * 201 + k];
      CHECK(((std::isnan(a) && std::isnan(b)) || a == b));
    }
}

TEST_CASE("restart continues from the stored state") {
  const auto m = ProcessModel::brownian_line();
  const auto p = sample_path(m, 0.0, 0.5, 1e-3, SeedId{4, 0});
  const auto q = restart_path(m, p, 100, 0.3, SeedId{99, 0});
  CHECK(q.states.front() == p.states[100]);
  CHECK(q.steps() == 300);
}

}
