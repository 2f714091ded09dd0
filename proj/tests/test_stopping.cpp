#include <doctest.h>

#include <sstream>

#include "hkmc/stopping.hpp"

using namespace hkmc;

namespace {
Path hand_path(std::vector<double> xs) {
  Path p;
  p.model = ProcessModel::brownian_line();
  p.dt = 0.1;
  p.states = std::move(xs);
  return p;
}
}  // namespace

TEST_SUITE("stopping") {

TEST_CASE("exit and entrance on a hand path") {
  const auto p = hand_path({0.0, 0.5, 1.2, 0.3, 0.1, 2.0, 0.0});
  const auto U = Region::open_interval(-1, 1);
  const auto B = Region::open_interval(-0.2, 0.2);
  CHECK(exit_time(p, U) == 2);
  CHECK(exit_time(p, B) == 1);
  CHECK(exit_time_after(p, U, 3) == 5);
  CHECK(entrance_time(p, Region::open_interval(1.0, 3.0)) == 2);
  CHECK(entrance_time_after(p, B, 2) == 4);
  CHECK(entrance_time_after(p, B, kNever) == kNever);
  CHECK(exit_time(p, Region::open_interval(-5, 5)) == kNever);
}

TEST_CASE("mdh sequence interleaves") {
  // U = (-1,1), B = (-0.2,0.2)
  const auto p = hand_path({0.0, 1.5, 0.1, 0.9, -1.3, -0.5, 0.05, 0.3, 1.1, 0.6});
  const auto seq = mdh_sequence(p, Region::open_interval(-1, 1), Region::open_interval(-0.2, 0.2), 9);
  REQUIRE(seq.pairs.size() >= 2);
  CHECK(seq.pairs[0].first == 1);
  CHECK(seq.pairs[0].second == 2);
  CHECK(seq.pairs[1].first == 4);
  CHECK(seq.pairs[1].second == 6);
  CHECK(seq.pairs[2].first == 8);
  CHECK(seq.pairs[2].second == kNever);
  CHECK(seq.truncation == 2);
  for (const auto& [tau, sigma] : seq.pairs) CHECK(tau < sigma);
  for (std::size_t n = 1; n < seq.pairs.size(); ++n) CHECK(seq.pairs[n - 1].second < seq.pairs[n].first);
}

TEST_CASE("mdh sequence rejects B not inside U") {
  const auto p = hand_path({0.0, 0.1});
  CHECK_THROWS_AS(mdh_sequence(p, Region::open_interval(-1, 1), Region::open_interval(-0.5, 1.0), 1), ConfigError);
}

TEST_CASE("cemetery counts as outside") {
  auto p = hand_path({0.0, 0.1, kCemetery, kCemetery});
  p.model = ProcessModel::brownian_killed(-5, 5);
  p.zeta = 2;
  CHECK(exit_time(p, Region::open_interval(-1, 1)) == 2);
  CHECK(entrance_time_after(p, Region::open_interval(-1, 1), 2) == kNever);
}

TEST_CASE("stopping csv prints INF") {
  std::ostringstream os;
  write_stopping_csv(os, {{0, "tau_1", 3}, {0, "sigma_1", kNever}});
  CHECK(os.str().find("INF") != std::string::npos);
  CHECK(os.str().find("tau_1") != std::string::npos);
}

}
