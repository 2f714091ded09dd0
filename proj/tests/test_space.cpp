#include <doctest.h>

#include <cmath>
#include <set>

#include "hkmc/space.hpp"

using namespace hkmc;

TEST_SUITE("space") {

TEST_CASE("line and circle metrics") {
  const auto line = Space::line();
  CHECK(line.distance(-1.5, 2.0) == doctest::Approx(3.5));
  CHECK(line.ball_measure(0.0, 0.7) == doctest::Approx(1.4));
  CHECK(std::isinf(line.total_measure()));
  CHECK_FALSE(line.diameter().has_value());

  const auto circ = Space::circle(4.0);
  CHECK(circ.distance(0.5, 3.5) == doctest::Approx(1.0));
  CHECK(circ.distance(0.0, 2.0) == doctest::Approx(2.0));
  CHECK(circ.normalize(-0.5) == doctest::Approx(3.5));
  CHECK(circ.ball_measure(1.0, 0.5) == doctest::Approx(1.0));
  CHECK(circ.ball_measure(1.0, 10.0) == doctest::Approx(4.0));
  CHECK(*circ.diameter() == doctest::Approx(2.0));
}

TEST_CASE("gasket graph structure") {
  for (int L = 0; L <= 5; ++L) {
    GasketGraph g(L);
    const std::size_t p3 = static_cast<std::size_t>(std::pow(3, L));
    CHECK(g.size() == 3 * (p3 + 1) / 2);
    std::size_t edges = 0;
    for (std::size_t v = 0; v < g.size(); ++v) {
      const bool corner = v == g.left_corner() || v == g.right_corner() || v == g.top_corner();
      CHECK(g.degree(v) == (corner ? 2u : 4u));
      edges += g.degree(v);
      for (std::size_t s = 0; s < g.degree(v); ++s) {
        const auto w = g.neighbor(v, s);
        CHECK(g.distance(v, w) == doctest::Approx(g.edge_length()));
      }
    }
    CHECK(edges / 2 == 3 * p3);
  }
}

TEST_CASE("gasket addresses are unique and invertible") {
  GasketGraph g(3);
  std::set<std::string> seen;
  for (std::size_t v = 0; v < g.size(); ++v) {
    CHECK(seen.insert(g.address(v)).second);
    CHECK(*g.find_address(g.address(v)) == v);
  }
  CHECK(g.distance(g.left_corner(), g.right_corner()) == doctest::Approx(1.0));
  CHECK(g.distance(g.left_corner(), g.top_corner()) == doctest::Approx(1.0));
}

TEST_CASE("gasket ball measure sums to one") {
  const auto s = Space::gasket(4);
  CHECK(s.total_measure() == doctest::Approx(1.0));
  CHECK(s.ball_measure(0, 10.0) == doctest::Approx(1.0));
  CHECK(s.ball_measure(0, 0.0) == 0.0);
}

TEST_CASE("regions") {
  const auto line = Space::line();
  const auto U = Region::open_interval(-1, 1);
  CHECK(U.contains(line, 0.99));
  CHECK_FALSE(U.contains(line, 1.0));
  CHECK(Region::closed_interval(-1, 1).contains(line, 1.0));
  CHECK(U.distance_to_complement(line, 0.25) == doctest::Approx(0.75));
  CHECK(std::isinf(Region::whole().distance_to_complement(line, 3.0)));
  CHECK(Region::ball(2.0, 0.5).contains(line, 2.4));
  CHECK_FALSE(Region::ball(2.0, 0.5).contains(line, 2.5));

  CHECK(closure_contained(line, Region::open_interval(-0.5, 0.5), U));
  CHECK_FALSE(closure_contained(line, Region::open_interval(-0.5, 1.0), U));
  CHECK(region_subset(line, Region::closed_interval(-0.2, 0.2), Region::open_interval(-0.5, 0.5)));
  CHECK_FALSE(region_subset(line, Region::closed_interval(-0.2, 0.6), Region::open_interval(-0.5, 0.5)));
}

TEST_CASE("circle region wraps") {
  const auto c = Space::circle(4.0);
  const auto B = Region::ball(0.0, 0.5);
  CHECK(B.contains(c, 3.8));
  CHECK(B.distance_to_complement(c, 3.9) == doctest::Approx(0.4));
}

TEST_CASE("inner set and ball membership") {
  const auto line = Space::line();
  const auto U = Region::open_interval(-1, 1);
  CHECK(inner_set_membership(line, U, 0.25, 2.0, 0.0));
  CHECK_FALSE(inner_set_membership(line, U, 0.25, 2.0, 0.6));
  CHECK(ball_membership(line, 0.0, 1.0, 0.5));
  CHECK_FALSE(ball_membership(line, 0.0, 1.0, 1.0));
}

TEST_CASE("volume doubling report") {
  const auto rep = volume_doubling_report(Space::line(), {0.0, 1.0}, {0.1, 1.0, 10.0}, 100.0);
  CHECK(rep.estimate == doctest::Approx(2.0));
  CHECK(rep.violations == 0);
}

}
