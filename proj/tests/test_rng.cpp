#include <doctest.h>

#include <cmath>

#include "hkmc/rng.hpp"

using namespace hkmc;

TEST_SUITE("rng") {

TEST_CASE("philox known answers") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::generate(C{0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate(C{~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("draws are addressed, not sequential") {
  PathStream a(SeedId{7, 3}), b(SeedId{7, 3}), c(SeedId{7, 4}), d(SeedId{7, 3}, 1);
  CHECK(a.word(100) == b.word(100));
  CHECK(a.normal(5) == b.normal(5));
  CHECK(a.word(100) != c.word(100));
  CHECK(a.word(100) != d.word(100));
  CHECK(a.aux_uniform(9) == b.aux_uniform(9));
}

TEST_CASE("batched normals equal single draws") {
  PathStream s(SeedId{42, 1});
  double buf[PathStream::kBatch];
  for (std::uint64_t first : {1ull, 33ull, 1000001ull}) {
    s.normals(first, PathStream::kBatch, buf);
    for (std::size_t i = 0; i < PathStream::kBatch; ++i) CHECK(buf[i] == s.normal(first + i));
  }
}

TEST_CASE("normal moments") {
  PathStream s(SeedId{1, 0});
  const int n = 1 << 20;
  double m1 = 0, m2 = 0, m4 = 0, tail = 0;
  for (int i = 1; i <= n; ++i) {
    const double z = s.normal(i);
    m1 += z;
    m2 += z * z;
    m4 += z * z * z * z;
    tail += std::fabs(z) > 3.0;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  tail /= n;
  CHECK(std::fabs(m1) < 5.0 / std::sqrt(n));
  CHECK(std::fabs(m2 - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::fabs(m4 - 3.0) < 5.0 * std::sqrt(96.0 / n));
  CHECK(std::fabs(tail - 0.0026997961) < 5.0 * std::sqrt(0.0027 / n));
}

TEST_CASE("uniforms in the open unit interval") {
  CHECK(to_open_unit(0) > 0.0);
  CHECK(to_open_unit(~0ull) < 1.0);
  PathStream s(SeedId{3, 0});
  double mean = 0;
  for (int i = 0; i < 100000; ++i) mean += s.aux_uniform(i);
  CHECK(std::fabs(mean / 100000 - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / 100000));
}

}
