#pragma once

// Counter-based random numbers.
//
// Every draw is addressed by (seed, path id, step, lane); there is no
// sequential generator state, so a path can be regenerated or extended from
// any step and the result never depends on thread count or visiting order.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>

namespace hkmc {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
class Philox4x32 {
public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMulA = 0xD2511F53u;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85u;

  static constexpr Counter generate(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      ctr = single_round(ctr, key);
      key[0] += kWeylA;
      key[1] += kWeylB;
    }
    return ctr;
  }

private:
  static constexpr Counter single_round(const Counter& c, const Key& k) noexcept {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * c[2];
    return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
            static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
            static_cast<std::uint32_t>(p0)};
  }
};

/// splitmix64 finalizer; used to derive keys for independent substreams.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Identity of one sampled path: base seed plus path index.
struct SeedId {
  std::uint64_t base = 0;
  std::uint64_t index = 0;

  friend bool operator==(const SeedId&, const SeedId&) = default;
};

/// Uniform in (0,1) from 52 random bits; never returns 0 or 1 (with 53 bits
/// the top value rounds up to 1). The smallest value is 2^-53, so `u < p` is
/// impossible for p <= 2^-53.
inline double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}
inline constexpr double kMinOpenUnit = 0x1.0p-53;

/// Standard normal quantile (Wichura, AS241, relative accuracy ~1e-16).
double normal_quantile(double p) noexcept;

namespace detail {
struct ZigguratTables {
  std::array<std::uint64_t, 256> k;
  std::array<double, 256> w;
  std::array<double, 256> f;
};
extern const ZigguratTables kZiggurat;
inline constexpr double kZigguratR = 3.6541528853610088;

template <class Extra>
double ziggurat_tail(std::uint64_t word, std::uint32_t attempt, Extra& extra) noexcept {
  const auto& zt = kZiggurat;
  for (;;) {
    const unsigned idx = static_cast<unsigned>(word & 0xFFu);
    const std::uint64_t rest = word >> 8;
    const bool negative = (rest & 1u) != 0;
    const std::uint64_t magnitude = (rest >> 1) & 0x000FFFFFFFFFFFFFull;
    double x = static_cast<double>(magnitude) * zt.w[idx];
    if (negative) x = -x;
    if (magnitude < zt.k[idx]) return x;
    if (idx == 0) {
      for (;;) {
        const double xx = -std::log1p(-to_open_unit(extra(attempt++))) / kZigguratR;
        const double yy = -std::log1p(-to_open_unit(extra(attempt++)));
        if (yy + yy > xx * xx) return negative ? -(kZigguratR + xx) : kZigguratR + xx;
      }
    }
    if ((zt.f[idx - 1] - zt.f[idx]) * to_open_unit(extra(attempt++)) + zt.f[idx] < std::exp(-0.5 * x * x))
      return x;
    word = extra(attempt++);
  }
}
}  // namespace detail

/// Standard normal via a 256-layer ziggurat. `word` is consumed in the fast
/// path (~99% of draws); `extra(attempt)` supplies further 64-bit words for
/// the rejection branches.
template <class Extra>
inline double ziggurat_normal(std::uint64_t word, Extra&& extra) noexcept {
  const auto& zt = detail::kZiggurat;
  const unsigned idx = static_cast<unsigned>(word & 0xFFu);
  const std::uint64_t rest = word >> 8;
  const std::uint64_t magnitude = (rest >> 1) & 0x000FFFFFFFFFFFFFull;
  if (magnitude < zt.k[idx]) {
    const double x = static_cast<double>(magnitude) * zt.w[idx];
    return (rest & 1u) ? -x : x;
  }
  return detail::ziggurat_tail(word, 0, extra);
}

inline constexpr std::uint64_t kMaxSteps = 0xFFFFFFFFull;

/// Randomness for one path.
///
/// Step k (k >= 1) owns one 64-bit main word; two consecutive steps share a
/// Philox block. Auxiliary uniforms (bridge crossing tests) and ziggurat
/// rejection words come from disjoint counter families and are drawn only
/// when needed, which never perturbs the main words.
class PathStream {
public:
  static constexpr std::uint32_t kMaxStream = 1u << 14;

  /// `stream` separates families of paths sharing a base seed; < 2^14.
  PathStream(SeedId id, std::uint32_t stream = 0) noexcept
      : key_{static_cast<std::uint32_t>(id.base), static_cast<std::uint32_t>(id.base >> 32)},
        path_lo_(static_cast<std::uint32_t>(id.index)),
        path_hi_(static_cast<std::uint32_t>(id.index >> 32)),
        stream_(stream & (kMaxStream - 1)) {}

  std::uint64_t word(std::uint64_t step) const noexcept {
    const auto out = Philox4x32::generate(
        {static_cast<std::uint32_t>(step >> 1), path_lo_, path_hi_, stream_}, key_);
    return (step & 1u) ? join(out[2], out[3]) : join(out[0], out[1]);
  }

  double normal(std::uint64_t step) const noexcept { return normal_from(step, word(step)); }

  double aux_uniform(std::uint64_t step) const noexcept { return to_open_unit(family_word(step, 1u, 0)); }

  /// Normals for steps first .. first+count-1 (count <= kBatch).
  static constexpr std::size_t kBatch = 32;
  void normals(std::uint64_t first, std::size_t count, double* out) const noexcept {
    std::uint64_t words[kBatch];
    fill_words(first, count, words);
    const auto& zt = detail::kZiggurat;
    std::uint32_t slow = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint64_t w = words[i];
      const std::uint64_t idx = w & 0xFFu;
      const std::uint64_t magnitude = (w >> 9) & 0x000FFFFFFFFFFFFFull;
      const double x = static_cast<double>(static_cast<std::int64_t>(magnitude)) * zt.w[idx];
      out[i] = (w & 0x100u) ? -x : x;
      slow |= static_cast<std::uint32_t>(magnitude >= zt.k[idx]) << i;
    }
    while (slow != 0) {
      const int i = __builtin_ctz(slow);
      slow &= slow - 1;
      out[i] = normal_from(first + i, words[i]);
    }
  }

  /// Main words for steps first .. first+count-1 (count <= kBatch); the
  /// Philox rounds run structure-of-arrays so the compiler can vectorize.
  void fill_words(std::uint64_t first, std::size_t count, std::uint64_t* out) const noexcept {
    constexpr std::size_t kBlocks = kBatch / 2 + 1;
    const std::uint64_t b0 = first >> 1;
    alignas(64) std::uint32_t c0[kBlocks], c1[kBlocks], c2[kBlocks], c3[kBlocks];
    for (std::size_t i = 0; i < kBlocks; ++i) {
      c0[i] = static_cast<std::uint32_t>(b0 + i);
      c1[i] = path_lo_;
      c2[i] = path_hi_;
      c3[i] = stream_;
    }
    std::uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      for (std::size_t i = 0; i < kBlocks; ++i) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(Philox4x32::kMulA) * c0[i];
        const std::uint64_t p1 = static_cast<std::uint64_t>(Philox4x32::kMulB) * c2[i];
        const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1[i] ^ k0;
        const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3[i] ^ k1;
        c1[i] = static_cast<std::uint32_t>(p1);
        c3[i] = static_cast<std::uint32_t>(p0);
        c0[i] = n0;
        c2[i] = n2;
      }
      k0 += Philox4x32::kWeylA;
      k1 += Philox4x32::kWeylB;
    }
    const std::size_t off = first & 1u;
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + off;
      const std::size_t b = j >> 1;
      out[i] = (j & 1u) ? join(c2[b], c3[b]) : join(c0[b], c1[b]);
    }
  }

private:
  static std::uint64_t join(std::uint32_t hi, std::uint32_t lo) noexcept {
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
  }

  double normal_from(std::uint64_t step, std::uint64_t w) const noexcept {
    return ziggurat_normal(w, [this, step](std::uint32_t attempt) { return family_word(step, 2u, attempt); });
  }

  // lane 3 layout: bits 0-13 stream, 14-15 family, 16-31 attempt.
  std::uint64_t family_word(std::uint64_t step, std::uint32_t family, std::uint32_t attempt) const noexcept {
    const auto out = Philox4x32::generate(
        {static_cast<std::uint32_t>(step), path_lo_, path_hi_, stream_ | (family << 14) | (attempt << 16)}, key_);
    return join(out[0], out[1]);
  }

  Philox4x32::Key key_;
  std::uint32_t path_lo_;
  std::uint32_t path_hi_;
  std::uint32_t stream_;
};

}  // namespace hkmc
