#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hkmc/estimate.hpp"

namespace hkmc {

struct DhOptions {
  std::uint64_t n_paths = 100000;  // outer paths
  std::uint64_t seed = 0;
  double dt = 1e-3;
  std::uint32_t inner_m = 16;  // restarts per outer path and stopping time
  std::uint32_t stream = 0;
};

struct SingleDhResult {
  double t = 0;
  EstimateWithError lhs;     // P_t u(x)
  EstimateWithError part;    // P^U_t u(x)
  EstimateWithError second;  // E[1{tau_U <= t} P_{t - tau_U} u(X_{tau_U})]
  EstimateWithError diff;    // per-path lhs - part - second
  bool pass = false;         // |diff| <= 3 se
};

/// Single Dynkin-Hunt identity with u = 1_A at each t. The restarted term
/// uses inner_m fresh paths from X_{tau_U} on a derived substream.
std::vector<SingleDhResult> verify_single_dh(const ProcessModel& model, const Region& U, const Region& A, double x,
                                             const std::vector<double>& times, const DhOptions& opt);

struct MdhTerm {
  EstimateWithError e;        // E[1{sigma_n <= t} P^U_{t - sigma_n} u(X_{sigma_n})]
  EstimateWithError p_sigma;  // P(sigma_n <= t)
};

struct MdhLedger {
  double t = 0;
  EstimateWithError lhs;
  EstimateWithError zeroth;
  std::vector<MdhTerm> terms;      // n = 1 .. n_max
  EstimateWithError p_beyond;      // P(sigma_{n_max + 1} <= t)
  std::size_t truncation = 0;      // number of series terms summed
  double partial_sum = 0;          // zeroth + e_1 + ... + e_truncation
  double remainder = 0;            // sup|u| * P(sigma_{truncation + 1} <= t)
  EstimateWithError diff;          // per-path lhs - partial sum
  bool monotone_p_sigma = true;    // P(sigma_n <= t) non-increasing in n
  bool pass = false;               // -3se <= diff <= remainder + 3se
};

struct MdhOptions : DhOptions {
  std::uint32_t n_max = 32;      // < 64
  double remainder_tol = 1e-4;
};

/// Multiple Dynkin-Hunt identity with u = 1_A, A inside B, closure(B)
/// inside U. One outer ensemble serves every t.
std::vector<MdhLedger> verify_multiple_dh(const ProcessModel& model, const Region& U, const Region& B,
                                          const Region& A, double x, const std::vector<double>& times,
                                          const MdhOptions& opt);

void write_mdh_csv(std::ostream& os, const MdhLedger& ledger);

}  // namespace hkmc
