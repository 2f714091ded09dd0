#include "hkmc/dynkin_hunt.hpp"

#include <algorithm>
#include <ostream>

#include "hkmc/csv.hpp"
#include "hkmc/parallel.hpp"

namespace hkmc {

namespace {

constexpr std::uint64_t kSingleTag = 0x5d1c0a7e11b2f3a9ull;
constexpr std::uint64_t kMultipleTag = 0x3c6ef372fe94f82bull;

EstimateWithError est(const Moments& m, std::uint64_t seed) { return {m.mean(), m.se(), m.n, seed}; }

std::vector<std::uint64_t> grid_times(const std::vector<double>& times, double dt) {
  if (times.empty()) throw ConfigError("at least one time is required");
  std::vector<std::uint64_t> ks;
  for (double t : times) {
    if (!(t > 0.0)) throw ConfigError("times must be positive");
    ks.push_back(grid_index(t, dt));
  }
  return ks;
}

void check_options(const ProcessModel& model, const DhOptions& opt) {
  if (opt.n_paths < 2) throw ConfigError("n_paths must be at least 2");
  if (opt.inner_m < 1) throw ConfigError("inner m must be at least 1");
  model.check_dt(opt.dt);
}

// Adds u(Y_{k_j - k0}) over m restarted paths from z into acc[j] for every
// j with k_j >= k0. With `killing` set the restarted paths are killed on
// leaving that region (part process).
void restart_average(const ProcessModel& model, double z, std::uint64_t k0, const std::vector<std::uint64_t>& ks,
                     const Region& A, const Region* killing, double dt, std::uint64_t base, std::uint64_t first_index,
                     std::uint32_t m, std::uint32_t stream, double* acc) {
  const Space& space = model.space();
  std::uint64_t horizon = 0;
  for (auto k : ks)
    if (k >= k0) horizon = std::max(horizon, k - k0);
  const double inv_m = 1.0 / static_cast<double>(m);
  if (is_cemetery(z) || (killing && !killing->contains(space, z))) return;
  for (std::uint32_t j = 0; j < m; ++j) {
    for (std::size_t q = 0; q < ks.size(); ++q)
      if (ks[q] == k0 && A.contains(space, z)) acc[q] += inv_m;
    if (horizon == 0) continue;
    Walker w(model, z, dt, SeedId{base, first_index + j}, stream);
    for (std::uint64_t s = 1; s <= horizon; ++s) {
      w.advance();
      if (killing ? w.exited(*killing) : w.dead()) break;
      const std::uint64_t k = k0 + s;
      for (std::size_t q = 0; q < ks.size(); ++q)
        if (ks[q] == k && A.contains(space, w.state())) acc[q] += inv_m;
    }
  }
}

}  // namespace

std::vector<SingleDhResult> verify_single_dh(const ProcessModel& model, const Region& U, const Region& A, double x,
                                             const std::vector<double>& times, const DhOptions& opt) {
  check_options(model, opt);
  if (!model.in_state_space(x)) throw ConfigError("start point outside the state space");
  const auto ks = grid_times(times, opt.dt);
  const std::uint64_t K = *std::max_element(ks.begin(), ks.end());
  const std::size_t nt = ks.size();
  const Space& space = model.space();
  const std::uint64_t inner_base = mix64(opt.seed ^ kSingleTag);

  // per t: lhs, part, second, diff
  auto ms = ensemble_moments(opt.n_paths, 4 * nt, [&](std::uint64_t i, double* out) {
    std::fill(out, out + 4 * nt, 0.0);
    double* lhs = out;
    double* part = out + nt;
    double* second = out + 2 * nt;
    double* diff = out + 3 * nt;
    bool inside = U.contains(space, x);
    auto on_exit = [&](std::uint64_t k, double z) {
      restart_average(model, z, k, ks, A, nullptr, opt.dt, inner_base, i * opt.inner_m, opt.inner_m, opt.stream,
                      second);
    };
    if (!inside) on_exit(0, x);
    Walker w(model, x, opt.dt, SeedId{opt.seed, i}, opt.stream);
    for (std::uint64_t k = 1; k <= K; ++k) {
      w.advance();
      if (inside && w.exited(U)) {
        inside = false;
        on_exit(k, w.state());
      }
      for (std::size_t q = 0; q < nt; ++q) {
        if (ks[q] != k) continue;
        const double v = A.contains(space, w.state()) ? 1.0 : 0.0;
        lhs[q] = v;
        if (inside) part[q] = v;
      }
      if (w.dead()) break;
    }
    for (std::size_t q = 0; q < nt; ++q) diff[q] = lhs[q] - part[q] - second[q];
  });

  std::vector<SingleDhResult> res(nt);
  for (std::size_t q = 0; q < nt; ++q) {
    auto& r = res[q];
    r.t = times[q];
    r.lhs = est(ms[q], opt.seed);
    r.part = est(ms[nt + q], opt.seed);
    r.second = est(ms[2 * nt + q], opt.seed);
    r.diff = est(ms[3 * nt + q], opt.seed);
    r.pass = std::fabs(r.diff.estimate) <= 3.0 * r.diff.se;
  }
  return res;
}

std::vector<MdhLedger> verify_multiple_dh(const ProcessModel& model, const Region& U, const Region& B,
                                          const Region& A, double x, const std::vector<double>& times,
                                          const MdhOptions& opt) {
  check_options(model, opt);
  if (opt.n_max < 1 || opt.n_max > 63) throw ConfigError("n_max must lie in [1, 63]");
  if (!(opt.remainder_tol >= 0.0)) throw ConfigError("remainder_tol must be >= 0");
  const Space& space = model.space();
  if (!model.in_state_space(x)) throw ConfigError("start point outside the state space");
  if (!closure_contained(space, B, U)) throw ConfigError("closure(B) must lie inside U");
  if (!region_subset(space, A, B)) throw ConfigError("u must vanish off B");
  const auto ks = grid_times(times, opt.dt);
  const std::uint64_t K = *std::max_element(ks.begin(), ks.end());
  const std::size_t nt = ks.size();
  const std::size_t nm = opt.n_max;
  const std::uint64_t inner_base = mix64(opt.seed ^ kMultipleTag);

  // per t block: lhs | zeroth | e_1..e_nm | p_1..p_{nm+1} | D_0..D_nm
  const std::size_t width = 2 + nm + (nm + 1) + (nm + 1);
  const std::size_t o_e = 2, o_p = 2 + nm, o_d = 2 + nm + nm + 1;

  auto ms = ensemble_moments(opt.n_paths, width * nt, [&](std::uint64_t i, double* out) {
    std::fill(out, out + width * nt, 0.0);
    std::vector<double> inner(nt);
    enum class Phase { part, seek_entry, seek_exit } phase = Phase::part;
    std::size_t n = 0;  // sigma's found so far

    auto on_sigma = [&](std::uint64_t k, double z) {
      ++n;
      if (n > nm + 1) return;
      for (std::size_t q = 0; q < nt; ++q)
        if (k <= ks[q]) out[q * width + o_p + n - 1] = 1.0;
      if (n > nm) return;
      std::fill(inner.begin(), inner.end(), 0.0);
      const std::uint64_t first = ((i * 64) + n) * opt.inner_m;
      restart_average(model, z, k, ks, A, &U, opt.dt, inner_base, first, opt.inner_m, opt.stream, inner.data());
      for (std::size_t q = 0; q < nt; ++q)
        if (k <= ks[q]) out[q * width + o_e + n - 1] = inner[q];
    };

    if (!U.contains(space, x)) {
      phase = Phase::seek_entry;
      if (B.contains(space, x)) {
        on_sigma(0, x);
        phase = Phase::seek_exit;
      }
    }
    Walker w(model, x, opt.dt, SeedId{opt.seed, i}, opt.stream);
    for (std::uint64_t k = 1; k <= K; ++k) {
      w.advance();
      const double y = w.state();
      if (phase == Phase::part || phase == Phase::seek_exit) {
        if (w.exited(U)) phase = Phase::seek_entry;
      }
      if (phase == Phase::seek_entry && B.contains(space, y)) {
        on_sigma(k, y);
        phase = Phase::seek_exit;
      }
      for (std::size_t q = 0; q < nt; ++q) {
        if (ks[q] != k) continue;
        const double v = A.contains(space, y) ? 1.0 : 0.0;
        out[q * width] = v;
        if (phase == Phase::part) out[q * width + 1] = v;
      }
      if (w.dead()) break;
    }
    for (std::size_t q = 0; q < nt; ++q) {
      double* blk = out + q * width;
      double d = blk[0] - blk[1];
      blk[o_d] = d;
      for (std::size_t m = 1; m <= nm; ++m) {
        d -= blk[o_e + m - 1];
        blk[o_d + m] = d;
      }
    }
  });

  std::vector<MdhLedger> res(nt);
  for (std::size_t q = 0; q < nt; ++q) {
    const Moments* blk = ms.data() + q * width;
    auto& L = res[q];
    L.t = times[q];
    L.lhs = est(blk[0], opt.seed);
    L.zeroth = est(blk[1], opt.seed);
    for (std::size_t m = 0; m < nm; ++m) L.terms.push_back({est(blk[o_e + m], opt.seed), est(blk[o_p + m], opt.seed)});
    L.p_beyond = est(blk[o_p + nm], opt.seed);
    for (std::size_t m = 1; m < nm; ++m)
      if (L.terms[m].p_sigma.estimate > L.terms[m - 1].p_sigma.estimate) L.monotone_p_sigma = false;
    if (L.p_beyond.estimate > L.terms[nm - 1].p_sigma.estimate) L.monotone_p_sigma = false;

    std::size_t N = nm;
    double remainder = L.p_beyond.estimate;
    for (std::size_t m = 0; m < nm; ++m) {
      if (L.terms[m].p_sigma.estimate < opt.remainder_tol) {
        N = m;
        remainder = L.terms[m].p_sigma.estimate;
        break;
      }
    }
    L.truncation = N;
    L.partial_sum = L.zeroth.estimate;
    for (std::size_t m = 0; m < N; ++m) L.partial_sum += L.terms[m].e.estimate;
    L.remainder = remainder;  // sup|u| = 1 for indicators
    L.diff = est(blk[o_d + N], opt.seed);
    L.pass = L.diff.estimate >= -3.0 * L.diff.se && L.diff.estimate <= L.remainder + 3.0 * L.diff.se;
  }
  return res;
}

void write_mdh_csv(std::ostream& os, const MdhLedger& L) {
  CsvWriter csv(os, {"n", "e_n", "se_n", "p_sigma_n_le_t"});
  csv.row(0, L.zeroth.estimate, L.zeroth.se, 1.0);
  for (std::size_t m = 0; m < L.terms.size(); ++m)
    csv.row(m + 1, L.terms[m].e.estimate, L.terms[m].e.se, L.terms[m].p_sigma.estimate);
}

}  // namespace hkmc
