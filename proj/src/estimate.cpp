#include "hkmc/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "hkmc/csv.hpp"
#include "hkmc/parallel.hpp"

namespace hkmc {

namespace {

void check_ensemble(const ProcessModel& model, const Ensemble& ens) {
  if (ens.n_paths < 2) throw ConfigError("n_paths must be at least 2");
  model.check_dt(ens.dt);
}

EstimateWithError to_estimate(const Moments& m, std::uint64_t seed) { return {m.mean(), m.se(), m.n, seed}; }

std::vector<EstimateWithError> to_estimates(const std::vector<Moments>& ms, std::uint64_t seed) {
  std::vector<EstimateWithError> out;
  out.reserve(ms.size());
  for (const auto& m : ms) out.push_back(to_estimate(m, seed));
  return out;
}

std::vector<std::uint64_t> time_indices(const std::vector<double>& times, double dt) {
  if (times.empty()) throw ConfigError("at least one time is required");
  std::vector<std::uint64_t> ks;
  for (double t : times) {
    if (!(t > 0.0)) throw ConfigError("times must be positive");
    ks.push_back(grid_index(t, dt));
  }
  return ks;
}

// Runs one path of the ensemble through `visit(k, walker)` for k = 1..K;
// visit returns false to stop early.
template <class Visit>
void walk(const ProcessModel& model, double x, std::uint64_t K, const Ensemble& ens, std::uint64_t i, Visit&& visit) {
  Walker w(model, x, ens.dt, SeedId{ens.seed, i}, ens.stream);
  for (std::uint64_t k = 1; k <= K; ++k) {
    w.advance();
    if (!visit(k, w)) return;
  }
}

}  // namespace

std::vector<EstimateWithError> part_transition_prob_curve(const ProcessModel& model, double x,
                                                          const std::vector<double>& times, const Region& U,
                                                          const Region& A, const Ensemble& ens) {
  check_ensemble(model, ens);
  const auto ks = time_indices(times, ens.dt);
  const std::uint64_t K = *std::max_element(ks.begin(), ks.end());
  const Space& space = model.space();
  if (!model.in_state_space(x)) throw ConfigError("start point outside the state space");
  const bool start_inside = U.contains(space, x);
  auto ms = ensemble_moments(ens.n_paths, ks.size(), [&](std::uint64_t i, double* out) {
    std::fill(out, out + ks.size(), 0.0);
    if (!start_inside) return;
    walk(model, x, K, ens, i, [&](std::uint64_t k, const Walker& w) {
      if (w.exited(U)) return false;
      for (std::size_t j = 0; j < ks.size(); ++j)
        if (ks[j] == k && A.contains(space, w.state())) out[j] = 1.0;
      return true;
    });
  });
  return to_estimates(ms, ens.seed);
}

std::vector<EstimateWithError> transition_prob_curve(const ProcessModel& model, double x,
                                                     const std::vector<double>& times, const Region& A,
                                                     const Ensemble& ens) {
  return part_transition_prob_curve(model, x, times, Region::whole(), A, ens);
}

EstimateWithError transition_prob(const ProcessModel& model, double x, double t, const Region& A,
                                  const Ensemble& ens) {
  return transition_prob_curve(model, x, {t}, A, ens).front();
}

EstimateWithError part_transition_prob(const ProcessModel& model, double x, double t, const Region& U,
                                       const Region& A, const Ensemble& ens) {
  return part_transition_prob_curve(model, x, {t}, U, A, ens).front();
}

std::vector<EstimateWithError> exit_prob_curve(const ProcessModel& model, double x, double r,
                                               const std::vector<double>& times, const Ensemble& ens) {
  check_ensemble(model, ens);
  if (!(r > 0.0)) throw ConfigError("exit radius must be positive");
  const auto ks = time_indices(times, ens.dt);
  const std::uint64_t K = *std::max_element(ks.begin(), ks.end());
  const Region B = Region::ball(x, r);
  auto ms = ensemble_moments(ens.n_paths, ks.size(), [&](std::uint64_t i, double* out) {
    std::uint64_t tau = kNever;
    walk(model, x, K, ens, i, [&](std::uint64_t k, const Walker& w) {
      if (!w.exited(B)) return true;
      tau = k;
      return false;
    });
    for (std::size_t j = 0; j < ks.size(); ++j) out[j] = tau <= ks[j] ? 1.0 : 0.0;
  });
  return to_estimates(ms, ens.seed);
}

EstimateWithError exit_prob(const ProcessModel& model, double x, double r, double t, const Ensemble& ens) {
  return exit_prob_curve(model, x, r, {t}, ens).front();
}

namespace {
// exit time of B(x, r) in grid steps, kNever if beyond K
std::uint64_t exit_steps(const ProcessModel& model, double x, const Region& B, std::uint64_t K, const Ensemble& ens,
                         std::uint64_t i) {
  std::uint64_t tau = kNever;
  walk(model, x, K, ens, i, [&](std::uint64_t k, const Walker& w) {
    if (!w.exited(B)) return true;
    tau = k;
    return false;
  });
  return tau;
}
}  // namespace

ExitTimeEstimate mean_exit_time(const ProcessModel& model, double x, double r, std::optional<double> cap,
                                double horizon, const Ensemble& ens) {
  check_ensemble(model, ens);
  if (!(r > 0.0)) throw ConfigError("exit radius must be positive");
  ExitTimeEstimate res;
  if (cap && *cap < 0.0) throw ConfigError("cap must be >= 0");
  if (cap && *cap == 0.0) {
    res.value = {0.0, 0.0, ens.n_paths, ens.seed};
    return res;
  }
  const double H = cap ? *cap : horizon;
  if (!(H > 0.0)) throw ConfigError("horizon must be positive");
  const std::uint64_t K = grid_steps(H, ens.dt);
  const Region B = Region::ball(x, r);
  auto ms = ensemble_moments(ens.n_paths, 2, [&](std::uint64_t i, double* out) {
    const std::uint64_t tau = exit_steps(model, x, B, K, ens, i);
    out[0] = static_cast<double>(std::min(tau, K)) * ens.dt;
    out[1] = tau == kNever ? 1.0 : 0.0;
  });
  res.value = to_estimate(ms[0], ens.seed);
  res.censored_fraction = ms[1].mean();
  res.horizon = static_cast<double>(K) * ens.dt;
  res.censoring_ok = cap.has_value() || res.censored_fraction < 1e-3;
  return res;
}

LaplaceEstimate laplace_exit(const ProcessModel& model, double x, double r, double lambda, double horizon,
                             const Ensemble& ens) {
  check_ensemble(model, ens);
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (!(r > 0.0)) throw ConfigError("exit radius must be positive");
  const std::uint64_t K = grid_steps(horizon, ens.dt);
  const Region B = Region::ball(x, r);
  auto ms = ensemble_moments(ens.n_paths, 2, [&](std::uint64_t i, double* out) {
    const std::uint64_t tau = exit_steps(model, x, B, K, ens, i);
    out[0] = tau == kNever ? 0.0 : std::exp(-lambda * static_cast<double>(tau) * ens.dt);
    out[1] = tau == kNever ? 1.0 : 0.0;
  });
  LaplaceEstimate res;
  res.lower = to_estimate(ms[0], ens.seed);
  res.censored_fraction = ms[1].mean();
  res.upper = res.lower.estimate + res.censored_fraction * std::exp(-lambda * static_cast<double>(K) * ens.dt);
  return res;
}

// ---------------------------------------------------------------- density

PartitionHierarchy::PartitionHierarchy(const Space& space, const Region& W, int depth)
    : space_(space), W_(W), depth_(depth) {
  if (depth < 0) throw ConfigError("partition depth must be >= 0");
  if (space.kind() == SpaceKind::gasket) {
    if (W.kind != RegionKind::vertex_set && W.kind != RegionKind::whole && W.kind != RegionKind::ball)
      throw ConfigError("gasket window must be a vertex set, ball or the whole space");
    if (depth > 24) throw ConfigError("partition depth must be <= 24 on the gasket");
    const auto& g = space.graph();
    for (std::size_t v = 0; v < g.size(); ++v)
      if (W.contains(space, static_cast<double>(v))) vertices_.push_back(v);
    return;
  }
  if (depth > 16) throw ConfigError("partition depth must be <= 16 for 1D windows");
  if (space.kind() == SpaceKind::line) {
    if (W.kind != RegionKind::open_interval || !std::isfinite(W.a) || !std::isfinite(W.b))
      throw ConfigError("window must be a bounded open interval");
    lo_ = W.a;
    hi_ = W.b;
  } else {
    // circle: an arc (c - r, c + r) in unwrapped coordinates
    if (W.kind != RegionKind::ball || W.radius > space.circumference() / 2.0)
      throw ConfigError("circle window must be a ball of radius <= C/2");
    lo_ = W.center - W.radius;
    hi_ = W.center + W.radius;
  }
}

long PartitionHierarchy::cell_of(double y) const {
  if (is_cemetery(y)) return -1;
  const std::size_t n = cells(depth_);
  if (space_.kind() == SpaceKind::gasket) {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), static_cast<std::size_t>(y));
    if (it == vertices_.end() || *it != static_cast<std::size_t>(y)) return -1;
    const std::size_t pos = static_cast<std::size_t>(it - vertices_.begin());
    // largest cell whose range starts at or before pos
    std::size_t lo = 0, hi = n;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (range_begin(depth_, mid) <= pos) lo = mid;
      else hi = mid;
    }
    return static_cast<long>(lo);
  }
  if (space_.kind() == SpaceKind::circle) {
    const double C = space_.circumference();
    double d = std::fmod(y - W_.center, C);
    if (d > C / 2.0) d -= C;
    if (d <= -C / 2.0) d += C;
    y = W_.center + d;
  }
  if (!(lo_ < y && y < hi_)) return -1;
  const double h = (hi_ - lo_) / static_cast<double>(n);
  const double q = std::floor((y - lo_) / h);
  return static_cast<long>(std::clamp(q, 0.0, static_cast<double>(n - 1)));
}

std::size_t PartitionHierarchy::range_begin(int level, std::size_t index) const {
  // floor(index * |W| / 2^level); nested because 2^(level+1) refines 2^level
  return static_cast<std::size_t>((static_cast<unsigned __int128>(index) * vertices_.size()) >> level);
}

double PartitionHierarchy::measure(int level, std::size_t index) const {
  if (space_.kind() == SpaceKind::gasket) {
    const std::size_t count = range_begin(level, index + 1) - range_begin(level, index);
    return static_cast<double>(count) / static_cast<double>(space_.graph().size());
  }
  return (hi_ - lo_) / static_cast<double>(cells(level));
}

std::pair<double, double> PartitionHierarchy::bounds(int level, std::size_t index) const {
  if (space_.kind() == SpaceKind::gasket) {
    const std::size_t b = range_begin(level, index), e = range_begin(level, index + 1);
    if (b == e) return {kCemetery, kCemetery};
    return {static_cast<double>(vertices_[b]), static_cast<double>(vertices_[e - 1])};
  }
  const double n = static_cast<double>(cells(level));
  return {lo_ + (hi_ - lo_) * (static_cast<double>(index) / n), lo_ + (hi_ - lo_) * (static_cast<double>(index + 1) / n)};
}

std::vector<std::uint64_t> KernelEstimate::level_counts(int level) const {
  if (!hierarchy || level < 0 || level > hierarchy->depth()) throw ConfigError("level outside the hierarchy");
  const int shift = hierarchy->depth() - level;
  std::vector<std::uint64_t> out(std::size_t{1} << level, 0);
  for (std::size_t i = 0; i < counts.size(); ++i) out[i >> shift] += counts[i];
  return out;
}

std::vector<KernelCell> KernelEstimate::level(int lvl) const {
  const auto c = level_counts(lvl);
  std::vector<KernelCell> out;
  const double n = static_cast<double>(n_paths);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto [l, r] = hierarchy->bounds(lvl, i);
    const double mu = hierarchy->measure(lvl, i);
    const double p = static_cast<double>(c[i]) / n;
    const double se = std::sqrt(p * (1.0 - p) / (n - 1.0));
    if (mu > 0.0) out.push_back({l, r, p / mu, se / mu, c[i]});
    else out.push_back({l, r, 0.0, 0.0, c[i]});
  }
  return out;
}

KernelEstimate density_extract(const ProcessModel& model, double x, double t, const Region& U, const Region& W,
                               int depth, const Ensemble& ens) {
  check_ensemble(model, ens);
  const Space& space = model.space();
  PartitionHierarchy hier(space, W, depth);
  // W inside U, checked on the representation of each kind
  if (space.kind() == SpaceKind::gasket) {
    for (std::size_t v = 0; v < space.graph().size(); ++v)
      if (W.contains(space, static_cast<double>(v)) && !U.contains(space, static_cast<double>(v)))
        throw ConfigError("window must lie inside U");
  } else if (U.kind != RegionKind::whole) {
    const auto [wl, wr] = hier.bounds(0, 0);
    const double ul = U.kind == RegionKind::ball ? U.center - U.radius : U.a;
    const double ur = U.kind == RegionKind::ball ? U.center + U.radius : U.b;
    if (space.kind() == SpaceKind::line && !(ul <= wl && wr <= ur)) throw ConfigError("window must lie inside U");
  }
  const std::uint64_t K = grid_index(t, ens.dt);
  if (K == 0) throw ConfigError("density extraction needs t > 0");
  const bool start_inside = U.contains(space, x);
  const std::size_t n_cells = hier.cells(depth);

  using Counts = std::vector<std::uint64_t>;
  auto parts = run_blocks<Counts>(ens.n_paths, [&](std::uint64_t begin, std::uint64_t end) {
    Counts c(n_cells + 1, 0);
    if (!start_inside) return c;
    for (std::uint64_t i = begin; i < end; ++i) {
      double y = kCemetery;
      walk(model, x, K, ens, i, [&](std::uint64_t k, const Walker& w) {
        if (w.exited(U)) return false;
        if (k == K) y = w.state();
        return true;
      });
      const long cell = hier.cell_of(y);
      if (cell >= 0) {
        ++c[static_cast<std::size_t>(cell)];
        ++c[n_cells];
      }
    }
    return c;
  });
  Counts total = parts.empty() ? Counts(n_cells + 1, 0)
                               : tree_reduce(std::move(parts), [](Counts& a, const Counts& b) {
                                   for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
                                 });
  KernelEstimate ke;
  ke.x = x;
  ke.t = t;
  ke.n_paths = ens.n_paths;
  ke.seed = ens.seed;
  ke.mass_count = total[n_cells];
  total.pop_back();
  ke.counts = std::move(total);
  ke.hierarchy.emplace(std::move(hier));
  return ke;
}

void write_kernel_csv(std::ostream& os, const std::vector<KernelCell>& cells) {
  CsvWriter csv(os, {"cell_left", "cell_right", "density", "se"});
  for (const auto& c : cells) csv.row(c.left, c.right, c.density, c.se);
}

void write_scalar_csv(std::ostream& os, const std::vector<std::pair<std::string, EstimateWithError>>& rows) {
  CsvWriter csv(os, {"name", "estimate", "se", "n"});
  for (const auto& [name, e] : rows) csv.row(name, e.estimate, e.se, e.n);
}

}  // namespace hkmc
