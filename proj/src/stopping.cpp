#include "hkmc/stopping.hpp"

#include <ostream>

#include "hkmc/csv.hpp"

namespace hkmc {

std::uint64_t exit_time_after(const Path& path, const Region& B, std::uint64_t sigma) {
  const auto& xs = path.states;
  if (sigma == kNever || sigma >= xs.size()) return kNever;
  const Space& space = path.model.space();
  if (!B.contains(space, xs[sigma])) return sigma;
  const PathStream rng(path.seed, path.stream);
  const double var_dt = path.model.scale() * path.dt;
  const bool bridge = path.model.bridge();
  for (std::uint64_t k = sigma + 1; k < xs.size(); ++k)
    if (step_exits(space, B, xs[k - 1], xs[k], var_dt, bridge, rng, k)) return k;
  return kNever;
}

std::uint64_t exit_time(const Path& path, const Region& B) { return exit_time_after(path, B, 0); }

std::uint64_t entrance_time_after(const Path& path, const Region& B, std::uint64_t sigma) {
  const auto& xs = path.states;
  if (sigma == kNever) return kNever;
  const Space& space = path.model.space();
  for (std::uint64_t k = sigma; k < xs.size(); ++k)
    if (B.contains(space, xs[k])) return k;
  return kNever;
}

std::uint64_t entrance_time(const Path& path, const Region& B) { return entrance_time_after(path, B, 0); }

MdhSequence mdh_sequence(const Path& path, const Region& U, const Region& B, std::uint64_t horizon) {
  if (!closure_contained(path.model.space(), B, U)) throw ConfigError("closure(B) must lie inside U");
  MdhSequence seq;
  std::uint64_t tau = exit_time(path, U);
  for (;;) {
    if (tau == kNever || tau > horizon) {
      seq.pairs.emplace_back(tau, kNever);
      break;
    }
    const std::uint64_t sigma = entrance_time_after(path, B, tau);
    seq.pairs.emplace_back(tau, sigma);
    if (sigma == kNever || sigma > horizon) break;
    ++seq.truncation;
    tau = exit_time_after(path, U, sigma);
  }
  return seq;
}

void write_stopping_csv(std::ostream& os, const std::vector<StoppingRow>& rows) {
  CsvWriter csv(os, {"path_index", "name", "time"});
  for (const auto& r : rows)
    csv.row(r.path_index, r.name, r.time == kNever ? std::string("INF") : std::to_string(r.time));
}

}  // namespace hkmc
