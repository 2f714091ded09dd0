#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hkmc/process.hpp"

namespace hkmc {

/// Shared path ensemble: path i is SeedId{seed, i} on `stream`. Estimators
/// called with the same ensemble see the same paths.
struct Ensemble {
  std::uint64_t n_paths = 0;
  std::uint64_t seed = 0;
  double dt = 1e-3;
  std::uint32_t stream = 0;
};

struct EstimateWithError {
  double estimate = 0.0;
  double se = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

/// P_x[X_t in A] for each t (cemetery counts as outside A).
std::vector<EstimateWithError> transition_prob_curve(const ProcessModel& model, double x,
                                                     const std::vector<double>& times, const Region& A,
                                                     const Ensemble& ens);
EstimateWithError transition_prob(const ProcessModel& model, double x, double t, const Region& A,
                                  const Ensemble& ens);

/// P_x[X_t in A, t < tau_U].
std::vector<EstimateWithError> part_transition_prob_curve(const ProcessModel& model, double x,
                                                          const std::vector<double>& times, const Region& U,
                                                          const Region& A, const Ensemble& ens);
EstimateWithError part_transition_prob(const ProcessModel& model, double x, double t, const Region& U,
                                       const Region& A, const Ensemble& ens);

/// P_x[tau_{B(x,r)} <= t]; censored paths count as not yet exited.
std::vector<EstimateWithError> exit_prob_curve(const ProcessModel& model, double x, double r,
                                               const std::vector<double>& times, const Ensemble& ens);
EstimateWithError exit_prob(const ProcessModel& model, double x, double r, double t, const Ensemble& ens);

struct ExitTimeEstimate {
  EstimateWithError value;       // E[tau ^ cap] or E[tau ^ horizon]
  double censored_fraction = 0;  // paths still inside at the horizon
  bool censoring_ok = true;      // censored mass below 1e-3 for uncapped runs
  double horizon = 0;
};

/// E_x[tau_{B(x,r)} ^ cap] when cap is set (horizon = cap), otherwise
/// E_x[tau] from paths run to `horizon` with the censoring mass reported.
ExitTimeEstimate mean_exit_time(const ProcessModel& model, double x, double r, std::optional<double> cap,
                                double horizon, const Ensemble& ens);

struct LaplaceEstimate {
  EstimateWithError lower;  // censored paths contribute 0
  double upper = 0;         // censored paths contribute exp(-lambda * horizon)
  double censored_fraction = 0;
};

LaplaceEstimate laplace_exit(const ProcessModel& model, double x, double r, double lambda, double horizon,
                             const Ensemble& ens);

/// Nested partitions of a window W: dyadic bisection of an interval, or
/// bisection of the sorted vertex list on the gasket.
class PartitionHierarchy {
public:
  PartitionHierarchy(const Space& space, const Region& W, int depth);

  int depth() const noexcept { return depth_; }
  std::size_t cells(int level) const noexcept { return std::size_t{1} << level; }
  /// Finest-level cell containing y, or -1 when y is outside W.
  long cell_of(double y) const;
  double measure(int level, std::size_t index) const;
  /// Interval endpoints (1D) or first/last vertex index (gasket).
  std::pair<double, double> bounds(int level, std::size_t index) const;
  const Region& window() const noexcept { return W_; }

private:
  Space space_;
  Region W_;
  int depth_;
  double lo_ = 0, hi_ = 0;
  std::vector<std::size_t> vertices_;
  std::size_t range_begin(int level, std::size_t index) const;
};

struct KernelCell {
  double left, right;
  double density;
  double se;
  std::uint64_t count;
};

struct KernelEstimate {
  double x = 0, t = 0;
  std::uint64_t n_paths = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> counts;  // finest level
  std::uint64_t mass_count = 0;       // paths with X_t in W and t < tau_U
  std::optional<PartitionHierarchy> hierarchy;

  /// Counts aggregated to `level` (exact integer telescoping).
  std::vector<std::uint64_t> level_counts(int level) const;
  std::vector<KernelCell> level(int level) const;
  double mass() const { return static_cast<double>(mass_count) / static_cast<double>(n_paths); }
};

KernelEstimate density_extract(const ProcessModel& model, double x, double t, const Region& U, const Region& W,
                               int depth, const Ensemble& ens);

void write_kernel_csv(std::ostream& os, const std::vector<KernelCell>& cells);
void write_scalar_csv(std::ostream& os, const std::vector<std::pair<std::string, EstimateWithError>>& rows);

}  // namespace hkmc
