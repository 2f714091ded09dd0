#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "hkmc/rng.hpp"
#include "hkmc/space.hpp"

namespace hkmc {

enum class ModelKind : std::uint32_t { brownian_line = 1, brownian_killed = 2, brownian_circle = 3, gasket_walk = 4 };

/// Grid time "infinity": never happened within the simulated horizon.
inline constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

/// The cemetery state is encoded as NaN in every model.
inline const double kCemetery = std::numeric_limits<double>::quiet_NaN();
inline bool is_cemetery(double x) noexcept { return std::isnan(x); }

class ProcessModel {
public:
  static ProcessModel brownian_line(double scale = 1.0, bool bridge = false);
  static ProcessModel brownian_killed(double a, double b, double scale = 1.0, bool bridge = false);
  static ProcessModel brownian_circle(double circumference, double scale = 1.0, bool bridge = false);
  static ProcessModel gasket_walk(int level);

  ModelKind kind() const noexcept { return kind_; }
  const Space& space() const noexcept { return space_; }
  /// Variance per unit time for Brownian kinds.
  double scale() const noexcept { return scale_; }
  bool bridge() const noexcept { return bridge_; }
  ProcessModel with_bridge(bool on) const;
  /// Killing interval of brownian_killed.
  const Region& killing_set() const noexcept { return killing_; }
  bool conservative() const noexcept { return kind_ != ModelKind::brownian_killed; }
  /// Gasket step time 5^-L; 0 for continuous models.
  double step_time() const noexcept { return step_time_; }
  std::string name() const;

  bool in_state_space(double x) const;
  /// Throws ConfigError unless dt is admissible (gasket: dt == 5^-L).
  void check_dt(double dt) const;

private:
  ModelKind kind_ = ModelKind::brownian_line;
  Space space_ = Space::line();
  double scale_ = 1.0;
  bool bridge_ = false;
  Region killing_ = Region::whole();
  double step_time_ = 0.0;
};

/// Number of grid steps covering `horizon`; ceil with a 1e-9 relative guard.
std::uint64_t grid_steps(double horizon, double dt);
/// Index k with k*dt == t; throws ConfigError when t is off the grid.
std::uint64_t grid_index(double t, double dt);

struct Path {
  ProcessModel model;
  double dt = 0.0;
  std::vector<double> states;
  std::uint64_t zeta = kNever;
  SeedId seed;
  std::uint32_t stream = 0;

  std::uint64_t steps() const noexcept { return states.size() - 1; }
  double time(std::uint64_t k) const noexcept { return static_cast<double>(k) * dt; }
};

/// Probability that the Brownian bridge between x and y (variance var_dt)
/// leaves `region` although both endpoints lie inside. Zero for regions
/// without finite 1D barriers and on the gasket.
double crossing_probability(const Space& space, const Region& region, double x, double y, double var_dt);

/// Did the transition x -> y at grid step `step` leave `region`? True when y
/// is outside (cemetery included) or, with bridge correction on, when the
/// auxiliary uniform of that step falls below the crossing probability.
bool step_exits(const Space& space, const Region& region, double x, double y, double var_dt, bool bridge,
                const PathStream& stream, std::uint64_t step);

/// Streaming sampler: produces the same states as sample_path without
/// storing them. Step numbering starts at 1 for the first transition.
class Walker {
public:
  Walker(const ProcessModel& model, double x0, double dt, SeedId seed, std::uint32_t stream = 0);

  std::uint64_t step() const noexcept { return step_; }
  double state() const noexcept { return x_; }
  double previous() const noexcept { return prev_; }
  bool dead() const noexcept { return zeta_ != kNever; }
  std::uint64_t zeta() const noexcept { return zeta_; }
  const PathStream& rng() const noexcept { return rng_; }
  double var_dt() const noexcept { return var_dt_; }

  void advance() {
    if (fill_ == pos_) refill();
    prev_ = x_;
    ++step_;
    if (zeta_ != kNever) {
      ++pos_;
      return;
    }
    switch (model_->kind()) {
      case ModelKind::brownian_line: x_ = prev_ + sd_ * buf_[pos_]; break;
      case ModelKind::brownian_circle: x_ = model_->space().normalize(prev_ + sd_ * buf_[pos_]); break;
      case ModelKind::brownian_killed:
        x_ = prev_ + sd_ * buf_[pos_];
        if (step_exits(model_->space(), model_->killing_set(), prev_, x_, var_dt_, model_->bridge(), rng_, step_)) {
          x_ = kCemetery;
          zeta_ = step_;
        }
        break;
      case ModelKind::gasket_walk: x_ = gasket_move(); break;
    }
    ++pos_;
  }

  /// Whether the last transition left `region` (grid or bridge exit).
  bool exited(const Region& region) const {
    return step_exits(model_->space(), region, prev_, x_, var_dt_, bridge_, rng_, step_);
  }

private:
  void refill();
  double gasket_move() const;

  const ProcessModel* model_;
  PathStream rng_;
  double sd_;
  double var_dt_;
  bool bridge_;
  double x_;
  double prev_;
  std::uint64_t step_ = 0;
  std::uint64_t zeta_ = kNever;
  std::size_t pos_ = 0;
  std::size_t fill_ = 0;
  double buf_[PathStream::kBatch];
  std::uint64_t words_[PathStream::kBatch];
};

Path sample_path(const ProcessModel& model, double x0, double horizon, double dt, SeedId seed,
                 std::uint32_t stream = 0);

/// Fresh path from the state of `path` at grid index s (shift semantics).
Path restart_path(const ProcessModel& model, const Path& path, std::uint64_t s, double extension_horizon,
                  SeedId seed, std::uint32_t stream = 0);

/// Binary dump, little-endian:
///   8 bytes  magic "HKMCPTH1"
///   u32      model id (ModelKind value)
///   u32      reserved, 0
///   f64      dt
///   u64      n_steps (states per path minus one)
///   u64      n_paths
///   f64[n_paths][n_steps + 1] states, row-major, NaN = cemetery
struct PathDump {
  std::uint32_t model_id = 0;
  double dt = 0.0;
  std::uint64_t n_steps = 0;
  std::uint64_t n_paths = 0;
  std::vector<double> states;
};

void write_path_dump(std::ostream& os, const std::vector<Path>& paths);
PathDump read_path_dump(std::istream& is);

}  // namespace hkmc
