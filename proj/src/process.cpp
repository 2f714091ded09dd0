#include "hkmc/process.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

namespace hkmc {

ProcessModel ProcessModel::brownian_line(double scale, bool bridge) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("diffusion scale must be positive");
  ProcessModel m;
  m.kind_ = ModelKind::brownian_line;
  m.scale_ = scale;
  m.bridge_ = bridge;
  return m;
}

ProcessModel ProcessModel::brownian_killed(double a, double b, double scale, bool bridge) {
  ProcessModel m = brownian_line(scale, bridge);
  if (!std::isfinite(a) || !std::isfinite(b)) throw ConfigError("killing interval must be bounded");
  m.kind_ = ModelKind::brownian_killed;
  m.killing_ = Region::open_interval(a, b);
  return m;
}

ProcessModel ProcessModel::brownian_circle(double circumference, double scale, bool bridge) {
  ProcessModel m = brownian_line(scale, bridge);
  m.kind_ = ModelKind::brownian_circle;
  m.space_ = Space::circle(circumference);
  return m;
}

ProcessModel ProcessModel::gasket_walk(int level) {
  ProcessModel m;
  m.kind_ = ModelKind::gasket_walk;
  m.space_ = Space::gasket(level);
  m.step_time_ = std::pow(5.0, -level);
  return m;
}

ProcessModel ProcessModel::with_bridge(bool on) const {
  ProcessModel m = *this;
  m.bridge_ = on && kind_ != ModelKind::gasket_walk;
  return m;
}

std::string ProcessModel::name() const {
  switch (kind_) {
    case ModelKind::brownian_line: return "brownian_line";
    case ModelKind::brownian_killed: return "brownian_killed";
    case ModelKind::brownian_circle: return "brownian_circle";
    case ModelKind::gasket_walk: return "gasket_walk";
  }
  return "unknown";
}

bool ProcessModel::in_state_space(double x) const {
  if (!space_.is_point(x)) return false;
  if (kind_ == ModelKind::brownian_killed) return killing_.contains(space_, x);
  return true;
}

void ProcessModel::check_dt(double dt) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (kind_ == ModelKind::gasket_walk && std::fabs(dt - step_time_) > 1e-12 * step_time_)
    throw ConfigError("gasket walk needs dt equal to its step time 5^-L");
}

std::uint64_t grid_steps(double horizon, double dt) {
  if (!(horizon >= 0.0) || !(dt > 0.0)) throw ConfigError("horizon must be >= 0 and dt > 0");
  const double q = horizon / dt;
  const double n = std::ceil(q - 1e-9 * std::max(1.0, q));
  if (n > static_cast<double>(kMaxSteps)) throw ConfigError("horizon exceeds 2^32 grid steps");
  return static_cast<std::uint64_t>(std::max(0.0, n));
}

std::uint64_t grid_index(double t, double dt) {
  if (!(t >= 0.0) || !(dt > 0.0)) throw ConfigError("time must be >= 0 and dt > 0");
  const double q = t / dt;
  const double k = std::round(q);
  if (std::fabs(q - k) > 1e-9 * std::max(1.0, q)) throw ConfigError("time is not a grid time");
  if (k > static_cast<double>(kMaxSteps)) throw ConfigError("time exceeds 2^32 grid steps");
  return static_cast<std::uint64_t>(k);
}

namespace {

// p <= 2^-53 can never beat an open uniform; both barriers past this cut
// together still stay below 2^-53.
constexpr double kCut = 38.5;

// Barriers of a region as seen from x in a local coordinate (x_local,
// y_local); returns false when the region has no finite barrier.
struct Local {
  double x, y, lo, hi;
};

bool localize(const Space& space, const Region& region, double x, double y, Local& out) {
  switch (space.kind()) {
    case SpaceKind::line:
      switch (region.kind) {
        case RegionKind::open_interval:
        case RegionKind::closed_interval: out = {x, y, region.a, region.b}; return true;
        case RegionKind::ball: out = {x, y, region.center - region.radius, region.center + region.radius}; return true;
        default: return false;
      }
    case SpaceKind::circle: {
      if (region.kind != RegionKind::ball) return false;
      const double C = space.circumference();
      if (region.radius > C / 2.0) return false;
      auto signed_wrap = [C](double d) {
        d = std::fmod(d, C);
        if (d > C / 2.0) d -= C;
        if (d <= -C / 2.0) d += C;
        return d;
      };
      const double xl = signed_wrap(x - region.center);
      out = {xl, xl + signed_wrap(y - x), -region.radius, region.radius};
      return true;
    }
    case SpaceKind::gasket: return false;
  }
  return false;
}

}  // namespace

double crossing_probability(const Space& space, const Region& region, double x, double y, double var_dt) {
  Local l;
  if (!localize(space, region, x, y, l)) return 0.0;
  const double inv2 = 2.0 / var_dt;
  const double ea = std::isfinite(l.lo) ? (l.x - l.lo) * (l.y - l.lo) * inv2 : kInf;
  const double eb = std::isfinite(l.hi) ? (l.hi - l.x) * (l.hi - l.y) * inv2 : kInf;
  if (ea > kCut && eb > kCut) return 0.0;
  const double pa = std::exp(-ea);
  const double pb = std::exp(-eb);
  return 1.0 - (1.0 - pa) * (1.0 - pb);
}

bool step_exits(const Space& space, const Region& region, double x, double y, double var_dt, bool bridge,
                const PathStream& stream, std::uint64_t step) {
  if (!region.contains(space, y)) return true;
  if (!bridge || region.kind == RegionKind::whole) return false;
  const double p = crossing_probability(space, region, x, y, var_dt);
  if (p <= 0.0) return false;
  return stream.aux_uniform(step) < p;
}

// ---------------------------------------------------------------- walker

Walker::Walker(const ProcessModel& model, double x0, double dt, SeedId seed, std::uint32_t stream)
    : model_(&model),
      rng_(seed, stream),
      sd_(std::sqrt(model.scale() * dt)),
      var_dt_(model.scale() * dt),
      bridge_(model.bridge()),
      x_(x0),
      prev_(x0) {
  model.check_dt(dt);
  if (!model.in_state_space(x0)) throw ConfigError("start point is outside the state space of " + model.name());
}

void Walker::refill() {
  const std::uint64_t first = step_ + 1;
  if (model_->kind() == ModelKind::gasket_walk) rng_.fill_words(first, PathStream::kBatch, words_);
  else rng_.normals(first, PathStream::kBatch, buf_);
  fill_ = PathStream::kBatch;
  pos_ = 0;
}

double Walker::gasket_move() const {
  const auto& g = model_->space().graph();
  const auto v = static_cast<std::size_t>(prev_);
  const std::size_t deg = g.degree(v);
  // deg is 2 or 4, so the top bits split evenly
  const std::size_t slot = static_cast<std::size_t>((words_[pos_] >> 32) % deg);
  return static_cast<double>(g.neighbor(v, slot));
}

Path sample_path(const ProcessModel& model, double x0, double horizon, double dt, SeedId seed,
                 std::uint32_t stream) {
  if (!(horizon > 0.0) || !(dt > 0.0) || dt > horizon * (1.0 + 1e-12))
    throw ConfigError("sample_path needs horizon > 0 and 0 < dt <= horizon");
  const std::uint64_t n = grid_steps(horizon, dt);
  Walker w(model, x0, dt, seed, stream);
  Path p{model, dt, {}, kNever, seed, stream};
  p.states.reserve(n + 1);
  p.states.push_back(x0);
  for (std::uint64_t k = 1; k <= n; ++k) {
    w.advance();
    p.states.push_back(w.state());
  }
  p.zeta = w.zeta();
  return p;
}

Path restart_path(const ProcessModel& model, const Path& path, std::uint64_t s, double extension_horizon,
                  SeedId seed, std::uint32_t stream) {
  if (s >= path.states.size()) throw ConfigError("restart time beyond the path horizon");
  const double x = path.states[s];
  if (is_cemetery(x)) throw ConfigError("cannot restart from the cemetery");
  return sample_path(model, x, extension_horizon, path.dt, seed, stream);
}

// ---------------------------------------------------------------- dump

namespace {
template <class T>
void put_le(std::ostream& os, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw ConfigError("truncated path dump");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

constexpr char kMagic[8] = {'H', 'K', 'M', 'C', 'P', 'T', 'H', '1'};
}  // namespace

void write_path_dump(std::ostream& os, const std::vector<Path>& paths) {
  const std::uint64_t n_steps = paths.empty() ? 0 : paths.front().steps();
  for (const auto& p : paths)
    if (p.steps() != n_steps || p.dt != paths.front().dt || p.model.kind() != paths.front().model.kind())
      throw ConfigError("path dump needs paths of one model, dt and length");
  os.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(os, paths.empty() ? 0u : static_cast<std::uint32_t>(paths.front().model.kind()));
  put_le<std::uint32_t>(os, 0u);
  put_le<double>(os, paths.empty() ? 0.0 : paths.front().dt);
  put_le<std::uint64_t>(os, n_steps);
  put_le<std::uint64_t>(os, paths.size());
  for (const auto& p : paths)
    for (double x : p.states) put_le<double>(os, is_cemetery(x) ? kCemetery : x);
}

PathDump read_path_dump(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
    throw ConfigError("not a path dump");
  PathDump d;
  d.model_id = get_le<std::uint32_t>(is);
  (void)get_le<std::uint32_t>(is);
  d.dt = get_le<double>(is);
  d.n_steps = get_le<std::uint64_t>(is);
  d.n_paths = get_le<std::uint64_t>(is);
  d.states.resize(d.n_paths * (d.n_steps + 1));
  for (double& x : d.states) x = get_le<double>(is);
  return d;
}

}  // namespace hkmc
