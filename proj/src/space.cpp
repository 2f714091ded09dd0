#include "hkmc/space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hkmc {

// ---------------------------------------------------------------- gasket

GasketGraph::GasketGraph(int level) : level_(level) {
  if (level < 0 || level > 12) throw ConfigError("gasket level must lie in [0, 12]");
  side_ = std::int64_t{1} << level;
  edge_ = std::ldexp(1.0, -level);

  std::vector<std::vector<std::uint32_t>> adj;
  auto vertex_of = [&](std::int64_t i, std::int64_t j, const std::string& addr) {
    const std::array<std::int64_t, 2> key{i, j};
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    const std::size_t v = coords_.size();
    coords_.push_back(key);
    address_.push_back(addr);
    adj.emplace_back();
    index_.emplace(key, v);
    by_address_.emplace(addr, v);
    return v;
  };
  auto link = [&](std::size_t u, std::size_t v) {
    auto& au = adj[u];
    if (std::find(au.begin(), au.end(), v) == au.end()) {
      au.push_back(static_cast<std::uint32_t>(v));
      adj[v].push_back(static_cast<std::uint32_t>(u));
    }
  };

  // Depth-first over cells in digit order; a vertex takes the address of the
  // first cell that reaches it.
  struct Cell {
    std::int64_t i, j, size;
    std::string word;
  };
  std::vector<Cell> stack{{0, 0, side_, ""}};
  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    if (c.size == 1) {
      const std::string w = c.word.empty() ? std::string("-") : c.word;
      const std::size_t v0 = vertex_of(c.i, c.j, w + ":0");
      const std::size_t v1 = vertex_of(c.i + 1, c.j, w + ":1");
      const std::size_t v2 = vertex_of(c.i, c.j + 1, w + ":2");
      link(v0, v1);
      link(v1, v2);
      link(v2, v0);
      continue;
    }
    const std::int64_t h = c.size / 2;
    // pushed in reverse so that digit 0 is expanded first
    stack.push_back({c.i, c.j + h, h, c.word + "2"});
    stack.push_back({c.i + h, c.j, h, c.word + "1"});
    stack.push_back({c.i, c.j, h, c.word + "0"});
  }

  neighbors_.resize(coords_.size());
  degree_.resize(coords_.size());
  for (std::size_t v = 0; v < coords_.size(); ++v) {
    auto& a = adj[v];
    std::sort(a.begin(), a.end());
    degree_[v] = static_cast<std::uint8_t>(a.size());
    neighbors_[v].fill(static_cast<std::uint32_t>(v));
    std::copy(a.begin(), a.end(), neighbors_[v].begin());
  }
}

double GasketGraph::distance(std::size_t u, std::size_t v) const {
  const auto& p = coords_.at(u);
  const auto& q = coords_.at(v);
  const std::int64_t di = p[0] - q[0];
  const std::int64_t dj = p[1] - q[1];
  const std::int64_t n2 = di * di + di * dj + dj * dj;
  return std::sqrt(static_cast<double>(n2)) * edge_;
}

std::optional<std::size_t> GasketGraph::find_address(const std::string& addr) const {
  auto it = by_address_.find(addr);
  if (it != by_address_.end()) return it->second;
  // Any cell/corner pair names a vertex, not only the canonical one.
  const auto colon = addr.find(':');
  if (colon == std::string::npos || colon + 2 != addr.size()) return std::nullopt;
  const std::string word = addr.substr(0, colon);
  const char corner = addr[colon + 1];
  if (corner < '0' || corner > '2') return std::nullopt;
  if (word != "-" && static_cast<int>(word.size()) != level_) return std::nullopt;
  if (word == "-" && level_ != 0) return std::nullopt;
  std::int64_t i = 0, j = 0, h = side_;
  if (word != "-") {
    for (char d : word) {
      h /= 2;
      if (d == '1') i += h;
      else if (d == '2') j += h;
      else if (d != '0') return std::nullopt;
    }
  }
  if (corner == '1') ++i;
  if (corner == '2') ++j;
  return find_coords(i, j);
}

std::optional<std::size_t> GasketGraph::find_coords(std::int64_t i, std::int64_t j) const {
  auto it = index_.find({i, j});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------- space

Space Space::line() { return Space{}; }

Space Space::circle(double circumference) {
  if (!(circumference > 0.0) || !std::isfinite(circumference))
    throw ConfigError("circle circumference must be positive and finite");
  Space s;
  s.kind_ = SpaceKind::circle;
  s.circumference_ = circumference;
  return s;
}

Space Space::gasket(int level) {
  Space s;
  s.kind_ = SpaceKind::gasket;
  s.gasket_ = std::make_shared<const GasketGraph>(level);
  return s;
}

const GasketGraph& Space::graph() const {
  if (kind_ != SpaceKind::gasket) throw ConfigError("space is not a gasket");
  return *gasket_;
}

bool Space::is_point(double x) const noexcept {
  switch (kind_) {
    case SpaceKind::line: return std::isfinite(x);
    case SpaceKind::circle: return x >= 0.0 && x < circumference_;
    case SpaceKind::gasket:
      return x >= 0.0 && x < static_cast<double>(gasket_->size()) && x == std::floor(x);
  }
  return false;
}

double Space::normalize(double x) const noexcept {
  if (kind_ != SpaceKind::circle) return x;
  double y = std::fmod(x, circumference_);
  if (y < 0.0) y += circumference_;
  if (y >= circumference_) y = 0.0;
  return y;
}

double Space::distance(double x, double y) const {
  switch (kind_) {
    case SpaceKind::line: return std::fabs(x - y);
    case SpaceKind::circle: {
      const double d = std::fabs(x - y);
      return std::min(d, circumference_ - d);
    }
    case SpaceKind::gasket:
      return gasket_->distance(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
  }
  return kInf;
}

double Space::ball_measure(double x, double r) const {
  switch (kind_) {
    case SpaceKind::line: return 2.0 * r;
    case SpaceKind::circle: return std::min(2.0 * r, circumference_);
    case SpaceKind::gasket: {
      const auto& g = *gasket_;
      std::size_t count = 0;
      for (std::size_t v = 0; v < g.size(); ++v)
        if (g.distance(static_cast<std::size_t>(x), v) < r) ++count;
      return static_cast<double>(count) / static_cast<double>(g.size());
    }
  }
  return 0.0;
}

double Space::total_measure() const noexcept {
  switch (kind_) {
    case SpaceKind::line: return kInf;
    case SpaceKind::circle: return circumference_;
    case SpaceKind::gasket: return 1.0;
  }
  return 0.0;
}

std::optional<double> Space::diameter() const {
  switch (kind_) {
    case SpaceKind::line: return std::nullopt;
    case SpaceKind::circle: return circumference_ / 2.0;
    case SpaceKind::gasket: return 1.0;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- regions

Region Region::open_interval(double a, double b) {
  if (!(a < b)) throw ConfigError("interval needs a < b");
  Region r;
  r.kind = RegionKind::open_interval;
  r.a = a;
  r.b = b;
  return r;
}

Region Region::closed_interval(double a, double b) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b))
    throw ConfigError("closed interval needs finite a <= b");
  Region r;
  r.kind = RegionKind::closed_interval;
  r.a = a;
  r.b = b;
  return r;
}

Region Region::ball(double center, double radius) {
  if (!(radius > 0.0)) throw ConfigError("ball radius must be positive");
  Region r;
  r.kind = RegionKind::ball;
  r.center = center;
  r.radius = radius;
  return r;
}

Region Region::vertex_set(std::vector<std::size_t> vertices) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  Region r;
  r.kind = RegionKind::vertex_set;
  r.vertices = std::move(vertices);
  return r;
}

namespace {
void require_kind(const Space& space, const Region& region) {
  const bool ok = [&] {
    switch (region.kind) {
      case RegionKind::whole:
      case RegionKind::ball: return true;
      case RegionKind::open_interval:
      case RegionKind::closed_interval: return space.kind() == SpaceKind::line;
      case RegionKind::vertex_set: return space.kind() == SpaceKind::gasket;
    }
    return false;
  }();
  if (!ok) throw ConfigError("set kind " + region.describe() + " is undefined on this space");
}
}  // namespace

bool Region::contains(const Space& space, double x) const {
  if (std::isnan(x)) return false;
  switch (kind) {
    case RegionKind::whole: return true;
    case RegionKind::open_interval: require_kind(space, *this); return a < x && x < b;
    case RegionKind::closed_interval: require_kind(space, *this); return a <= x && x <= b;
    case RegionKind::ball: return space.distance(center, x) < radius;
    case RegionKind::vertex_set:
      require_kind(space, *this);
      return std::binary_search(vertices.begin(), vertices.end(), static_cast<std::size_t>(x));
  }
  return false;
}

double Region::distance_to_complement(const Space& space, double x) const {
  require_kind(space, *this);
  if (!contains(space, x)) return 0.0;
  switch (space.kind()) {
    case SpaceKind::line:
      switch (kind) {
        case RegionKind::whole: return kInf;
        case RegionKind::open_interval:
        case RegionKind::closed_interval: return std::min(x - a, b - x);
        case RegionKind::ball: return radius - std::fabs(x - center);
        default: break;
      }
      break;
    case SpaceKind::circle:
      if (kind == RegionKind::whole) return kInf;
      // the complement {d(center, y) >= radius} is empty once radius > C/2
      if (radius > space.circumference() / 2.0) return kInf;
      return radius - space.distance(center, x);
    case SpaceKind::gasket: {
      const auto& g = space.graph();
      double best = kInf;
      for (std::size_t v = 0; v < g.size(); ++v)
        if (!contains(space, static_cast<double>(v)))
          best = std::min(best, g.distance(static_cast<std::size_t>(x), v));
      return best;
    }
  }
  throw ConfigError("undefined set kind");
}

std::string Region::describe() const {
  std::ostringstream os;
  switch (kind) {
    case RegionKind::whole: os << "whole"; break;
    case RegionKind::open_interval: os << "(" << a << "," << b << ")"; break;
    case RegionKind::closed_interval: os << "[" << a << "," << b << "]"; break;
    case RegionKind::ball: os << "ball(" << center << "," << radius << ")"; break;
    case RegionKind::vertex_set: os << "vertices[" << vertices.size() << "]"; break;
  }
  return os.str();
}

bool ball_membership(const Space& space, double center, double r, double x) {
  if (!(r > 0.0)) throw ConfigError("ball radius must be positive");
  return space.distance(center, x) < r;
}

bool inner_set_membership(const Space& space, const Region& U, double epsilon, double R, double x) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1)");
  if (!(R > 0.0)) throw ConfigError("R must be positive");
  return U.distance_to_complement(space, x) > epsilon * R;
}

namespace {
// closure of a 1D region as [lo, hi]
std::pair<double, double> closure_1d(const Region& r) {
  switch (r.kind) {
    case RegionKind::whole: return {-kInf, kInf};
    case RegionKind::open_interval:
    case RegionKind::closed_interval: return {r.a, r.b};
    case RegionKind::ball: return {r.center - r.radius, r.center + r.radius};
    default: break;
  }
  throw ConfigError("not a 1D region");
}
}  // namespace

bool closure_contained(const Space& space, const Region& B, const Region& U) {
  require_kind(space, B);
  require_kind(space, U);
  if (U.kind == RegionKind::whole) return true;
  switch (space.kind()) {
    case SpaceKind::line: {
      const auto [blo, bhi] = closure_1d(B);
      const auto [ulo, uhi] = closure_1d(U);
      if (U.kind == RegionKind::closed_interval) return ulo <= blo && bhi <= uhi;
      const bool left = std::isinf(ulo) ? true : ulo < blo;
      const bool right = std::isinf(uhi) ? true : bhi < uhi;
      return left && right;
    }
    case SpaceKind::circle: {
      const double half = space.circumference() / 2.0;
      if (U.radius > half) return true;  // U is the whole circle
      if (B.kind == RegionKind::whole) return false;
      return space.distance(B.center, U.center) + B.radius < U.radius;
    }
    case SpaceKind::gasket: {
      const auto& g = space.graph();
      for (std::size_t v = 0; v < g.size(); ++v) {
        const double p = static_cast<double>(v);
        if (B.contains(space, p) && !U.contains(space, p)) return false;
      }
      return true;
    }
  }
  return false;
}

bool region_subset(const Space& space, const Region& A, const Region& B) {
  require_kind(space, A);
  require_kind(space, B);
  if (B.kind == RegionKind::whole) return true;
  switch (space.kind()) {
    case SpaceKind::line: {
      if (A.kind == RegionKind::whole) return false;
      const auto [alo, ahi] = closure_1d(A);
      const auto [blo, bhi] = closure_1d(B);
      const bool a_closed = A.kind == RegionKind::closed_interval;
      const bool b_closed = B.kind == RegionKind::closed_interval;
      // an endpoint of A that belongs to A must belong to B
      const bool left = (a_closed && !b_closed) ? blo < alo : blo <= alo;
      const bool right = (a_closed && !b_closed) ? ahi < bhi : ahi <= bhi;
      return left && right;
    }
    case SpaceKind::circle:
      if (A.kind == RegionKind::whole) return B.radius > space.circumference() / 2.0;
      if (B.radius > space.circumference() / 2.0) return true;
      return space.distance(A.center, B.center) + A.radius <= B.radius;
    case SpaceKind::gasket: {
      const auto& g = space.graph();
      for (std::size_t v = 0; v < g.size(); ++v) {
        const double p = static_cast<double>(v);
        if (A.contains(space, p) && !B.contains(space, p)) return false;
      }
      return true;
    }
  }
  return false;
}

DoublingReport volume_doubling_report(const Space& space, const std::vector<double>& centers,
                                      const std::vector<double>& radii, double R_max) {
  if (centers.empty() || radii.empty()) throw ConfigError("doubling report needs centers and radii");
  DoublingReport rep;
  for (double x : centers) {
    for (double r : radii) {
      if (!(r > 0.0) || !(r < R_max)) throw ConfigError("doubling radii must lie in (0, R_max)");
      const double small = space.ball_measure(x, r);
      const double big = space.ball_measure(x, 2.0 * r);
      if (!(small > 0.0) || !std::isfinite(big)) {
        ++rep.violations;
        continue;
      }
      const double ratio = big / small;
      if (ratio > rep.estimate) {
        rep.estimate = ratio;
        rep.worst_center = x;
        rep.worst_radius = r;
      }
    }
  }
  return rep;
}

}  // namespace hkmc
