#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hkmc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thrown for configuration-level misuse (bad set kinds, mismatched models).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Level-L approximating graph of the Sierpinski gasket.
///
/// Vertices live on the triangular lattice with side 2^L; (i, j) are skew
/// coordinates so that the Euclidean position is 2^-L (i + j/2, j*sqrt(3)/2).
/// Squared lattice distances are the integers i^2 + i*j + j^2, which keeps
/// the metric exact up to one rounding in sqrt.
class GasketGraph {
public:
  explicit GasketGraph(int level);

  int level() const noexcept { return level_; }
  std::size_t size() const noexcept { return coords_.size(); }
  double edge_length() const noexcept { return edge_; }

  const std::array<std::int64_t, 2>& coords(std::size_t v) const { return coords_.at(v); }
  std::size_t degree(std::size_t v) const { return degree_.at(v); }
  std::size_t neighbor(std::size_t v, std::size_t slot) const { return neighbors_[v][slot]; }
  double distance(std::size_t u, std::size_t v) const;

  /// Address "w:c": w is the digit path (0 left, 1 right, 2 top) of the
  /// first level-L cell containing the vertex, c its corner within that cell.
  const std::string& address(std::size_t v) const { return address_.at(v); }
  std::optional<std::size_t> find_address(const std::string& addr) const;
  std::optional<std::size_t> find_coords(std::int64_t i, std::int64_t j) const;

  std::size_t left_corner() const { return *find_coords(0, 0); }
  std::size_t right_corner() const { return *find_coords(side_, 0); }
  std::size_t top_corner() const { return *find_coords(0, side_); }

private:
  int level_;
  std::int64_t side_;
  double edge_;
  std::vector<std::array<std::int64_t, 2>> coords_;
  std::vector<std::array<std::uint32_t, 4>> neighbors_;
  std::vector<std::uint8_t> degree_;
  std::vector<std::string> address_;
  std::map<std::array<std::int64_t, 2>, std::size_t> index_;
  std::map<std::string, std::size_t> by_address_;
};

enum class SpaceKind { line, circle, gasket };

/// Metric measure space of one built-in model. Points are doubles: a real
/// coordinate on the line, an arc coordinate in [0, C) on the circle, a
/// vertex index on the gasket.
class Space {
public:
  static Space line();
  static Space circle(double circumference);
  static Space gasket(int level);

  SpaceKind kind() const noexcept { return kind_; }
  double circumference() const noexcept { return circumference_; }
  const GasketGraph& graph() const;

  bool is_point(double x) const noexcept;
  double distance(double x, double y) const;
  /// mu(B(x, r)) with the strict ball.
  double ball_measure(double x, double r) const;
  /// Total mass, infinite for the line.
  double total_measure() const noexcept;
  std::optional<double> diameter() const;
  /// Wrap an arc coordinate into [0, C); identity elsewhere.
  double normalize(double x) const noexcept;

  friend bool operator==(const Space& a, const Space& b) noexcept {
    return a.kind_ == b.kind_ && a.circumference_ == b.circumference_ &&
           (a.kind_ != SpaceKind::gasket || a.gasket_->level() == b.gasket_->level());
  }

private:
  SpaceKind kind_ = SpaceKind::line;
  double circumference_ = 0.0;
  std::shared_ptr<const GasketGraph> gasket_;
};

enum class RegionKind { whole, open_interval, closed_interval, ball, vertex_set };

/// Set specification: intervals may have infinite endpoints; balls are open.
struct Region {
  RegionKind kind = RegionKind::whole;
  double a = -kInf;
  double b = kInf;
  double center = 0.0;
  double radius = kInf;
  std::vector<std::size_t> vertices;  // sorted, for vertex_set

  static Region whole() { return {}; }
  static Region open_interval(double a, double b);
  static Region closed_interval(double a, double b);
  static Region ball(double center, double radius);
  static Region vertex_set(std::vector<std::size_t> vertices);

  bool contains(const Space& space, double x) const;
  /// inf over y outside the set of d(x, y); +inf when the complement is empty.
  double distance_to_complement(const Space& space, double x) const;
  std::string describe() const;
};

bool ball_membership(const Space& space, double center, double r, double x);
bool inner_set_membership(const Space& space, const Region& U, double epsilon, double R, double x);

/// closure(B) subset of U, checked analytically for 1D kinds and by
/// exhaustive scan for vertex sets.
bool closure_contained(const Space& space, const Region& B, const Region& U);

/// A subset of B (support checks for indicator functions).
bool region_subset(const Space& space, const Region& A, const Region& B);

struct DoublingReport {
  double estimate = 0.0;
  double worst_center = 0.0;
  double worst_radius = 0.0;
  std::size_t violations = 0;  // zero or non-finite ball measures
};

DoublingReport volume_doubling_report(const Space& space, const std::vector<double>& centers,
                                      const std::vector<double>& radii, double R_max);

}  // namespace hkmc
