#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hkmc/bounds.hpp"

namespace hkmc {

/// Configuration problems, one entry per offending field path.
class ConfigIssues : public ConfigError {
public:
  explicit ConfigIssues(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
  std::vector<std::string> issues_;
  static std::string join(const std::vector<std::string>& v);
};

/// Typed access into a JSON run configuration. Lookups never throw; every
/// problem is recorded with its dotted path and check() raises them all.
class ConfigReader {
public:
  explicit ConfigReader(nlohmann::json root);

  static ConfigReader from_file(const std::string& path);

  const nlohmann::json& root() const noexcept { return root_; }
  bool has(const std::string& path) const;

  double number(const std::string& path);
  double number(const std::string& path, double fallback);
  std::uint64_t count(const std::string& path);
  std::uint64_t count(const std::string& path, std::uint64_t fallback);
  std::vector<double> numbers(const std::string& path);
  std::vector<double> numbers(const std::string& path, std::vector<double> fallback);
  std::string text(const std::string& path, const std::string& fallback);
  bool flag(const std::string& path, bool fallback);

  Region region(const std::string& path);
  std::optional<Region> optional_region(const std::string& path);
  ProcessModel model(const std::string& path = "model");
  ScaleFunction scale(const std::string& path = "scale_function");
  BoundFunction bound(const std::string& path, const Space& space, const ScaleFunction& sf);

  /// Records a violation at `path`.
  void fail(const std::string& path, const std::string& message);
  /// Requires t / dt to be an integer for every t.
  void require_grid_times(const std::string& path, const std::vector<double>& times, double dt);
  bool ok() const noexcept { return issues_.empty(); }
  void check() const;

private:
  const nlohmann::json* find(const std::string& path) const;

  nlohmann::json root_;
  std::vector<std::string> issues_;
};

}  // namespace hkmc
