#include "hkmc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hkmc {

using nlohmann::json;

ConfigIssues::ConfigIssues(std::vector<std::string> issues) : ConfigError(join(issues)), issues_(std::move(issues)) {}

std::string ConfigIssues::join(const std::vector<std::string>& v) {
  std::string s = "configuration invalid:";
  for (const auto& e : v) s += "\n  " + e;
  return s;
}

ConfigReader::ConfigReader(json root) : root_(std::move(root)) {
  if (!root_.is_object()) {
    root_ = json::object();
    issues_.push_back("<root>: configuration must be a JSON object");
  }
}

ConfigReader ConfigReader::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigIssues({"--config: cannot open " + path});
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigIssues({"--config: " + path + " is not valid JSON (" + e.what() + ")"});
  }
  return ConfigReader(std::move(j));
}

const json* ConfigReader::find(const std::string& path) const {
  const json* cur = &root_;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    const std::size_t dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (!cur->is_object()) return nullptr;
    auto it = cur->find(key);
    if (it == cur->end()) return nullptr;
    cur = &*it;
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  return cur;
}

bool ConfigReader::has(const std::string& path) const { return find(path) != nullptr; }

void ConfigReader::fail(const std::string& path, const std::string& message) {
  issues_.push_back(path + ": " + message);
}

void ConfigReader::check() const {
  if (!issues_.empty()) throw ConfigIssues(issues_);
}

double ConfigReader::number(const std::string& path) {
  const json* j = find(path);
  if (!j) {
    fail(path, "required number is missing");
    return std::nan("");
  }
  if (!j->is_number()) {
    fail(path, "must be a number");
    return std::nan("");
  }
  const double v = j->get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

double ConfigReader::number(const std::string& path, double fallback) { return has(path) ? number(path) : fallback; }

std::uint64_t ConfigReader::count(const std::string& path) {
  const json* j = find(path);
  if (!j) {
    fail(path, "required integer is missing");
    return 0;
  }
  if (!j->is_number_integer() || j->get<long long>() < 0) {
    fail(path, "must be a non-negative integer");
    return 0;
  }
  return j->get<std::uint64_t>();
}

std::uint64_t ConfigReader::count(const std::string& path, std::uint64_t fallback) {
  return has(path) ? count(path) : fallback;
}

std::vector<double> ConfigReader::numbers(const std::string& path) {
  const json* j = find(path);
  std::vector<double> out;
  if (!j) {
    fail(path, "required list of numbers is missing");
    return out;
  }
  if (!j->is_array() || j->empty()) {
    fail(path, "must be a non-empty list of numbers");
    return out;
  }
  for (std::size_t i = 0; i < j->size(); ++i) {
    if (!(*j)[i].is_number()) {
      fail(path + "[" + std::to_string(i) + "]", "must be a number");
      continue;
    }
    out.push_back((*j)[i].get<double>());
  }
  return out;
}

std::vector<double> ConfigReader::numbers(const std::string& path, std::vector<double> fallback) {
  return has(path) ? numbers(path) : fallback;
}

std::string ConfigReader::text(const std::string& path, const std::string& fallback) {
  const json* j = find(path);
  if (!j) return fallback;
  if (!j->is_string()) {
    fail(path, "must be a string");
    return fallback;
  }
  return j->get<std::string>();
}

bool ConfigReader::flag(const std::string& path, bool fallback) {
  const json* j = find(path);
  if (!j) return fallback;
  if (!j->is_boolean()) {
    fail(path, "must be true or false");
    return fallback;
  }
  return j->get<bool>();
}

void ConfigReader::require_grid_times(const std::string& path, const std::vector<double>& times, double dt) {
  if (!(dt > 0.0)) return;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double q = times[i] / dt;
    if (!(times[i] > 0.0)) fail(path + "[" + std::to_string(i) + "]", "must be positive");
    else if (std::fabs(q - std::round(q)) > 1e-9 * std::max(1.0, q))
      fail(path + "[" + std::to_string(i) + "]", "is not a multiple of estimator.dt");
  }
}

std::optional<Region> ConfigReader::optional_region(const std::string& path) {
  if (!has(path)) return std::nullopt;
  return region(path);
}

Region ConfigReader::region(const std::string& path) {
  const json* j = find(path);
  if (!j) {
    fail(path, "required region is missing");
    return Region::whole();
  }
  if (j->is_string() && j->get<std::string>() == "whole") return Region::whole();
  if (!j->is_object()) {
    fail(path, "region must be \"whole\" or an object with a kind");
    return Region::whole();
  }
  const std::string kind = text(path + ".kind", "");
  const std::size_t before = issues_.size();
  try {
    if (kind == "whole") return Region::whole();
    if (kind == "open_interval" || kind == "closed_interval") {
      const double a = number(path + ".a"), b = number(path + ".b");
      if (issues_.size() != before) return Region::whole();
      return kind == "open_interval" ? Region::open_interval(a, b) : Region::closed_interval(a, b);
    }
    if (kind == "ball") {
      const double c = number(path + ".center"), r = number(path + ".radius");
      if (issues_.size() != before) return Region::whole();
      return Region::ball(c, r);
    }
    if (kind == "vertex_set") {
      std::vector<std::size_t> v;
      for (double x : numbers(path + ".vertices")) {
        if (x < 0 || x != std::floor(x)) fail(path + ".vertices", "vertex indices must be non-negative integers");
        else v.push_back(static_cast<std::size_t>(x));
      }
      if (issues_.size() != before) return Region::whole();
      return Region::vertex_set(std::move(v));
    }
  } catch (const ConfigError& e) {
    fail(path, e.what());
    return Region::whole();
  }
  fail(path + ".kind", "unknown region kind '" + kind +
                           "' (whole, open_interval, closed_interval, ball, vertex_set)");
  return Region::whole();
}

ProcessModel ConfigReader::model(const std::string& path) {
  if (!has(path)) {
    fail(path, "required model descriptor is missing");
    return ProcessModel::brownian_line();
  }
  const std::string kind = text(path + ".kind", "");
  const double scale = number(path + ".scale", 1.0);
  const bool bridge = flag(path + ".bridge", false);
  const std::size_t before = issues_.size();
  try {
    if (kind == "brownian_line") return ProcessModel::brownian_line(scale, bridge);
    if (kind == "brownian_killed") {
      const double a = number(path + ".a"), b = number(path + ".b");
      if (issues_.size() != before) return ProcessModel::brownian_line();
      return ProcessModel::brownian_killed(a, b, scale, bridge);
    }
    if (kind == "brownian_circle") {
      const double c = number(path + ".circumference");
      if (issues_.size() != before) return ProcessModel::brownian_line();
      return ProcessModel::brownian_circle(c, scale, bridge);
    }
    if (kind == "gasket_walk") {
      const auto level = count(path + ".level");
      if (issues_.size() != before) return ProcessModel::brownian_line();
      return ProcessModel::gasket_walk(static_cast<int>(level));
    }
  } catch (const ConfigError& e) {
    fail(path, e.what());
    return ProcessModel::brownian_line();
  }
  fail(path + ".kind", "unknown model '" + kind + "' (brownian_line, brownian_killed, brownian_circle, gasket_walk)");
  return ProcessModel::brownian_line();
}

ScaleFunction ConfigReader::scale(const std::string& path) {
  if (!has(path)) {
    fail(path, "required scale function descriptor is missing");
    return ScaleFunction::power(2.0);
  }
  const std::string kind = text(path + ".kind", "");
  const std::size_t before = issues_.size();
  try {
    if (kind == "power") {
      const double beta = number(path + ".beta");
      if (issues_.size() != before) return ScaleFunction::power(2.0);
      return ScaleFunction::power(beta);
    }
    if (kind == "piecewise" || kind == "tabulated") {
      const bool pw = kind == "piecewise";
      auto xs = numbers(path + (pw ? ".breakpoints" : ".r"));
      auto ys = numbers(path + (pw ? ".exponents" : ".psi"));
      const double c = number(path + ".c_psi"), b1 = number(path + ".beta1"), b2 = number(path + ".beta2");
      if (issues_.size() != before) return ScaleFunction::power(2.0);
      return pw ? ScaleFunction::piecewise(xs, ys, c, b1, b2) : ScaleFunction::tabulated(xs, ys, c, b1, b2);
    }
  } catch (const ConfigError& e) {
    fail(path, e.what());
    return ScaleFunction::power(2.0);
  }
  fail(path + ".kind", "unknown scale function '" + kind + "' (power, piecewise, tabulated)");
  return ScaleFunction::power(2.0);
}

BoundFunction ConfigReader::bound(const std::string& path, const Space& space, const ScaleFunction& sf) {
  const BoundFunction dummy = BoundFunction::power(1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
  if (!has(path)) {
    fail(path, "required bound function descriptor is missing");
    return dummy;
  }
  const std::string kind = text(path + ".kind", "");
  const std::size_t before = issues_.size();
  const double cF = number(path + ".c_F"), aF = number(path + ".alpha_F");
  try {
    if (kind == "power") {
      const double c3 = number(path + ".c3"), a1 = number(path + ".a1", 0.0), a2 = number(path + ".a2", 0.0),
                   a3 = number(path + ".a3", 0.0);
      if (issues_.size() != before) return dummy;
      return BoundFunction::power(c3, a1, a2, a3, cF, aF);
    }
    if (kind == "volume") {
      const double c4 = number(path + ".c4");
      if (issues_.size() != before) return dummy;
      return BoundFunction::volume(c4, space, sf, cF, aF);
    }
  } catch (const ConfigError& e) {
    fail(path, e.what());
    return dummy;
  }
  fail(path + ".kind", "unknown bound function '" + kind + "' (power, volume)");
  return dummy;
}

}  // namespace hkmc
