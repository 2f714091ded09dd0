#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace hkmc {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  std::vector<std::pair<std::string, double>> metrics;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20140301;
  std::vector<int> criteria;  // empty: all ten
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

std::string format_result_line(const CriterionResult& r);

}  // namespace hkmc
