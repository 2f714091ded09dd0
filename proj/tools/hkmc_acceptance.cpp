#include <cstdlib>
#include <iostream>
#include <string>

#include "hkmc/acceptance.hpp"

// usage: hkmc_acceptance [criterion ids...]
int main(int argc, char** argv) {
  hkmc::AcceptanceOptions opt;
  if (const char* s = std::getenv("HKMC_ACCEPTANCE_SEED")) opt.seed = std::strtoull(s, nullptr, 10);
  for (int i = 1; i < argc; ++i) opt.criteria.push_back(std::stoi(argv[i]));
  opt.on_result = [](const hkmc::CriterionResult& r) { std::cout << hkmc::format_result_line(r) << std::endl; };
  const auto res = hkmc::run_acceptance(opt);
  int failed = 0;
  for (const auto& r : res) failed += r.pass ? 0 : 1;
  std::cout << (res.size() - failed) << "/" << res.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
