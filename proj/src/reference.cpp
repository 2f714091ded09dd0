#include "hkmc/reference.hpp"

#include <cmath>

namespace hkmc::reference {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr int kImages = 40;
}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double gaussian_kernel(double t, double x, double y, double scale) {
  const double v = scale * t;
  return std::exp(-(y - x) * (y - x) / (2.0 * v)) / std::sqrt(2.0 * kPi * v);
}

double gaussian_interval(double t, double x, double a, double b, double scale) {
  const double s = std::sqrt(scale * t);
  return normal_cdf((b - x) / s) - normal_cdf((a - x) / s);
}

double dirichlet_kernel(double t, double x, double y, double a, double b, double scale) {
  const double L = b - a;
  double s = 0.0;
  for (int n = -kImages; n <= kImages; ++n) {
    s += gaussian_kernel(t, x, y + 2.0 * n * L, scale);
    s -= gaussian_kernel(t, 2.0 * a - x, y + 2.0 * n * L, scale);
  }
  return std::max(0.0, s);
}

double dirichlet_cell_average(double t, double x, double c, double d, double a, double b, double scale) {
  const double L = b - a;
  double s = 0.0;
  for (int n = -kImages; n <= kImages; ++n) {
    s += gaussian_interval(t, x, c + 2.0 * n * L, d + 2.0 * n * L, scale);
    s -= gaussian_interval(t, 2.0 * a - x, c + 2.0 * n * L, d + 2.0 * n * L, scale);
  }
  return s / (d - c);
}

double exit_prob_series(double t) {
  double survive = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double m = 2.0 * k + 1.0;
    const double term = 4.0 / kPi / m * std::exp(-m * m * kPi * kPi * t / 8.0);
    survive += (k % 2 ? -term : term);
    if (term < 1e-18) break;
  }
  return 1.0 - survive;
}

double capped_mean_series(double cap) {
  // int_0^cap P(tau > s) ds, summed in pairs from the tail forward
  double s = 0.0;
  for (int k = 2000000; k >= 0; --k) {
    const double m = 2.0 * k + 1.0;
    const double lam = m * m * kPi * kPi / 8.0;
    const double term = 4.0 / kPi / m * (-std::expm1(-lam * cap)) / lam;
    s += (k % 2 ? -term : term);
  }
  return s;
}

}  // namespace hkmc::reference
