#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hkmc {

/// Space-time scaling function Psi together with its declared doubling
/// constants (c_psi, beta1, beta2).
class ScaleFunction {
public:
  enum class Kind { power, piecewise, tabulated };

  /// Psi(r) = r^beta, declared constants (1, beta, beta).
  static ScaleFunction power(double beta);
  /// Continuous piecewise power: r^{e_0} up to breakpoints[0], then each
  /// later piece continues as Psi(b_i) (r / b_i)^{e_{i+1}}.
  static ScaleFunction piecewise(std::vector<double> breakpoints, std::vector<double> exponents, double c_psi,
                                 double beta1, double beta2);
  /// Monotone cubic (Fritsch-Carlson) interpolation in log-log coordinates
  /// through (r_i, psi_i); power-law extrapolation with beta1 below the
  /// table and beta2 above.
  static ScaleFunction tabulated(std::vector<double> r, std::vector<double> psi, double c_psi, double beta1,
                                 double beta2);

  Kind kind() const noexcept { return kind_; }
  double c_psi() const noexcept { return c_psi_; }
  double beta1() const noexcept { return beta1_; }
  double beta2() const noexcept { return beta2_; }
  /// Exponent of a pure power Psi; 0 otherwise.
  double power_beta() const noexcept { return kind_ == Kind::power ? beta1_ : 0.0; }

  double psi(double r) const;
  double psi_inv(double t) const;
  std::string describe() const;

private:
  double log_psi(double log_r) const;
  double log_psi_inv(double log_t) const;

  Kind kind_ = Kind::power;
  double c_psi_ = 1.0;
  double beta1_ = 2.0;
  double beta2_ = 2.0;
  std::vector<double> knots_;  // log r breakpoints (piecewise) or table (tabulated)
  std::vector<double> exps_;   // piecewise exponents
  std::vector<double> logv_;   // log Psi at knots
  std::vector<double> slope_;  // tabulated: derivative of log Psi in log r at knots
};

double psi_eval(const ScaleFunction& sf, double r);

struct DoublingCheck {
  bool pass = true;
  double min_lower_ratio = 0.0;  // min of (Psi(R)/Psi(r)) / (R/r)^beta1
  double max_upper_ratio = 0.0;  // max of (Psi(R)/Psi(r)) / (R/r)^beta2
  std::size_t failures = 0;
  std::pair<double, double> worst_pair{0.0, 0.0};
};

/// Checks c^-1 (R/r)^b1 <= Psi(R)/Psi(r) <= c (R/r)^b2 for each (r, R).
DoublingCheck psi_doubling_verify(const ScaleFunction& sf, const std::vector<std::pair<double, double>>& grid);

/// sup_{r>0} { R/r - t/Psi(r) }, evaluated numerically.
double phi_eval(const ScaleFunction& sf, double R, double t);
double phi_power_closed_form(double beta, double R, double t);

/// (c_psi 2^beta1)^{-1/(beta1-1)}, the prefactor of the lower sandwich bound.
double phi_lower_prefactor(const ScaleFunction& sf);
double phi_lower_bound(const ScaleFunction& sf, double R, double t);
double phi_upper_bound(const ScaleFunction& sf, double R, double t);

struct SandwichCheck {
  bool pass = true;
  std::size_t points = 0;
  std::size_t violations = 0;
  double worst_lower_slack = 0.0;        // min of Phi - lower
  double worst_upper_slack = 0.0;        // min of upper - Phi
  double worst_homogeneity_slack = 0.0;  // min of Phi(aR,t) - a Phi(R,t)
};

SandwichCheck phi_sandwich_check(const ScaleFunction& sf, const std::vector<std::pair<double, double>>& grid,
                                 const std::vector<double>& scalings = {1.0, 2.0, 5.0, 10.0});

}  // namespace hkmc
