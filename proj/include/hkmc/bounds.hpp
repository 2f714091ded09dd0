#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hkmc/estimate.hpp"
#include "hkmc/scale.hpp"

namespace hkmc {

/// Upper-bound function F_t(x, y).
///   power:  c3 t^-a1 log(2 + 1/t)^a2 log(2 + t)^a3
///   volume: c4 nu(B(x, Psi^-1(t)))^-1/2 nu(B(y, Psi^-1(t)))^-1/2
/// with declared doubling constants (c_F, alpha_F).
class BoundFunction {
public:
  enum class Kind { power, volume };

  static BoundFunction power(double c3, double a1, double a2, double a3, double c_F, double alpha_F);
  static BoundFunction volume(double c4, Space space, ScaleFunction sf, double c_F, double alpha_F);

  Kind kind() const noexcept { return kind_; }
  double c_F() const noexcept { return c_F_; }
  double alpha_F() const noexcept { return alpha_F_; }
  double operator()(double t, double x, double y) const;
  /// Same function with the prefactor multiplied by `factor`.
  BoundFunction scaled(double factor) const;
  BoundFunction with_constants(double c_F, double alpha_F) const;
  /// inf over U x U of F_t. Power F does not depend on (x, y); volume F is
  /// minimized where the ball is largest, found on a grid of spacing
  /// 2^-10 diam(U) (all vertices on the gasket).
  double inf_over(const Space& space, const Region& U, double t) const;
  std::string describe() const;

private:
  Kind kind_ = Kind::power;
  double c_ = 1.0, a1_ = 0.0, a2_ = 0.0, a3_ = 0.0;
  double c_F_ = 1.0, alpha_F_ = 0.0;
  Space space_ = Space::line();
  ScaleFunction sf_ = ScaleFunction::power(2.0);
};

/// Points of U used for grid minimization: spacing 2^-10 diam(U) in 1D,
/// every vertex on the gasket.
std::vector<double> region_grid(const Space& space, const Region& U);

struct DbTuple {
  double t, x, y;
};

struct DbReport {
  bool pass = true;
  std::size_t checked = 0;
  std::size_t failures = 0;
  double worst = 0.0;  // max of (F_s(z,w) / F_t(x,y)) / bound
  DbTuple worst_first{0, 0, 0}, worst_second{0, 0, 0};
};

/// Checks F_s(z,w) / F_t(x,y) <= c_F ((t v Psi(d(x,z)) v Psi(d(y,w))) / s)^alpha_F
/// for every pair of grid tuples with s <= t.
DbReport db_psi_verify(const BoundFunction& F, const ScaleFunction& sf, const Space& space,
                       const std::vector<DbTuple>& grid);

/// F_t(x,y) exp(-c1 Phi(c2 d(x,y), t)).
double h_bound_eval(const BoundFunction& F, const ScaleFunction& sf, const Space& space, double c1, double c2, double t,
                    double x, double y);

enum class Provenance { input, displayed, chain, override_ };
const char* provenance_name(Provenance p);

struct LedgerEntry {
  std::string name;
  double value;
  Provenance provenance;
};

struct ChainInputs {
  double c_psi = 1, beta1 = 2, beta2 = 2;
  double c_F = 1, alpha_F = 0.5;
  double c = 1, gamma = 1;
  double epsilon = 0.25;  // localized bound
  double delta = 1;       // global bound
};

enum class DeriveMode { displayed, chain };

class ConstantLedger {
public:
  ChainInputs inputs;
  std::vector<LedgerEntry> entries;

  bool has(const std::string& name) const;
  double get(const std::string& name) const;  // throws ConfigError when absent
  void set(const std::string& name, double value, Provenance p);
  /// Every constant the localized bound needs is present and finite.
  bool complete() const;
  bool complete_global() const;
};

/// Builds the ledger. Displayed formulas are always applied once their
/// ingredients exist; in chain mode the undisplayed c_{eps,1}, c_{eps,3},
/// c_{eps,4} are evaluated from the proof's inequality steps. Overrides
/// replace any named constant before its dependents are computed.
ConstantLedger derive_constants(const ChainInputs& in, DeriveMode mode,
                                const std::map<std::string, double>& overrides = {});

void write_ledger_csv(std::ostream& os, const ConstantLedger& ledger);

/// Localized three-case bound on p_t(x, y), y in the eps R interior of U.
double localized_rhs(const ConstantLedger& ledger, const BoundFunction& F, const ScaleFunction& sf, const Space& space,
                     double R, const Region& U, double t, double x, double y);

/// Global two-case bound with c' and gamma'_delta = delta gamma / 40.
double global_rhs(const ConstantLedger& ledger, const BoundFunction& F, const ScaleFunction& sf, const Space& space,
                  double R, double t, double x, double y);

// Exit-time condition chain. Unused fields are NaN.
enum class ChainStep { c2_to_3, c3_to_4, c4_to_5, c5_to_6, c6_to_7, c7_to_2, c1p_to_2 };
const char* chain_step_name(ChainStep s);

struct ExitConstants {
  double epsilon;
  double delta;
  double c;
  double gamma;
};
ExitConstants exit_constants_none();

ExitConstants exit_chain_constants(ChainStep step, const ExitConstants& in, const ScaleFunction& sf,
                                   bool conservative = true);

struct MeanExitCriterion {
  double threshold;  // Psi(r) / (2 c_E)
  double bound;      // 1 - 1 / (c_E^2 c_psi 2^(beta2 + 1))
};

MeanExitCriterion mean_exit_criterion(double c_E, double c_psi, double beta2, const ScaleFunction& sf, double r);

struct DuRow {
  double t, x, left, right;
  double estimate, se, bound;
};

struct DuReport {
  bool pass = true;
  std::size_t violations = 0;
  double worst_slack = kInf;  // min of bound + 3 se - estimate
  std::vector<DuRow> rows;
};

/// P^U_t(x, A) <= int_A F_t(x, y) dmu(y) on every finest cell A of a dyadic
/// partition of U.
DuReport verify_du_condition(const BoundFunction& F, const ProcessModel& model, const Region& U, double R,
                             const ScaleFunction& sf, const std::vector<std::pair<double, double>>& t_x, int depth,
                             const Ensemble& ens);

struct PRow {
  double x, r, t;
  double estimate, se, bound;
};

struct PReport {
  bool pass = true;
  std::size_t violations = 0;
  double worst_slack = kInf;
  std::vector<PRow> rows;
};

/// P_x[tau_B(x,r) <= t] <= c exp(-Phi(gamma r, t)) over the grid.
PReport verify_p_condition(const ProcessModel& model, const Region& U, double R, const ScaleFunction& sf, double c,
                           double gamma, const std::vector<std::pair<double, double>>& x_r,
                           const std::vector<double>& times, const Ensemble& ens);

void write_du_csv(std::ostream& os, const DuReport& report);
void write_p_csv(std::ostream& os, const PReport& report);

}  // namespace hkmc
