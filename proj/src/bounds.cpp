#include "hkmc/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "hkmc/csv.hpp"

namespace hkmc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

double min_pow(double a, double b1, double b2) { return std::min(std::pow(a, b1), std::pow(a, b2)); }

// sup_{u >= 1} u^alpha exp(-A min_k (a u)^{1/(beta_k - 1)}), on a log grid
// followed by golden-section refinement around the best node.
double sup_power_decay(double alpha, double a, double A, double b1, double b2) {
  const double la = std::log(a);
  auto f = [&](double l) {
    const double e = std::min(std::exp((la + l) / (b1 - 1.0)), std::exp((la + l) / (b2 - 1.0)));
    return alpha * l - A * e;
  };
  double L = 1.0;
  double best = f(0.0);
  for (int it = 0; it < 200; ++it) {
    const double fl = f(L);
    best = std::max(best, fl);
    if (fl < best - 60.0 && f(L * 1.01) < fl) break;
    L *= 2.0;
  }
  constexpr int n = 4096;
  int arg = 0;
  double fmax = -kInf;
  for (int i = 0; i <= n; ++i) {
    const double v = f(L * i / n);
    if (v > fmax) {
      fmax = v;
      arg = i;
    }
  }
  double lo = L * std::max(0, arg - 1) / n, hi = L * std::min(n, arg + 1) / n;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  fmax = std::max({fmax, fc, fd});
  // tiny relative pad so rounding in the search cannot undercut the sup
  return std::exp(fmax) * (1.0 + 1e-9);
}

}  // namespace

BoundFunction BoundFunction::power(double c3, double a1, double a2, double a3, double c_F, double alpha_F) {
  require(c3 > 0.0, "power F needs c3 > 0");
  require(std::isfinite(a1) && std::isfinite(a2) && std::isfinite(a3), "power F exponents must be finite");
  require(c_F > 0.0 && alpha_F >= 0.0, "declared c_F > 0 and alpha_F >= 0 required");
  BoundFunction F;
  F.kind_ = Kind::power;
  F.c_ = c3;
  F.a1_ = a1;
  F.a2_ = a2;
  F.a3_ = a3;
  F.c_F_ = c_F;
  F.alpha_F_ = alpha_F;
  return F;
}

BoundFunction BoundFunction::volume(double c4, Space space, ScaleFunction sf, double c_F, double alpha_F) {
  require(c4 > 0.0, "volume F needs c4 > 0");
  require(c_F > 0.0 && alpha_F >= 0.0, "declared c_F > 0 and alpha_F >= 0 required");
  BoundFunction F;
  F.kind_ = Kind::volume;
  F.c_ = c4;
  F.c_F_ = c_F;
  F.alpha_F_ = alpha_F;
  F.space_ = std::move(space);
  F.sf_ = std::move(sf);
  return F;
}

double BoundFunction::operator()(double t, double x, double y) const {
  if (kind_ == Kind::power)
    return c_ * std::pow(t, -a1_) * std::pow(std::log(2.0 + 1.0 / t), a2_) * std::pow(std::log(2.0 + t), a3_);
  const double rho = sf_.psi_inv(t);
  return c_ / std::sqrt(space_.ball_measure(x, rho) * space_.ball_measure(y, rho));
}

BoundFunction BoundFunction::scaled(double factor) const {
  BoundFunction F = *this;
  F.c_ *= factor;
  return F;
}

BoundFunction BoundFunction::with_constants(double c_F, double alpha_F) const {
  BoundFunction F = *this;
  F.c_F_ = c_F;
  F.alpha_F_ = alpha_F;
  return F;
}

double BoundFunction::inf_over(const Space& space, const Region& U, double t) const {
  if (kind_ == Kind::power) return (*this)(t, 0.0, 0.0);
  const double rho = sf_.psi_inv(t);
  double vmax = 0.0;
  for (double x : region_grid(space, U)) vmax = std::max(vmax, space_.ball_measure(x, rho));
  return c_ / vmax;
}

std::string BoundFunction::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::power)
    os << "power(c3=" << c_ << ", a1=" << a1_ << ", a2=" << a2_ << ", a3=" << a3_ << ")";
  else
    os << "volume(c4=" << c_ << ", psi=" << sf_.describe() << ")";
  os << " c_F=" << c_F_ << " alpha_F=" << alpha_F_;
  return os.str();
}

std::vector<double> region_grid(const Space& space, const Region& U) {
  std::vector<double> pts;
  if (space.kind() == SpaceKind::gasket) {
    const auto& g = space.graph();
    for (std::size_t v = 0; v < g.size(); ++v)
      if (U.contains(space, static_cast<double>(v))) pts.push_back(static_cast<double>(v));
    return pts;
  }
  double lo, hi;
  bool open = true;
  switch (U.kind) {
    case RegionKind::open_interval:
    case RegionKind::closed_interval:
      lo = U.a;
      hi = U.b;
      open = U.kind == RegionKind::open_interval;
      break;
    case RegionKind::ball:
      lo = U.center - U.radius;
      hi = U.center + U.radius;
      if (space.kind() == SpaceKind::circle && U.radius >= space.circumference() / 2.0) {
        lo = 0.0;
        hi = space.circumference();
      }
      break;
    case RegionKind::whole:
      if (space.kind() != SpaceKind::circle) throw ConfigError("grid over an unbounded region");
      lo = 0.0;
      hi = space.circumference();
      break;
    default:
      throw ConfigError("vertex sets need the gasket");
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("grid over an unbounded region");
  constexpr int n = 1024;
  const double h = (hi - lo) / n;
  for (int k = open ? 1 : 0; k <= (open ? n - 1 : n); ++k) pts.push_back(space.normalize(lo + k * h));
  return pts;
}

DbReport db_psi_verify(const BoundFunction& F, const ScaleFunction& sf, const Space& space,
                       const std::vector<DbTuple>& grid) {
  DbReport rep;
  for (const auto& a : grid) {
    const double Ft = F(a.t, a.x, a.y);
    for (const auto& b : grid) {
      if (b.t > a.t) continue;
      const double lhs = F(b.t, b.x, b.y) / Ft;
      const double num = std::max({a.t, sf.psi(space.distance(a.x, b.x)), sf.psi(space.distance(a.y, b.y))});
      const double rhs = F.c_F() * std::pow(num / b.t, F.alpha_F());
      const double q = lhs / rhs;
      ++rep.checked;
      if (q > rep.worst) {
        rep.worst = q;
        rep.worst_first = a;
        rep.worst_second = b;
      }
      if (!(lhs <= rhs * (1.0 + 1e-12))) ++rep.failures;
    }
  }
  rep.pass = rep.failures == 0;
  return rep;
}

double h_bound_eval(const BoundFunction& F, const ScaleFunction& sf, const Space& space, double c1, double c2, double t,
                    double x, double y) {
  const double f = F(t, x, y);
  if (c1 == 0.0) return f;
  return f * std::exp(-c1 * phi_eval(sf, c2 * space.distance(x, y), t));
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::input: return "input";
    case Provenance::displayed: return "displayed-formula";
    case Provenance::chain: return "chain-derived";
    case Provenance::override_: return "user-override";
  }
  return "?";
}

bool ConstantLedger::has(const std::string& name) const {
  return std::any_of(entries.begin(), entries.end(), [&](const LedgerEntry& e) { return e.name == name; });
}

double ConstantLedger::get(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e.value;
  throw ConfigError("ledger has no constant " + name);
}

void ConstantLedger::set(const std::string& name, double value, Provenance p) {
  for (auto& e : entries)
    if (e.name == name) {
      e.value = value;
      e.provenance = p;
      return;
    }
  entries.push_back({name, value, p});
}

bool ConstantLedger::complete() const {
  for (const char* n : {"gamma_eps", "c_eps"})
    if (!has(n) || !std::isfinite(get(n)) || get(n) <= 0.0) return false;
  return true;
}

bool ConstantLedger::complete_global() const {
  for (const char* n : {"gamma_prime_delta", "c_prime"})
    if (!has(n) || !std::isfinite(get(n)) || get(n) <= 0.0) return false;
  return true;
}

namespace {

// Localized constants for a given eps; names carry `suffix`.
void localized(ConstantLedger& L, const ChainInputs& in, double eps, DeriveMode mode,
               const std::map<std::string, double>& ov, const std::string& sfx) {
  const double A = std::pow(in.c_psi * std::pow(2.0, in.beta1), -1.0 / (in.beta1 - 1.0));
  const double e1 = 1.0 / (in.beta1 - 1.0), e2 = 1.0 / (in.beta2 - 1.0);
  auto put = [&](const std::string& name, double v, Provenance p) {
    auto it = ov.find(name + sfx);
    if (it != ov.end()) L.set(name + sfx, it->second, Provenance::override_);
    else if (std::isfinite(v)) L.set(name + sfx, v, p);
  };
  auto val = [&](const std::string& name) { return L.has(name + sfx) ? L.get(name + sfx) : kNaN; };

  put("gamma_eps", eps * in.gamma / 5.0, Provenance::displayed);
  const double g_eps = val("gamma_eps");

  double c1 = kNaN, c3 = kNaN, c4 = kNaN;
  if (mode == DeriveMode::chain) {
    // Phi(gamma (r_n - r_{n+1}), s/2) >= A min_k (Psi(gamma dr) / (s/2))^{1/(b_k-1)}
    // and Psi(gamma dr) >= c_psi^-1 min_k kappa^{b_k} 2^{-n/2} Psi((2 + 4/eps) r).
    const double kappa = in.gamma * (1.0 - std::pow(2.0, -1.0 / (2.0 * in.beta2))) / (2.0 + 4.0 / eps);
    const double a1 = min_pow(kappa, in.beta1, in.beta2) / in.c_psi;
    c1 = A * std::min(std::pow(a1, e1), std::pow(a1, e2));
    // sup over s of (Psi(R)/s)^alpha_F exp(-Phi(eps gamma_eps R / 2, s))
    const double a3 = min_pow(0.5 * eps * g_eps, in.beta1, in.beta2) / in.c_psi;
    c3 = sup_power_decay(in.alpha_F, a3, A, in.beta1, in.beta2);
    // A min_k (Psi(gamma_eps R) (n-1) / t)^{1/(b_k-1)} with t < Psi(R)
    const double a4 = min_pow(g_eps, in.beta1, in.beta2) / in.c_psi;
    c4 = A * std::min(std::pow(a4, e1), std::pow(a4, e2));
  }
  put("c_eps_1", c1, Provenance::chain);
  put("c_eps_3", c3, Provenance::chain);
  put("c_eps_4", c4, Provenance::chain);
  c1 = val("c_eps_1");
  c3 = val("c_eps_3");
  c4 = val("c_eps_4");

  const double aF = in.alpha_F, b2 = in.beta2;
  const double c2 = std::pow(2.0, 5.0 * aF * (b2 - 1.0)) * std::pow(aF * (b2 - 1.0) / (M_E * c1), 3.0 * aF * (b2 - 1.0));
  put("c_eps_2", c2, Provenance::displayed);
  const double c5 = std::pow(3.0 * (b2 - 1.0) / (M_E * c4), 3.0 * (b2 - 1.0));
  put("c_eps_5", c5, Provenance::displayed);
  const double cp = in.c * in.c * in.c_F * val("c_eps_2") / (std::pow(2.0, aF / 2.0) - 1.0);
  put("c_prime_eps", cp, Provenance::displayed);
  const double cpp = in.c * val("c_prime_eps") * in.c_F * c3 * (2.0 * val("c_eps_5") + 1.0);
  put("c_dprime_eps", cpp, Provenance::displayed);
  const double s = val("c_prime_eps") + val("c_dprime_eps");
  const double ce = std::max(s * in.c_F * std::pow(2.0, aF),
                             val("c_dprime_eps") * in.c_F * in.c_F * std::pow(2.0, 2.0 * aF));
  put("c_eps", ce, Provenance::displayed);
}

}  // namespace

ConstantLedger derive_constants(const ChainInputs& in, DeriveMode mode, const std::map<std::string, double>& ov) {
  require(in.c_psi >= 1.0, "c_psi must be >= 1");
  require(in.beta1 > 1.0 && in.beta2 >= in.beta1, "need 1 < beta1 <= beta2");
  require(in.c_F > 0.0 && in.alpha_F > 0.0, "need c_F > 0 and alpha_F > 0");
  require(in.c > 0.0 && in.gamma > 0.0, "need c > 0 and gamma > 0");
  require(in.epsilon > 0.0 && in.epsilon < 1.0, "epsilon must lie in (0, 1)");
  require(in.delta > 0.0 && in.delta <= 1.0, "delta must lie in (0, 1]");
  ConstantLedger L;
  L.inputs = in;
  L.set("c_psi", in.c_psi, Provenance::input);
  L.set("beta1", in.beta1, Provenance::input);
  L.set("beta2", in.beta2, Provenance::input);
  L.set("c_F", in.c_F, Provenance::input);
  L.set("alpha_F", in.alpha_F, Provenance::input);
  L.set("c", in.c, Provenance::input);
  L.set("gamma", in.gamma, Provenance::input);
  L.set("epsilon", in.epsilon, Provenance::input);
  L.set("delta", in.delta, Provenance::input);

  localized(L, in, in.epsilon, mode, ov, "");

  // Global version: the eps = 1/4 constants on balls B(y0, R/2).
  auto ovg = ov.find("gamma_prime_delta");
  if (ovg != ov.end()) L.set("gamma_prime_delta", ovg->second, Provenance::override_);
  else L.set("gamma_prime_delta", in.delta * in.gamma / 40.0, Provenance::displayed);
  localized(L, in, 0.25, mode, ov, "@1/4");
  double cg = kNaN;
  if (L.has("c_dprime_eps@1/4") && L.has("c_eps@1/4")) {
    const double A = std::pow(in.c_psi * std::pow(2.0, in.beta1), -1.0 / (in.beta1 - 1.0));
    const double cpp_q = L.get("c_dprime_eps@1/4");
    double sup = kNaN;
    if (mode == DeriveMode::chain) {
      const double ag = min_pow(in.gamma / 40.0, in.beta1, in.beta2) / in.c_psi;
      sup = sup_power_decay(in.alpha_F, ag, A, in.beta1, in.beta2);
      L.set("c_dprime_global", cpp_q * in.c_F * std::pow(in.c_psi, in.alpha_F) * sup, Provenance::chain);
    }
    auto it = ov.find("c_dprime_global");
    if (it != ov.end()) L.set("c_dprime_global", it->second, Provenance::override_);
    if (L.has("c_dprime_global"))
      cg = std::max(L.get("c_dprime_global"), L.get("c_eps@1/4") * in.c_F * std::pow(in.c_psi, in.alpha_F));
  }
  auto it = ov.find("c_prime");
  if (it != ov.end()) L.set("c_prime", it->second, Provenance::override_);
  else if (std::isfinite(cg)) L.set("c_prime", cg, Provenance::displayed);

  for (const auto& e : L.entries)
    if (!std::isfinite(e.value) || e.value <= 0.0)
      throw ConfigError("constant " + e.name + " evaluated to a non-finite or non-positive value");
  return L;
}

void write_ledger_csv(std::ostream& os, const ConstantLedger& L) {
  CsvWriter csv(os, {"name", "value", "provenance"});
  for (const auto& e : L.entries) csv.row(e.name, e.value, provenance_name(e.provenance));
}

double localized_rhs(const ConstantLedger& L, const BoundFunction& F, const ScaleFunction& sf, const Space& space,
                     double R, const Region& U, double t, double x, double y) {
  if (!L.complete()) throw ConfigError("ledger is missing c_eps or gamma_eps");
  require(R > 0.0 && t > 0.0, "need R > 0 and t > 0");
  const double eps = L.inputs.epsilon;
  require(inner_set_membership(space, U, eps, R, y), "y must lie in the eps R interior of U");
  const double c = L.get("c_eps"), g = L.get("gamma_eps");
  const double TR = sf.psi(R);
  if (t >= TR) return c * F.inf_over(space, U, TR);
  if (U.contains(space, x)) return c * F(t, x, y) * std::exp(-phi_eval(sf, g * space.distance(x, y), t));
  return c * F.inf_over(space, U, std::min(2.0 * t, TR)) * std::exp(-phi_eval(sf, g * R, t));
}

double global_rhs(const ConstantLedger& L, const BoundFunction& F, const ScaleFunction& sf, const Space& space,
                  double R, double t, double x, double y) {
  if (!L.complete_global()) throw ConfigError("ledger is missing c_prime or gamma_prime_delta");
  const double pre = L.get("c_prime") * std::pow(L.inputs.delta, -L.inputs.beta2 * F.alpha_F());
  if (std::isfinite(R) && t >= sf.psi(R)) return pre * F.inf_over(space, Region::whole(), sf.psi(R));
  return pre * F(t, x, y) * std::exp(-phi_eval(sf, L.get("gamma_prime_delta") * space.distance(x, y), t));
}

const char* chain_step_name(ChainStep s) {
  switch (s) {
    case ChainStep::c2_to_3: return "2=>3";
    case ChainStep::c3_to_4: return "3=>4";
    case ChainStep::c4_to_5: return "4=>5";
    case ChainStep::c5_to_6: return "5=>6";
    case ChainStep::c6_to_7: return "6=>7";
    case ChainStep::c7_to_2: return "7=>2";
    case ChainStep::c1p_to_2: return "1'=>2";
  }
  return "?";
}

ExitConstants exit_constants_none() { return {kNaN, kNaN, kNaN, kNaN}; }

ExitConstants exit_chain_constants(ChainStep step, const ExitConstants& in, const ScaleFunction& sf,
                                   bool conservative) {
  ExitConstants out = exit_constants_none();
  const double cpsi = sf.c_psi(), b1 = sf.beta1(), b2 = sf.beta2();
  switch (step) {
    case ChainStep::c2_to_3:
      require(in.epsilon > 0.0 && in.epsilon < 1.0, "(2) needs epsilon in (0, 1)");
      require(in.delta > 0.0, "(2) needs delta in (0, inf)");
      out.epsilon = (1.0 - in.epsilon) * std::min(in.delta, 1.0);
      break;
    case ChainStep::c3_to_4: {
      require(in.epsilon > 0.0 && in.epsilon <= 1.0, "(3) needs epsilon in (0, 1]");
      const double d = std::isnan(in.delta) ? 1.0 : in.delta;
      require(d > 0.0, "(3)=>(4) needs delta in (0, inf)");
      out.epsilon = 1.0 - (in.epsilon / d) * std::exp(-1.0 / d);
      out.delta = d;
      break;
    }
    case ChainStep::c4_to_5: {
      require(in.epsilon > 0.0 && in.epsilon < 1.0, "(4) needs epsilon in (0, 1)");
      require(in.delta > 0.0, "(4) needs delta in (0, inf)");
      const double eta = std::min(std::pow(in.delta / cpsi, 1.0 / b1), 1.0);
      out.gamma = eta * std::log(1.0 / in.epsilon);
      out.c = std::max(std::exp(out.gamma / eta), 1.0 / in.epsilon);
      break;
    }
    case ChainStep::c5_to_6:
      require(in.c > 0.0 && in.gamma > 0.0, "(5) needs c, gamma in (0, inf)");
      out.c = in.c;
      out.gamma = in.gamma;
      break;
    case ChainStep::c6_to_7: {
      require(in.c > 0.0 && in.gamma > 0.0, "(6) needs c, gamma in (0, inf)");
      const double A = std::pow(cpsi * std::pow(2.0, b1), -1.0 / (b1 - 1.0));
      out.gamma = A * std::pow(std::min(std::pow(in.gamma, b2), 1.0) / cpsi, 1.0 / (b2 - 1.0));
      out.c = std::max(in.c, std::exp(A));
      break;
    }
    case ChainStep::c7_to_2:
      require(in.c > 0.0 && in.gamma > 0.0, "(7) needs c, gamma in (0, inf)");
      require(in.epsilon > 0.0 && in.epsilon < std::min(in.c, 0.5), "(7)=>(2) needs epsilon in (0, c ^ 1/2)");
      out.epsilon = in.epsilon;
      out.delta = std::pow(in.gamma / std::log(in.c / in.epsilon), b2 - 1.0);
      break;
    case ChainStep::c1p_to_2:
      require(conservative, "(1')=>(2) needs a conservative process");
      require(in.epsilon > 0.0 && in.epsilon < 0.5, "(1') needs epsilon in (0, 1/2)");
      require(in.delta > 0.0, "(1') needs delta in (0, inf)");
      out.epsilon = 2.0 * in.epsilon;
      out.delta = in.delta / (cpsi * std::pow(2.0, b2));
      break;
  }
  return out;
}

MeanExitCriterion mean_exit_criterion(double c_E, double c_psi, double beta2, const ScaleFunction& sf, double r) {
  require(c_E > 0.0 && c_psi > 0.0 && beta2 > 0.0 && r > 0.0, "mean exit criterion inputs must be positive");
  require(c_E >= 1.0, "c_E < 1 cannot satisfy both mean exit time bounds");
  return {0.5 * sf.psi(r) / c_E, 1.0 - 1.0 / (c_E * c_E * c_psi * std::pow(2.0, beta2 + 1.0))};
}

DuReport verify_du_condition(const BoundFunction& F, const ProcessModel& model, const Region& U, double R,
                             const ScaleFunction& sf, const std::vector<std::pair<double, double>>& t_x, int depth,
                             const Ensemble& ens) {
  const Space& space = model.space();
  DuReport rep;
  static constexpr std::array<double, 5> gx{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                            0.9061798459386640};
  static constexpr std::array<double, 5> gw{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                            0.4786286704993665, 0.2369268850561891};
  for (const auto& [t, x] : t_x) {
    require(t > 0.0 && t < sf.psi(R), "(DU) needs 0 < t < Psi(R)");
    require(U.contains(space, x), "(DU) needs x in U");
    const auto K = density_extract(model, x, t, U, U, depth, ens);
    const auto& H = *K.hierarchy;
    const std::size_t nc = H.cells(depth);
    std::vector<double> mass(nc, 0.0);
    if (space.kind() == SpaceKind::gasket) {
      const double w = 1.0 / static_cast<double>(space.graph().size());
      for (double v : region_grid(space, U)) {
        const long c = H.cell_of(v);
        if (c >= 0) mass[static_cast<std::size_t>(c)] += F(t, x, v) * w;
      }
    } else {
      for (std::size_t i = 0; i < nc; ++i) {
        const auto [l, r] = H.bounds(depth, i);
        const double m = 0.5 * (l + r), h = 0.5 * (r - l);
        double s = 0.0;
        for (std::size_t q = 0; q < gx.size(); ++q) s += gw[q] * F(t, x, space.normalize(m + h * gx[q]));
        mass[i] = s * h;
      }
    }
    const double n = static_cast<double>(K.n_paths);
    for (std::size_t i = 0; i < nc; ++i) {
      const double p = static_cast<double>(K.counts[i]) / n;
      const double se = std::sqrt(p * (1.0 - p) / (n - 1.0));
      const auto [l, r] = H.bounds(depth, i);
      rep.rows.push_back({t, x, l, r, p, se, mass[i]});
      const double slack = mass[i] + 3.0 * se - p;
      rep.worst_slack = std::min(rep.worst_slack, slack);
      if (slack < 0.0) ++rep.violations;
    }
  }
  rep.pass = rep.violations == 0;
  return rep;
}

PReport verify_p_condition(const ProcessModel& model, const Region& U, double R, const ScaleFunction& sf, double c,
                           double gamma, const std::vector<std::pair<double, double>>& x_r,
                           const std::vector<double>& times, const Ensemble& ens) {
  const Space& space = model.space();
  require(c > 0.0 && gamma > 0.0, "(P) needs c, gamma > 0");
  PReport rep;
  for (const auto& [x, r] : x_r) {
    require(r > 0.0 && r < R, "(P) needs 0 < r < R");
    require(U.contains(space, x) && U.distance_to_complement(space, x) >= r, "(P) needs B(x, r) inside U");
    const auto est = exit_prob_curve(model, x, r, times, ens);
    for (std::size_t j = 0; j < times.size(); ++j) {
      const double bound = c * std::exp(-phi_eval(sf, gamma * r, times[j]));
      rep.rows.push_back({x, r, times[j], est[j].estimate, est[j].se, bound});
      const double slack = bound + 3.0 * est[j].se - est[j].estimate;
      rep.worst_slack = std::min(rep.worst_slack, slack);
      if (slack < 0.0) ++rep.violations;
    }
  }
  rep.pass = rep.violations == 0;
  return rep;
}

void write_du_csv(std::ostream& os, const DuReport& rep) {
  CsvWriter csv(os, {"t", "x", "cell_left", "cell_right", "estimate", "se", "bound", "pass"});
  for (const auto& r : rep.rows)
    csv.row(r.t, r.x, r.left, r.right, r.estimate, r.se, r.bound, r.estimate <= r.bound + 3.0 * r.se ? 1 : 0);
}

void write_p_csv(std::ostream& os, const PReport& rep) {
  CsvWriter csv(os, {"x", "r", "t", "estimate", "se", "bound", "pass"});
  for (const auto& r : rep.rows)
    csv.row(r.x, r.r, r.t, r.estimate, r.se, r.bound, r.estimate <= r.bound + 3.0 * r.se ? 1 : 0);
}

}  // namespace hkmc
