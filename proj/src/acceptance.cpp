#include "hkmc/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <optional>
#include <sstream>

#include "hkmc/bounds.hpp"
#include "hkmc/dynkin_hunt.hpp"
#include "hkmc/parallel.hpp"
#include "hkmc/reference.hpp"
#include "hkmc/stopping.hpp"

namespace hkmc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Shared {
  std::uint64_t seed;
  std::optional<ExitTimeEstimate> capped;  // E[tau ^ 1], r = 1, from x = 0
  std::optional<ExitConstants> p_constants;
  bool p_pass = false;
};

std::uint64_t sub_seed(std::uint64_t seed, int id) { return mix64(seed + 0x9e3779b97f4a7c15ull * id); }

const ProcessModel& line_bridge() {
  static const ProcessModel m = ProcessModel::brownian_line(1.0, true);
  return m;
}

// 1: numeric Phi against the power-law closed form
void criterion1(CriterionResult& r, Shared&) {
  const auto t0 = Clock::now();
  const auto grid = log_grid(1e-2, 1e2, 50);
  double worst = 0.0;
  for (double beta : {1.5, 2.0, 2.5, std::log2(5.0)}) {
    const auto sf = ScaleFunction::power(beta);
    for (double R : grid)
      for (double t : grid) {
        const double ref = phi_power_closed_form(beta, R, t);
        worst = std::max(worst, std::fabs(phi_eval(sf, R, t) - ref) / ref);
      }
  }
  const double secs = seconds_since(t0);
  r.pass = worst <= 1e-6 && secs < 5.0;
  r.metrics = {{"max_rel_err", worst}, {"runtime_s", secs}};
  r.detail = "max rel err " + fmt(worst) + " (tol 1e-6), " + fmt(secs) + " s (limit 5)";
}

// 2: sandwich bounds and homogeneity
void criterion2(CriterionResult& r, Shared&) {
  const auto t0 = Clock::now();
  const auto g = log_grid(1e-2, 1e2, 100);
  std::vector<std::pair<double, double>> grid;
  for (double R : g)
    for (double t : g) grid.push_back({R, t});
  std::size_t violations = 0, points = 0;
  const std::vector<ScaleFunction> sfs{ScaleFunction::power(2.0), ScaleFunction::power(std::log2(5.0)),
                                       ScaleFunction::piecewise({1.0}, {2.0, 3.0}, 1.0, 2.0, 3.0)};
  for (const auto& sf : sfs) {
    const auto c = phi_sandwich_check(sf, grid);
    violations += c.violations;
    points += c.points;
  }
  const double secs = seconds_since(t0);
  r.pass = violations == 0 && secs < 5.0;
  r.metrics = {{"points", static_cast<double>(points)}, {"violations", static_cast<double>(violations)},
               {"runtime_s", secs}};
  r.detail = std::to_string(points) + " points over 3 scale functions, " + std::to_string(violations) +
             " violations, " + fmt(secs) + " s (limit 5)";
}

// 3: multiple Dynkin-Hunt identity
void criterion3(CriterionResult& r, Shared& sh) {
  const auto t0 = Clock::now();
  MdhOptions opt;
  opt.n_paths = 200000;
  opt.inner_m = 16;
  opt.dt = 1e-4;
  opt.seed = sub_seed(sh.seed, 3);
  const auto U = Region::open_interval(-1.0, 1.0);
  const auto B = Region::closed_interval(-0.5, 0.5);
  const std::vector<double> times{0.1, 0.5, 1.0};
  bool ok = true;
  double worst_z = 0.0, worst_oracle_z = 0.0;
  for (double x : {0.0, 2.0}) {
    const auto ledgers = verify_multiple_dh(line_bridge(), U, B, B, x, times, opt);
    for (const auto& L : ledgers) {
      ok = ok && L.pass;
      const double oracle = reference::gaussian_interval(L.t, x, -0.5, 0.5);
      const double oz = std::fabs(L.lhs.estimate - oracle) / L.lhs.se;
      ok = ok && oz <= 3.0;
      worst_oracle_z = std::max(worst_oracle_z, oz);
      if (L.diff.se > 0) worst_z = std::max(worst_z, std::fabs(L.diff.estimate) / L.diff.se);
      r.metrics.push_back({"x" + fmt(x) + "_t" + fmt(L.t) + "_diff", L.diff.estimate});
      r.metrics.push_back({"x" + fmt(x) + "_t" + fmt(L.t) + "_se", L.diff.se});
    }
  }
  const double secs = seconds_since(t0);
  r.pass = ok;
  r.metrics.push_back({"runtime_s", secs});
  r.detail = "max |diff|/se " + fmt(worst_z) + ", max |lhs-oracle|/se " + fmt(worst_oracle_z) + ", " + fmt(secs) + " s";
}

// 4: mean exit time and capped mean
void criterion4(CriterionResult& r, Shared& sh) {
  Ensemble ens{100000, sub_seed(sh.seed, 4), 1e-4, 0};
  const auto full = mean_exit_time(line_bridge(), 0.0, 1.0, std::nullopt, 8.0, ens);
  const auto capped = mean_exit_time(line_bridge(), 0.0, 1.0, 1.0, 1.0, ens);
  sh.capped = capped;
  const double oracle = reference::capped_mean_series(1.0);
  const double e1 = std::fabs(full.value.estimate - 1.0);
  const double e2 = std::fabs(capped.value.estimate - oracle) / oracle;
  r.pass = e1 <= 0.02 && full.censoring_ok && e2 <= 0.02;
  r.metrics = {{"mean", full.value.estimate},     {"mean_se", full.value.se}, {"censored", full.censored_fraction},
               {"capped", capped.value.estimate}, {"capped_oracle", oracle}};
  r.detail = "E[tau]=" + fmt(full.value.estimate) + " (1.0, 2%), censored " + fmt(full.censored_fraction) +
             "; E[tau^1]=" + fmt(capped.value.estimate) + " vs " + fmt(oracle) + " (2%)";
}

// 5: exit probabilities against the eigenfunction series
void criterion5(CriterionResult& r, Shared& sh) {
  Ensemble ens{100000, sub_seed(sh.seed, 5), 1e-4, 0};
  const std::vector<double> times{0.25, 0.5, 1.0};
  const auto est = exit_prob_curve(line_bridge(), 0.0, 1.0, times, ens);
  bool ok = true;
  double worst = 0.0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double oracle = reference::exit_prob_series(times[j]);
    const double z = std::fabs(est[j].estimate - oracle) / est[j].se;
    worst = std::max(worst, z);
    ok = ok && z <= 3.0;
    r.metrics.push_back({"t" + fmt(times[j]) + "_est", est[j].estimate});
    r.metrics.push_back({"t" + fmt(times[j]) + "_oracle", oracle});
  }
  r.pass = ok;
  r.detail = "max |est-oracle|/se " + fmt(worst) + " at t in {0.25,0.5,1}";
}

// 6: witnessed (3) composed into (6)
void criterion6(CriterionResult& r, Shared& sh) {
  if (!sh.capped) {
    Ensemble ens{100000, sub_seed(sh.seed, 4), 1e-4, 0};
    sh.capped = mean_exit_time(line_bridge(), 0.0, 1.0, 1.0, 1.0, ens);
  }
  const auto sf = ScaleFunction::power(2.0);
  const double eps3 = (sh.capped->value.estimate - 3.0 * sh.capped->value.se) / sf.psi(1.0);
  ExitConstants k = exit_constants_none();
  k.epsilon = eps3;
  k.delta = 1.0;
  k = exit_chain_constants(ChainStep::c3_to_4, k, sf);
  const double eps4 = k.epsilon;
  k = exit_chain_constants(ChainStep::c4_to_5, k, sf);
  k = exit_chain_constants(ChainStep::c5_to_6, k, sf);
  sh.p_constants = k;

  Ensemble ens{100000, sub_seed(sh.seed, 6), 1e-4, 0};
  const std::vector<std::pair<double, double>> x_r{{0.0, 0.25}, {0.0, 0.5}, {0.0, 1.0}};
  const std::vector<double> times{0.05, 0.1, 0.25, 0.5, 1.0};
  const auto rep = verify_p_condition(line_bridge(), Region::whole(), kInf, sf, k.c, k.gamma, x_r, times, ens);
  std::size_t control_violations = 0;
  for (const auto& row : rep.rows) {
    const double b = k.c * std::exp(-phi_eval(sf, 100.0 * k.gamma * row.r, row.t));
    if (row.estimate > b + 3.0 * row.se) ++control_violations;
  }
  sh.p_pass = rep.pass;
  r.pass = rep.pass && control_violations > 0;
  r.metrics = {{"epsilon3", eps3},
               {"epsilon4", eps4},
               {"c", k.c},
               {"gamma", k.gamma},
               {"worst_slack", rep.worst_slack},
               {"control_violations", static_cast<double>(control_violations)}};
  r.detail = "eps=" + fmt(eps3) + " -> c=" + fmt(k.c) + ", gamma=" + fmt(k.gamma) + "; " +
             std::to_string(rep.violations) + " violations, worst slack " + fmt(rep.worst_slack) +
             "; gamma*100 control: " + std::to_string(control_violations) + " violations";
}

// 7: exit probability below the mean exit time claim
void criterion7(CriterionResult& r, Shared& sh) {
  const auto sf = ScaleFunction::power(2.0);
  const auto m = mean_exit_criterion(1.0, 1.0, 2.0, sf, 1.0);
  Ensemble ens{100000, sub_seed(sh.seed, 7), 1e-4, 0};
  const auto est = exit_prob(line_bridge(), 0.0, 1.0, m.threshold, ens);
  const double margin = (m.bound - est.estimate) / est.se;
  r.pass = m.threshold == 0.5 && m.bound == 0.875 && margin >= 50.0;
  r.metrics = {{"threshold", m.threshold}, {"bound", m.bound}, {"estimate", est.estimate}, {"margin_se", margin}};
  r.detail = "P(tau<=" + fmt(m.threshold) + ")=" + fmt(est.estimate) + " vs bound " + fmt(m.bound) + ", margin " +
             fmt(margin) + " SE (need 50)";
}

// 8: density extraction and telescoping
void criterion8(CriterionResult& r, Shared& sh) {
  const auto t0 = Clock::now();
  const auto model = ProcessModel::brownian_killed(-1.0, 1.0, 1.0, true);
  const auto U = Region::open_interval(-1.0, 1.0);
  Ensemble ens{500000, sub_seed(sh.seed, 8), 1e-4, 0};
  const int depth = 10;
  const auto K = density_extract(model, 0.0, 0.1, U, U, depth, ens);
  const long c0 = K.hierarchy->cell_of(0.0);
  const auto cells = K.level(depth);
  const auto& cell = cells[static_cast<std::size_t>(c0)];
  const double oracle = reference::dirichlet_cell_average(0.1, 0.0, cell.left, cell.right, -1.0, 1.0);
  const double rel = std::fabs(cell.density - oracle) / oracle;

  // coarse level sampled directly from the same paths
  bool telescoping = true;
  const int coarse = 5;
  const auto Kc = density_extract(model, 0.0, 0.1, U, U, coarse, ens);
  telescoping = telescoping && K.level_counts(coarse) == Kc.counts && Kc.mass_count == K.mass_count;
  for (int l = 0; l < depth; ++l) {
    const auto a = K.level_counts(l), b = K.level_counts(l + 1);
    for (std::size_t i = 0; i < a.size(); ++i) telescoping = telescoping && a[i] == b[2 * i] + b[2 * i + 1];
  }
  telescoping = telescoping && K.level_counts(0)[0] == K.mass_count;
  const double secs = seconds_since(t0);
  r.pass = rel <= 0.05 && telescoping;
  r.metrics = {{"density", cell.density}, {"se", cell.se}, {"oracle", oracle}, {"rel_err", rel}, {"runtime_s", secs}};
  r.detail = "cell [" + fmt(cell.left) + "," + fmt(cell.right) + ") density " + fmt(cell.density) + " vs " +
             fmt(oracle) + " (rel " + fmt(rel) + ", tol 0.05); telescoping " + (telescoping ? "exact" : "BROKEN") +
             "; " + fmt(secs) + " s";
}

// 9: localized heat kernel bound dominates references and estimates
void criterion9(CriterionResult& r, Shared& sh) {
  const auto sf = ScaleFunction::power(2.0);
  const double R = 2.0;
  const auto U = Region::open_interval(-1.0, 1.0);
  const auto killed = ProcessModel::brownian_killed(-1.0, 1.0, 1.0, true);
  const auto line = ProcessModel::brownian_line(1.0, true);
  const double c3 = 1.01 / std::sqrt(2.0 * M_PI);
  const auto F = BoundFunction::power(c3, 0.5, 0.0, 0.0, 1.0, 0.5);

  // (DU) with the Gaussian on-diagonal majorant, plus its scaled-down control
  Ensemble du_ens{100000, sub_seed(sh.seed, 9), 1e-3, 0};
  const std::vector<std::pair<double, double>> t_x{{0.05, 0.0}, {0.1, 0.0}, {0.5, 0.0}, {0.1, 0.5}, {0.5, -0.7}};
  const auto du = verify_du_condition(F, killed, U, R, sf, t_x, 6, du_ens);
  std::size_t du_control = 0;
  for (const auto& row : du.rows)
    if (row.estimate > 1e-3 * row.bound + 3.0 * row.se) ++du_control;

  if (!sh.p_constants) {
    CriterionResult tmp;
    criterion6(tmp, sh);
  }
  const auto& k = *sh.p_constants;
  ChainInputs in;
  in.c_psi = 1.0;
  in.beta1 = in.beta2 = 2.0;
  in.c_F = 1.0;
  in.alpha_F = 0.5;
  in.c = k.c;
  in.gamma = k.gamma;
  in.epsilon = 0.25;
  const auto L = derive_constants(in, DeriveMode::chain);
  const Space& space = killed.space();

  std::size_t checked = 0, violations = 0;
  auto inner_clamp = [&](double l, double rr, double x) {
    const double lo = std::max(l, -0.5 + 1e-9), hi = std::min(rr, 0.5 - 1e-9);
    return std::clamp(x, lo, hi);
  };
  std::vector<double> ys;
  for (int i = -9; i <= 9; ++i) ys.push_back(0.05 * i);
  const Region W = Region::open_interval(-0.5, 0.5);
  Ensemble emp{20000, sub_seed(sh.seed, 90), 1e-3, 0};

  // (model, oracle kind, x, t)
  struct Case {
    bool killed_model;
    double x, t;
  };
  std::vector<Case> cases;
  for (double t : {0.05, 0.1, 0.5, 1.0, 2.0})
    for (double x : {0.0, 0.3, -0.45}) cases.push_back({true, x, t});
  for (double t : {0.1, 0.5, 1.0, 2.0})
    for (double x : {1.5, -2.5}) cases.push_back({false, x, t});
  for (double t : {4.0, 8.0}) {
    cases.push_back({true, 0.0, t});
    cases.push_back({false, 1.5, t});
    cases.push_back({false, 0.0, t});
  }
  for (const auto& c : cases) {
    for (double y : ys) {
      const double ref = c.killed_model ? reference::dirichlet_kernel(c.t, c.x, y, -1.0, 1.0)
                                        : reference::gaussian_kernel(c.t, c.x, y);
      const double rhs = localized_rhs(L, F, sf, space, R, U, c.t, c.x, y);
      ++checked;
      if (ref > rhs) ++violations;
    }
    const auto K = density_extract(c.killed_model ? killed : line, c.x, c.t, c.killed_model ? U : Region::whole(), W,
                                   4, emp);
    for (const auto& cell : K.level(4)) {
      const double rhs = localized_rhs(L, F, sf, space, R, U, c.t, c.x, inner_clamp(cell.left, cell.right, c.x));
      ++checked;
      if (cell.density > rhs + 3.0 * cell.se) ++violations;
    }
  }
  r.pass = du.pass && du_control > 0 && sh.p_pass && violations == 0;
  r.metrics = {{"du_worst_slack", du.worst_slack},
               {"du_control_violations", static_cast<double>(du_control)},
               {"c_eps", L.get("c_eps")},
               {"gamma_eps", L.get("gamma_eps")},
               {"checked", static_cast<double>(checked)},
               {"violations", static_cast<double>(violations)}};
  r.detail = std::string("(DU) ") + (du.pass ? "pass" : "FAIL") + " (control " + std::to_string(du_control) +
             " violations), (P) " + (sh.p_pass ? "pass" : "FAIL") + "; c_eps=" + fmt(L.get("c_eps")) + ", " +
             std::to_string(checked) + " comparisons, " + std::to_string(violations) + " upward violations";
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// 10: pathwise invariants and thread-count determinism
void criterion10(CriterionResult& r, Shared& sh) {
  struct Setup {
    ProcessModel model;
    double x0, dt, horizon;
    Region U, B;
    std::vector<double> radii;
  };
  const auto g = ProcessModel::gasket_walk(5);
  const double gx0 = static_cast<double>(g.space().graph().left_corner());
  std::vector<Setup> setups{
      {ProcessModel::brownian_line(1.0, true), 0.0, 1e-3, 2.0, Region::open_interval(-0.5, 0.5),
       Region::closed_interval(-0.25, 0.25), {0.1, 0.2, 0.4, 0.8}},
      {ProcessModel::brownian_killed(-1.0, 1.0, 1.0, true), 0.0, 1e-3, 2.0, Region::open_interval(-0.5, 0.5),
       Region::closed_interval(-0.25, 0.25), {0.1, 0.2, 0.4, 0.8}},
      {ProcessModel::brownian_circle(4.0, 1.0, true), 0.0, 1e-3, 2.0, Region::ball(0.0, 1.0), Region::ball(0.0, 0.5),
       {0.1, 0.2, 0.4, 0.8}},
      {g, gx0, g.step_time(), 0.5, Region::ball(gx0, 0.5), Region::ball(gx0, 0.25), {0.1, 0.2, 0.4, 0.8}},
  };
  const std::uint64_t n = 10000;
  std::size_t bad = 0, paths = 0;
  for (std::size_t s = 0; s < setups.size(); ++s) {
    const auto& su = setups[s];
    const Space& space = su.model.space();
    const bool is_line = su.model.kind() == ModelKind::brownian_line;
    const auto killed_U = is_line ? std::optional<ProcessModel>(ProcessModel::brownian_killed(su.U.a, su.U.b, 1.0, true))
                                  : std::nullopt;
    const std::uint64_t horizon = grid_steps(su.horizon, su.dt);
    for (std::uint64_t i = 0; i < n; ++i) {
      const SeedId seed{sub_seed(sh.seed, 100 + static_cast<int>(s)), i};
      const Path p = sample_path(su.model, su.x0, su.horizon, su.dt, seed);
      bool ok = true;
      // interleaving
      const auto seq = mdh_sequence(p, su.U, su.B, horizon);
      for (std::size_t j = 0; j < seq.pairs.size(); ++j) {
        const auto [tau, sigma] = seq.pairs[j];
        ok = ok && tau <= sigma;
        if (j + 1 < seq.pairs.size()) ok = ok && sigma <= seq.pairs[j + 1].first;
      }
      // exit times monotone in r
      std::uint64_t prev = 0;
      for (double rad : su.radii) {
        const auto e = exit_time(p, Region::ball(su.x0, rad));
        ok = ok && e >= prev;
        prev = e;
      }
      // part process below the full process
      const auto tU = exit_time(p, su.U);
      for (std::uint64_t k = 0; k < p.states.size(); ++k) {
        const bool full = su.B.contains(space, p.states[k]);
        const bool part = k < tU && su.B.contains(space, p.states[k]);
        ok = ok && (!part || full);
      }
      if (killed_U) {
        const Path q = sample_path(*killed_U, su.x0, su.horizon, su.dt, seed);
        ok = ok && q.zeta == tU;
        for (std::uint64_t k = 0; k < q.states.size(); ++k)
          ok = ok && (k < tU ? same_bits(q.states[k], p.states[k]) : is_cemetery(q.states[k]));
      }
      // cemetery absorption
      std::uint64_t first_dead = kNever;
      for (std::uint64_t k = 0; k < p.states.size(); ++k) {
        if (is_cemetery(p.states[k])) {
          if (first_dead == kNever) first_dead = k;
        } else if (first_dead != kNever) {
          ok = false;
        }
      }
      ok = ok && first_dead == p.zeta;
      if (su.model.kind() == ModelKind::brownian_killed) ok = ok && p.zeta == exit_time(p, su.model.killing_set());
      bad += ok ? 0 : 1;
      ++paths;
    }
  }

  // determinism across thread counts
  const unsigned saved = thread_count();
  auto run = [&](unsigned threads) {
    set_thread_count(threads);
    std::vector<double> out;
    Ensemble ens{3000, sub_seed(sh.seed, 110), 1e-3, 0};
    for (const auto& e : transition_prob_curve(line_bridge(), 0.0, {0.1, 0.5}, Region::closed_interval(-0.5, 0.5), ens)) {
      out.push_back(e.estimate);
      out.push_back(e.se);
    }
    MdhOptions o;
    o.n_paths = 1000;
    o.dt = 1e-3;
    o.seed = ens.seed;
    for (const auto& L : verify_multiple_dh(line_bridge(), Region::open_interval(-1, 1), Region::closed_interval(-0.5, 0.5),
                                            Region::closed_interval(-0.5, 0.5), 0.0, {0.5}, o)) {
      out.push_back(L.diff.estimate);
      out.push_back(L.diff.se);
    }
    const auto K = density_extract(ProcessModel::brownian_killed(-1, 1, 1.0, true), 0.0, 0.1,
                                   Region::open_interval(-1, 1), Region::open_interval(-1, 1), 6, ens);
    for (auto c : K.counts) out.push_back(static_cast<double>(c));
    return out;
  };
  const auto a = run(1), b = run(8);
  set_thread_count(saved);
  bool det = a.size() == b.size();
  for (std::size_t i = 0; det && i < a.size(); ++i) det = same_bits(a[i], b[i]);

  r.pass = bad == 0 && det;
  r.metrics = {{"paths", static_cast<double>(paths)}, {"bad_paths", static_cast<double>(bad)},
               {"deterministic", det ? 1.0 : 0.0}};
  r.detail = std::to_string(paths) + " paths over 4 models, " + std::to_string(bad) +
             " invariant failures; threads 1 vs 8 " + (det ? "identical" : "DIFFER");
}

const char* kNames[] = {"",
                        "phi closed form",
                        "phi sandwich and homogeneity",
                        "multiple Dynkin-Hunt identity",
                        "mean exit time",
                        "exit probability series",
                        "exit condition chain",
                        "mean exit time claim",
                        "density extraction",
                        "localized bound domination",
                        "pathwise invariants and determinism"};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  using Fn = void (*)(CriterionResult&, Shared&);
  static const Fn fns[] = {nullptr,    criterion1, criterion2, criterion3, criterion4, criterion5,
                           criterion6, criterion7, criterion8, criterion9, criterion10};
  std::vector<int> ids = opt.criteria;
  if (ids.empty())
    for (int i = 1; i <= 10; ++i) ids.push_back(i);
  Shared sh{opt.seed, std::nullopt, std::nullopt, false};
  std::vector<CriterionResult> out;
  for (int id : ids) {
    if (id < 1 || id > 10) throw ConfigError("acceptance criteria are numbered 1..10");
    CriterionResult r;
    r.id = id;
    r.name = kNames[id];
    const auto t0 = Clock::now();
    try {
      fns[id](r, sh);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = seconds_since(t0);
    if (opt.on_result) opt.on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result_line(const CriterionResult& r) {
  std::ostringstream os;
  os << "[" << (r.pass ? "PASS" : "FAIL") << "] " << r.id << " " << r.name << ": " << r.detail << " ("
     << std::fixed;
  os.precision(1);
  os << r.seconds << " s)";
  return os.str();
}

}  // namespace hkmc
