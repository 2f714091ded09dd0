#include "hkmc/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hkmc/acceptance.hpp"
#include "hkmc/config.hpp"
#include "hkmc/csv.hpp"
#include "hkmc/dynkin_hunt.hpp"
#include "hkmc/parallel.hpp"
#include "hkmc/reference.hpp"
#include "hkmc/stopping.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hkmc {

namespace {

struct Run {
  ConfigReader cfg;
  std::uint64_t seed = 0;
  fs::path out;
  json checks = json::array();
  std::vector<std::string> files;

  std::ofstream open(const std::string& name) {
    std::ofstream os(out / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (out / name).string());
    files.push_back(name);
    return os;
  }
  void check(const std::string& name, bool pass, json extra = json::object()) {
    extra["name"] = name;
    extra["pass"] = pass;
    checks.push_back(std::move(extra));
  }
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c["pass"].get<bool>()) return false;
    return true;
  }
};

std::vector<double> starts(ConfigReader& c) {
  if (c.has("geometry.starts")) return c.numbers("geometry.starts");
  return {c.number("geometry.x")};
}

void check_sampling(Run& r, std::uint64_t n_paths, double dt) {
  if (r.cfg.has("estimator.n_paths") && n_paths < 2) r.cfg.fail("estimator.n_paths", "must be at least 2");
  if (r.cfg.has("estimator.dt") && std::isfinite(dt) && !(dt > 0.0)) r.cfg.fail("estimator.dt", "must be positive");
}

Ensemble ensemble(Run& r, const ProcessModel& model) {
  Ensemble e;
  e.n_paths = r.cfg.count("estimator.n_paths");
  e.dt = r.cfg.number("estimator.dt");
  e.seed = r.seed;
  e.stream = static_cast<std::uint32_t>(r.cfg.count("estimator.stream", 0));
  check_sampling(r, e.n_paths, e.dt);
  if (model.kind() == ModelKind::gasket_walk && std::isfinite(e.dt) && e.dt > 0.0) {
    const double q = e.dt / model.step_time();
    if (std::fabs(q - std::round(q)) > 1e-9 * q || std::round(q) < 1.0)
      r.cfg.fail("estimator.dt", "must be a positive multiple of the gasket step time " + format_double(model.step_time()));
  }
  return e;
}

std::vector<double> times(Run& r, double dt, const std::string& path = "estimator.times") {
  auto ts = r.cfg.numbers(path);
  r.cfg.require_grid_times(path, ts, dt);
  return ts;
}

void require_inside(Run& r, const Space& space, const Region& inner, const Region& outer, const std::string& path,
                    const std::string& what) {
  try {
    if (!region_subset(space, inner, outer)) r.cfg.fail(path, what);
  } catch (const ConfigError& e) {
    r.cfg.fail(path, e.what());
  }
}

void require_closure_inside(Run& r, const Space& space, const Region& B, const Region& U, const std::string& path) {
  try {
    if (!closure_contained(space, B, U)) r.cfg.fail(path, "closure of B must lie inside U");
  } catch (const ConfigError& e) {
    r.cfg.fail(path, e.what());
  }
}

// ---------------------------------------------------------------- phi
void cmd_phi(Run& r) {
  auto sf = r.cfg.scale();
  const double Rmin = r.cfg.number("phi.R_min", 1e-2), Rmax = r.cfg.number("phi.R_max", 1e2);
  const double tmin = r.cfg.number("phi.t_min", 1e-2), tmax = r.cfg.number("phi.t_max", 1e2);
  const auto nR = r.cfg.count("phi.n_R", 50), nt = r.cfg.count("phi.n_t", 50);
  const double tol = r.cfg.number("phi.tolerance", 1e-6);
  if (!(Rmin > 0 && Rmax >= Rmin)) r.cfg.fail("phi.R_min", "need 0 < R_min <= R_max");
  if (!(tmin > 0 && tmax >= tmin)) r.cfg.fail("phi.t_min", "need 0 < t_min <= t_max");
  if (nR < 2) r.cfg.fail("phi.n_R", "must be at least 2");
  if (nt < 2) r.cfg.fail("phi.n_t", "must be at least 2");
  r.cfg.check();

  auto grid = [](double lo, double hi, std::uint64_t n) {
    std::vector<double> g(n);
    for (std::uint64_t i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return g;
  };
  const bool power = sf.kind() == ScaleFunction::Kind::power;
  auto os = r.open("phi.csv");
  CsvWriter csv(os, {"R", "t", "phi_numeric", "phi_closed", "lower", "upper"});
  double worst = 0.0;
  std::vector<std::pair<double, double>> pts;
  for (double R : grid(Rmin, Rmax, nR))
    for (double t : grid(tmin, tmax, nt)) {
      const double v = phi_eval(sf, R, t);
      pts.push_back({R, t});
      if (power) {
        const double c = phi_power_closed_form(sf.power_beta(), R, t);
        worst = std::max(worst, std::fabs(v - c) / c);
        csv.row(R, t, v, c, phi_lower_bound(sf, R, t), phi_upper_bound(sf, R, t));
      } else {
        csv.row(R, t, v, "", phi_lower_bound(sf, R, t), phi_upper_bound(sf, R, t));
      }
    }
  if (power) r.check("closed_form_agreement", worst <= tol, {{"max_rel_err", worst}, {"tolerance", tol}});
  const auto s = phi_sandwich_check(sf, pts);
  r.check("sandwich_and_homogeneity", s.pass, {{"violations", s.violations}, {"points", s.points}});
}

// ---------------------------------------------------------------- simulate
void cmd_simulate(Run& r) {
  auto model = r.cfg.model();
  auto ens = ensemble(r, model);
  const double horizon = r.cfg.number("estimator.horizon");
  const double x = r.cfg.number("geometry.x");
  auto U = r.cfg.optional_region("geometry.U");
  auto B = r.cfg.optional_region("geometry.B");
  if (std::isfinite(horizon) && !(horizon > 0)) r.cfg.fail("estimator.horizon", "must be positive");
  if (ens.n_paths > 100000) r.cfg.fail("estimator.n_paths", "simulate stores full paths; use at most 100000");
  if (U && B) require_closure_inside(r, model.space(), *B, *U, "geometry.B");
  if (std::isfinite(x) && !model.in_state_space(x)) r.cfg.fail("geometry.x", "outside the state space");
  r.cfg.check();

  std::vector<Path> paths;
  for (std::uint64_t i = 0; i < ens.n_paths; ++i)
    paths.push_back(sample_path(model, x, horizon, ens.dt, SeedId{ens.seed, i}, ens.stream));
  {
    auto os = r.open("paths.bin");
    write_path_dump(os, paths);
  }
  auto os = r.open("paths.csv");
  CsvWriter csv(os, {"path", "zeta", "final_state"});
  for (std::uint64_t i = 0; i < paths.size(); ++i)
    csv.row(i, paths[i].zeta == kNever ? kInf : paths[i].time(paths[i].zeta), paths[i].states.back());
  if (U && B) {
    std::vector<StoppingRow> rows;
    const auto h = grid_steps(horizon, ens.dt);
    for (std::uint64_t i = 0; i < paths.size(); ++i) {
      const auto seq = mdh_sequence(paths[i], *U, *B, h);
      for (std::size_t n = 0; n < seq.pairs.size(); ++n) {
        rows.push_back({i, "tau_" + std::to_string(n + 1), seq.pairs[n].first});
        rows.push_back({i, "sigma_" + std::to_string(n + 1), seq.pairs[n].second});
      }
    }
    auto st = r.open("stopping.csv");
    write_stopping_csv(st, rows);
  }
}

// ---------------------------------------------------------------- estimate
void cmd_estimate(Run& r) {
  auto model = r.cfg.model();
  auto ens = ensemble(r, model);
  const double x = r.cfg.number("geometry.x");
  auto ts = times(r, ens.dt);
  auto A = r.cfg.optional_region("geometry.A");
  auto U = r.cfg.optional_region("geometry.U");
  auto W = r.cfg.optional_region("geometry.W");
  const bool has_radius = r.cfg.has("estimator.radius");
  const double radius = has_radius ? r.cfg.number("estimator.radius") : 0.0;
  const std::optional<double> cap =
      r.cfg.has("estimator.cap") ? std::optional<double>(r.cfg.number("estimator.cap")) : std::nullopt;
  const double horizon = r.cfg.number("estimator.horizon", ts.empty() ? 1.0 : *std::max_element(ts.begin(), ts.end()));
  const auto depth = r.cfg.count("estimator.depth", 8);
  if (W && !U) U = Region::whole();
  if (W) require_inside(r, model.space(), *W, *U, "geometry.W", "window W must lie inside U");
  if (!A && !has_radius && !W) r.cfg.fail("geometry.A", "nothing to estimate: give geometry.A, estimator.radius or geometry.W");
  if (std::isfinite(x) && !model.in_state_space(x)) r.cfg.fail("geometry.x", "outside the state space");
  r.cfg.check();

  std::vector<std::pair<std::string, EstimateWithError>> rows;
  if (A) {
    const auto full = transition_prob_curve(model, x, ts, *A, ens);
    for (std::size_t j = 0; j < ts.size(); ++j) rows.push_back({"P_t(x,A) t=" + format_double(ts[j]), full[j]});
    if (U) {
      const auto part = part_transition_prob_curve(model, x, ts, *U, *A, ens);
      for (std::size_t j = 0; j < ts.size(); ++j) rows.push_back({"P^U_t(x,A) t=" + format_double(ts[j]), part[j]});
      bool dom = true;
      for (std::size_t j = 0; j < ts.size(); ++j) dom = dom && part[j].estimate <= full[j].estimate;
      r.check("part_below_full", dom);
    }
  }
  if (has_radius) {
    const auto ep = exit_prob_curve(model, x, radius, ts, ens);
    for (std::size_t j = 0; j < ts.size(); ++j) rows.push_back({"P(tau<=t) t=" + format_double(ts[j]), ep[j]});
    const auto m = mean_exit_time(model, x, radius, cap, cap ? *cap : horizon, ens);
    rows.push_back({cap ? "E[tau^cap]" : "E[tau]", m.value});
    if (!cap) r.check("censoring_below_1e-3", m.censoring_ok, {{"censored_fraction", m.censored_fraction}});
  }
  {
    auto os = r.open("estimates.csv");
    write_scalar_csv(os, rows);
  }
  if (W) {
    const double tk = r.cfg.number("estimator.kernel_time", ts.front());
    r.cfg.require_grid_times("estimator.kernel_time", {tk}, ens.dt);
    r.cfg.check();
    const auto K = density_extract(model, x, tk, *U, *W, static_cast<int>(depth), ens);
    auto os = r.open("kernel.csv");
    write_kernel_csv(os, K.level(static_cast<int>(depth)));
    bool tele = true;
    for (int l = 0; l < static_cast<int>(depth); ++l) {
      const auto a = K.level_counts(l), b = K.level_counts(l + 1);
      for (std::size_t i = 0; i < a.size(); ++i) tele = tele && a[i] == b[2 * i] + b[2 * i + 1];
    }
    r.check("telescoping_exact", tele && K.level_counts(0)[0] == K.mass_count);
  }
}

bool interval_oracle(const ProcessModel& m, const Region& A, double& lo, double& hi) {
  if (m.kind() != ModelKind::brownian_line) return false;
  if (A.kind != RegionKind::open_interval && A.kind != RegionKind::closed_interval) return false;
  lo = A.a;
  hi = A.b;
  return true;
}

// ---------------------------------------------------------------- verify-mdh
void cmd_verify_mdh(Run& r) {
  auto model = r.cfg.model();
  const double x = r.cfg.number("geometry.x");
  auto U = r.cfg.region("geometry.U");
  auto B = r.cfg.region("geometry.B");
  auto A = r.cfg.has("geometry.A") ? r.cfg.region("geometry.A") : B;
  MdhOptions opt;
  opt.n_paths = r.cfg.count("estimator.n_paths");
  opt.dt = r.cfg.number("estimator.dt");
  opt.seed = r.seed;
  opt.inner_m = static_cast<std::uint32_t>(r.cfg.count("estimator.inner_m", 16));
  opt.n_max = static_cast<std::uint32_t>(r.cfg.count("estimator.n_max", 32));
  opt.remainder_tol = r.cfg.number("estimator.remainder_tol", 1e-4);
  check_sampling(r, opt.n_paths, opt.dt);
  auto ts = times(r, opt.dt);
  if (opt.n_max < 1 || opt.n_max > 63) r.cfg.fail("estimator.n_max", "must lie in [1, 63]");
  if (opt.inner_m < 1) r.cfg.fail("estimator.inner_m", "must be at least 1");
  require_closure_inside(r, model.space(), B, U, "geometry.B");
  require_inside(r, model.space(), A, B, "geometry.A", "A must lie inside B");
  r.cfg.check();

  const auto ledgers = verify_multiple_dh(model, U, B, A, x, ts, opt);
  auto os = r.open("mdh.csv");
  CsvWriter csv(os, {"t", "lhs", "lhs_se", "zeroth", "partial_sum", "truncation", "remainder", "diff", "diff_se",
                     "p_sigma_monotone", "pass"});
  double lo = 0.0, hi = 0.0;
  const bool oracle = interval_oracle(model, A, lo, hi);
  bool oracle_ok = true;
  for (std::size_t q = 0; q < ledgers.size(); ++q) {
    const auto& L = ledgers[q];
    csv.row(L.t, L.lhs.estimate, L.lhs.se, L.zeroth.estimate, L.partial_sum, L.truncation, L.remainder,
            L.diff.estimate, L.diff.se, L.monotone_p_sigma ? 1 : 0, L.pass ? 1 : 0);
    auto ts_os = r.open("mdh_terms_" + std::to_string(q) + ".csv");
    write_mdh_csv(ts_os, L);
    r.check("identity t=" + format_double(L.t), L.pass, {{"diff", L.diff.estimate}, {"se", L.diff.se}});
    if (oracle) {
      const double o = reference::gaussian_interval(L.t, x, lo, hi, model.scale());
      oracle_ok = oracle_ok && std::fabs(L.lhs.estimate - o) <= 3.0 * L.lhs.se;
    }
  }
  if (oracle) r.check("lhs_gaussian_oracle", oracle_ok);
}

// ---------------------------------------------------------------- verify-dh
void cmd_verify_dh(Run& r) {
  auto model = r.cfg.model();
  const double x = r.cfg.number("geometry.x");
  auto U = r.cfg.region("geometry.U");
  auto A = r.cfg.region("geometry.A");
  DhOptions opt;
  opt.n_paths = r.cfg.count("estimator.n_paths");
  opt.dt = r.cfg.number("estimator.dt");
  opt.seed = r.seed;
  opt.inner_m = static_cast<std::uint32_t>(r.cfg.count("estimator.inner_m", 16));
  check_sampling(r, opt.n_paths, opt.dt);
  auto ts = times(r, opt.dt);
  r.cfg.check();
  const auto res = verify_single_dh(model, U, A, x, ts, opt);
  auto os = r.open("dh.csv");
  CsvWriter csv(os, {"t", "lhs", "part", "second", "diff", "diff_se", "pass"});
  for (const auto& d : res) {
    csv.row(d.t, d.lhs.estimate, d.part.estimate, d.second.estimate, d.diff.estimate, d.diff.se, d.pass ? 1 : 0);
    r.check("identity t=" + format_double(d.t), d.pass);
  }
}

// ---------------------------------------------------------------- exit-prob
void cmd_exit_prob(Run& r) {
  auto model = r.cfg.model();
  auto ens = ensemble(r, model);
  auto xs = starts(r.cfg);
  auto radii = r.cfg.numbers("estimator.radii");
  auto ts = times(r, ens.dt);
  r.cfg.check();
  const bool series = model.kind() == ModelKind::brownian_line;
  auto os = r.open("exit_prob.csv");
  CsvWriter csv(os, {"x", "r", "t", "estimate", "se", "oracle"});
  bool ok = true;
  for (double x : xs)
    for (double rad : radii) {
      const auto est = exit_prob_curve(model, x, rad, ts, ens);
      for (std::size_t j = 0; j < ts.size(); ++j) {
        if (series) {
          const double o = reference::exit_prob_series(ts[j] * model.scale() / (rad * rad));
          ok = ok && std::fabs(est[j].estimate - o) <= 3.0 * est[j].se + 1e-12;
          csv.row(x, rad, ts[j], est[j].estimate, est[j].se, o);
        } else {
          csv.row(x, rad, ts[j], est[j].estimate, est[j].se, "");
        }
      }
    }
  if (series) r.check("series_oracle_3se", ok);
}

// ---------------------------------------------------------------- verify-chain
void cmd_verify_chain(Run& r) {
  auto model = r.cfg.model();
  auto sf = r.cfg.scale();
  auto ens = ensemble(r, model);
  const double x = r.cfg.number("geometry.x", 0.0);
  auto radii = r.cfg.numbers("estimator.radii");
  auto ts = times(r, ens.dt);
  const double delta = r.cfg.number("constants.delta", 1.0);
  const double control = r.cfg.number("constants.control_factor", 100.0);
  const bool witness = !r.cfg.has("constants.epsilon") || r.cfg.text("constants.epsilon", "") == "derive";
  const double eps_given = witness ? 0.0 : r.cfg.number("constants.epsilon");
  r.cfg.check();

  double eps = eps_given;
  auto os = r.open("chain.csv");
  CsvWriter csv(os, {"step", "epsilon", "delta", "c", "gamma"});
  if (witness) {
    eps = kInf;
    for (double rad : radii) {
      const double T = sf.psi(rad);
      const auto m = mean_exit_time(model, x, rad, T, T, ens);
      eps = std::min(eps, (m.value.estimate - 3.0 * m.value.se) / T);
    }
  }
  csv.row("(3) witnessed", eps, "", "", "");
  ExitConstants k = exit_constants_none();
  k.epsilon = eps;
  k.delta = delta;
  for (auto step : {ChainStep::c3_to_4, ChainStep::c4_to_5, ChainStep::c5_to_6}) {
    k = exit_chain_constants(step, k, sf, model.conservative());
    csv.row(chain_step_name(step), k.epsilon, k.delta, k.c, k.gamma);
  }
  std::vector<std::pair<double, double>> x_r;
  for (double rad : radii) x_r.push_back({x, rad});
  const auto rep = verify_p_condition(model, Region::whole(), kInf, sf, k.c, k.gamma, x_r, ts, ens);
  auto po = r.open("p.csv");
  write_p_csv(po, rep);
  std::size_t ctl = 0;
  for (const auto& row : rep.rows)
    if (row.estimate > k.c * std::exp(-phi_eval(sf, control * k.gamma * row.r, row.t)) + 3.0 * row.se) ++ctl;
  r.check("p_condition", rep.pass, {{"c", k.c}, {"gamma", k.gamma}, {"worst_slack", rep.worst_slack}});
  r.check("negative_control_fails", ctl > 0, {{"violations", ctl}});
}

// ---------------------------------------------------------------- verify-du
void cmd_verify_du(Run& r) {
  auto model = r.cfg.model();
  auto sf = r.cfg.scale();
  auto F = r.cfg.bound("bound_function", model.space(), sf);
  auto ens = ensemble(r, model);
  auto U = r.cfg.region("geometry.U");
  const double R = r.cfg.number("geometry.R");
  auto xs = starts(r.cfg);
  auto ts = times(r, ens.dt);
  const auto depth = r.cfg.count("estimator.depth", 6);
  const double factor = r.cfg.number("estimator.control_factor", 1e-3);
  if (std::isfinite(R))
    for (std::size_t j = 0; j < ts.size(); ++j)
      if (!(ts[j] < sf.psi(R))) r.cfg.fail("estimator.times[" + std::to_string(j) + "]", "must be below Psi(R)");
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!U.contains(model.space(), xs[i])) r.cfg.fail("geometry.starts[" + std::to_string(i) + "]", "must lie in U");
  r.cfg.check();
  std::vector<std::pair<double, double>> t_x;
  for (double t : ts)
    for (double x : xs) t_x.push_back({t, x});
  const auto rep = verify_du_condition(F, model, U, R, sf, t_x, static_cast<int>(depth), ens);
  auto os = r.open("du.csv");
  write_du_csv(os, rep);
  std::size_t ctl = 0;
  for (const auto& row : rep.rows)
    if (row.estimate > factor * row.bound + 3.0 * row.se) ++ctl;
  r.check("du_condition", rep.pass, {{"violations", rep.violations}, {"worst_slack", rep.worst_slack}});
  r.check("negative_control_fails", ctl > 0, {{"violations", ctl}, {"factor", factor}});
}

// ---------------------------------------------------------------- verify-p
void cmd_verify_p(Run& r) {
  auto model = r.cfg.model();
  auto sf = r.cfg.scale();
  auto ens = ensemble(r, model);
  auto U = r.cfg.has("geometry.U") ? r.cfg.region("geometry.U") : Region::whole();
  const double R = r.cfg.number("geometry.R", kInf);
  auto xs = starts(r.cfg);
  auto radii = r.cfg.numbers("estimator.radii");
  auto ts = times(r, ens.dt);
  const double c = r.cfg.number("constants.c"), gamma = r.cfg.number("constants.gamma");
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (double rad : radii)
      if (!(rad < R) || U.distance_to_complement(model.space(), xs[i]) < rad || !U.contains(model.space(), xs[i]))
        r.cfg.fail("estimator.radii", "B(x, r) must lie inside U with r < R for x = " + format_double(xs[i]) +
                                          ", r = " + format_double(rad));
  r.cfg.check();
  std::vector<std::pair<double, double>> x_r;
  for (double x : xs)
    for (double rad : radii) x_r.push_back({x, rad});
  const auto rep = verify_p_condition(model, U, R, sf, c, gamma, x_r, ts, ens);
  auto os = r.open("p.csv");
  write_p_csv(os, rep);
  r.check("p_condition", rep.pass, {{"violations", rep.violations}, {"worst_slack", rep.worst_slack}});
}

// ---------------------------------------------------------------- bound-profile
void cmd_bound_profile(Run& r) {
  auto model = r.cfg.model();
  auto sf = r.cfg.scale();
  auto F = r.cfg.bound("bound_function", model.space(), sf);
  auto U = r.cfg.region("geometry.U");
  const double R = r.cfg.number("geometry.R");
  auto xs = starts(r.cfg);
  auto ys = r.cfg.numbers("geometry.ys");
  auto ts = r.cfg.numbers("estimator.times");
  ChainInputs in;
  in.c_psi = sf.c_psi();
  in.beta1 = sf.beta1();
  in.beta2 = sf.beta2();
  in.c_F = F.c_F();
  in.alpha_F = F.alpha_F();
  in.c = r.cfg.number("constants.c");
  in.gamma = r.cfg.number("constants.gamma");
  in.epsilon = r.cfg.number("constants.epsilon", 0.25);
  in.delta = r.cfg.number("constants.delta", 1.0);
  const std::string mode = r.cfg.text("constants.mode", "chain");
  if (mode != "chain" && mode != "displayed") r.cfg.fail("constants.mode", "must be chain or displayed");
  std::map<std::string, double> ov;
  if (r.cfg.has("constants.overrides")) {
    const auto& o = r.cfg.root()["constants"]["overrides"];
    if (!o.is_object()) r.cfg.fail("constants.overrides", "must be an object of name: value");
    else
      for (auto it = o.begin(); it != o.end(); ++it) ov[it.key()] = r.cfg.number("constants.overrides." + it.key());
  }
  for (std::size_t i = 0; i < ys.size(); ++i)
    if (!inner_set_membership(model.space(), U, in.epsilon, R, ys[i]))
      r.cfg.fail("geometry.ys[" + std::to_string(i) + "]", "must lie in the eps R interior of U");
  r.cfg.check();

  const auto L = derive_constants(in, mode == "chain" ? DeriveMode::chain : DeriveMode::displayed, ov);
  {
    auto os = r.open("ledger.csv");
    write_ledger_csv(os, L);
  }
  r.check("ledger_complete", L.complete());
  if (!L.complete()) return;
  auto os = r.open("profile.csv");
  CsvWriter csv(os, {"t", "x", "y", "distance", "case", "rhs"});
  const Space& space = model.space();
  bool monotone = true;
  const double TR = sf.psi(R);
  for (double t : ts)
    for (double x : xs) {
      std::vector<std::pair<double, double>> d_rhs;
      for (double y : ys) {
        const double v = localized_rhs(L, F, sf, space, R, U, t, x, y);
        const int which = t >= TR ? 3 : (U.contains(space, x) ? 1 : 2);
        csv.row(t, x, y, space.distance(x, y), which, v);
        d_rhs.push_back({space.distance(x, y), v});
      }
      if (t < TR && U.contains(space, x) && F.kind() == BoundFunction::Kind::power) {
        std::sort(d_rhs.begin(), d_rhs.end());
        for (std::size_t i = 1; i < d_rhs.size(); ++i)
          monotone = monotone && d_rhs[i].second <= d_rhs[i - 1].second * (1.0 + 1e-12);
      }
    }
  r.check("monotone_in_distance", monotone);
}

// ---------------------------------------------------------------- acceptance
void cmd_acceptance(Run& r) {
  AcceptanceOptions opt;
  opt.seed = r.seed;
  if (r.cfg.has("acceptance.criteria"))
    for (double v : r.cfg.numbers("acceptance.criteria")) opt.criteria.push_back(static_cast<int>(v));
  r.cfg.check();
  opt.on_result = [](const CriterionResult& c) { std::cout << format_result_line(c) << std::endl; };
  const auto res = run_acceptance(opt);
  auto os = r.open("acceptance.csv");
  CsvWriter csv(os, {"criterion", "name", "pass", "detail"});
  for (const auto& c : res) {
    csv.row(c.id, c.name, c.pass ? 1 : 0, c.detail);
    json m = json::object();
    for (const auto& [k, v] : c.metrics) m[k] = v;
    r.check("criterion " + std::to_string(c.id) + ": " + c.name, c.pass, {{"metrics", m}, {"seconds", c.seconds}});
  }
}

using Cmd = void (*)(Run&);
const std::vector<std::pair<std::string, Cmd>>& table() {
  static const std::vector<std::pair<std::string, Cmd>> t{
      {"phi", cmd_phi},
      {"simulate", cmd_simulate},
      {"estimate", cmd_estimate},
      {"verify-mdh", cmd_verify_mdh},
      {"verify-dh", cmd_verify_dh},
      {"exit-prob", cmd_exit_prob},
      {"verify-chain", cmd_verify_chain},
      {"verify-du", cmd_verify_du},
      {"verify-p", cmd_verify_p},
      {"bound-profile", cmd_bound_profile},
      {"acceptance", cmd_acceptance},
  };
  return t;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_summary(const fs::path& out, const json& j) {
  std::error_code ec;
  fs::create_directories(out, ec);
  std::ofstream os(out / "summary.json");
  if (os) os << j.dump(2) << "\n";
}

}  // namespace

const std::vector<std::string>& cli_subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, f] : table()) v.push_back(n);
    return v;
  }();
  return names;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Monte Carlo heat kernel and exit time toolkit"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  for (const auto& [name, fn] : table()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--seed", seed, "base seed (overrides the config)");
    sub->add_option("--threads", threads, "worker threads (results do not depend on it)");
    sub->add_option("--out", out_dir, "output directory");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitConfig;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  Cmd fn = nullptr;
  for (const auto& [n, f] : table())
    if (n == name) fn = f;

  if (threads) set_thread_count(threads);

  json summary{{"subcommand", name}, {"config", config_path}, {"threads", thread_count()}};
  fs::path out = "hkmc_out";
  try {
    json root = json::object();
    if (!config_path.empty()) root = ConfigReader::from_file(config_path).root();
    else if (name != "acceptance") throw ConfigIssues({"--config: a configuration file is required"});
    Run run{ConfigReader(root), 0, {}, json::array(), {}};
    if (!out_dir.empty()) out = out_dir;
    else if (const char* env = std::getenv("HKMC_OUT_DIR")) out = env;
    else out = run.cfg.text("output_dir", "hkmc_out");
    run.out = out;
    if (seed) run.seed = *seed;
    else if (run.cfg.has("seed")) run.seed = run.cfg.count("seed");
    else if (name == "acceptance") run.seed = AcceptanceOptions{}.seed;
    else if (name != "phi" && name != "bound-profile") run.cfg.fail("seed", "required (or pass --seed)");
    summary["seed"] = run.seed;

    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw ConfigIssues({"--out: cannot create " + out.string() + " (" + ec.message() + ")"});

    fn(run);
    const bool pass = run.all_pass();
    summary["status"] = pass ? "pass" : "fail";
    summary["pass"] = pass;
    summary["checks"] = run.checks;
    summary["files"] = run.files;
    summary["timestamp"] = timestamp();
    write_summary(out, summary);
    for (const auto& c : run.checks)
      std::cout << (c["pass"].get<bool>() ? "[PASS] " : "[FAIL] ") << c["name"].get<std::string>() << "\n";
    std::cout << name << ": " << (pass ? "pass" : "fail") << " (" << (out / "summary.json").string() << ")\n";
    return pass ? kExitPass : kExitFail;
  } catch (const ConfigError& e) {
    std::cerr << "hkmc " << name << ": " << e.what() << "\n";
    summary["status"] = "config_error";
    summary["pass"] = false;
    summary["error"] = e.what();
    summary["timestamp"] = timestamp();
    if (!out.empty()) write_summary(out, summary);
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "hkmc " << name << ": error: " << e.what() << "\n";
    summary["status"] = "error";
    summary["pass"] = false;
    summary["error"] = e.what();
    summary["timestamp"] = timestamp();
    write_summary(out, summary);
    return kExitFail;
  }
}

}  // namespace hkmc
