#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hkmc/acceptance.hpp"
#include "hkmc/bounds.hpp"
#include "hkmc/cli.hpp"
#include "hkmc/dynkin_hunt.hpp"
#include "hkmc/parallel.hpp"
#include "hkmc/reference.hpp"

namespace py = pybind11;
using namespace hkmc;

namespace {

Ensemble make_ensemble(std::uint64_t n_paths, double dt, std::uint64_t seed) {
  Ensemble e;
  e.n_paths = n_paths;
  e.dt = dt;
  e.seed = seed;
  return e;
}

py::tuple pair(const EstimateWithError& e) { return py::make_tuple(e.estimate, e.se); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Monte Carlo heat kernel and exit time toolkit";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("set_thread_count", &set_thread_count, py::arg("n"));
  m.def("thread_count", &thread_count);

  py::class_<ScaleFunction>(m, "ScaleFunction")
      .def_static("power", &ScaleFunction::power, py::arg("beta"))
      .def_static("piecewise", &ScaleFunction::piecewise, py::arg("breakpoints"), py::arg("exponents"),
                  py::arg("c_psi"), py::arg("beta1"), py::arg("beta2"))
      .def_static("tabulated", &ScaleFunction::tabulated, py::arg("r"), py::arg("psi"), py::arg("c_psi"),
                  py::arg("beta1"), py::arg("beta2"))
      .def("psi", &ScaleFunction::psi)
      .def("psi_inv", &ScaleFunction::psi_inv)
      .def_property_readonly("c_psi", &ScaleFunction::c_psi)
      .def_property_readonly("beta1", &ScaleFunction::beta1)
      .def_property_readonly("beta2", &ScaleFunction::beta2)
      .def("__repr__", &ScaleFunction::describe);

  m.def("phi", &phi_eval, py::arg("sf"), py::arg("R"), py::arg("t"));
  m.def("phi_power_closed_form", &phi_power_closed_form, py::arg("beta"), py::arg("R"), py::arg("t"));
  m.def("phi_bounds", [](const ScaleFunction& sf, double R, double t) {
    return py::make_tuple(phi_lower_bound(sf, R, t), phi_upper_bound(sf, R, t));
  });

  py::class_<Region>(m, "Region")
      .def_static("whole", &Region::whole)
      .def_static("open_interval", &Region::open_interval)
      .def_static("closed_interval", &Region::closed_interval)
      .def_static("ball", &Region::ball)
      .def_static("vertex_set", &Region::vertex_set)
      .def("__repr__", &Region::describe);

  py::class_<ProcessModel>(m, "ProcessModel")
      .def_static("brownian_line", &ProcessModel::brownian_line, py::arg("scale") = 1.0, py::arg("bridge") = false)
      .def_static("brownian_killed", &ProcessModel::brownian_killed, py::arg("a"), py::arg("b"),
                  py::arg("scale") = 1.0, py::arg("bridge") = false)
      .def_static("brownian_circle", &ProcessModel::brownian_circle, py::arg("circumference"),
                  py::arg("scale") = 1.0, py::arg("bridge") = false)
      .def_static("gasket_walk", &ProcessModel::gasket_walk, py::arg("level"))
      .def_property_readonly("step_time", &ProcessModel::step_time)
      .def("__repr__", &ProcessModel::name);

  m.def(
      "sample_path",
      [](const ProcessModel& model, double x0, double horizon, double dt, std::uint64_t seed, std::uint64_t index) {
        const auto p = sample_path(model, x0, horizon, dt, SeedId{seed, index});
        return py::make_tuple(p.states, p.zeta == kNever ? py::object(py::none()) : py::cast(p.time(p.zeta)));
      },
      py::arg("model"), py::arg("x0"), py::arg("horizon"), py::arg("dt"), py::arg("seed"), py::arg("index") = 0);

  m.def(
      "transition_prob",
      [](const ProcessModel& model, double x, std::vector<double> times, const Region& A, std::uint64_t n_paths,
         double dt, std::uint64_t seed) {
        std::vector<py::tuple> out;
        for (const auto& e : transition_prob_curve(model, x, times, A, make_ensemble(n_paths, dt, seed)))
          out.push_back(pair(e));
        return out;
      },
      py::arg("model"), py::arg("x"), py::arg("times"), py::arg("A"), py::arg("n_paths"), py::arg("dt"),
      py::arg("seed"));

  m.def(
      "exit_prob",
      [](const ProcessModel& model, double x, double r, std::vector<double> times, std::uint64_t n_paths, double dt,
         std::uint64_t seed) {
        std::vector<py::tuple> out;
        for (const auto& e : exit_prob_curve(model, x, r, times, make_ensemble(n_paths, dt, seed)))
          out.push_back(pair(e));
        return out;
      },
      py::arg("model"), py::arg("x"), py::arg("r"), py::arg("times"), py::arg("n_paths"), py::arg("dt"),
      py::arg("seed"));

  m.def(
      "mean_exit_time",
      [](const ProcessModel& model, double x, double r, std::optional<double> cap, double horizon,
         std::uint64_t n_paths, double dt, std::uint64_t seed) {
        const auto m = mean_exit_time(model, x, r, cap, horizon, make_ensemble(n_paths, dt, seed));
        return py::dict(py::arg("estimate") = m.value.estimate, py::arg("se") = m.value.se,
                        py::arg("censored_fraction") = m.censored_fraction);
      },
      py::arg("model"), py::arg("x"), py::arg("r"), py::arg("cap"), py::arg("horizon"), py::arg("n_paths"),
      py::arg("dt"), py::arg("seed"));

  m.def(
      "verify_multiple_dh",
      [](const ProcessModel& model, const Region& U, const Region& B, const Region& A, double x,
         std::vector<double> times, std::uint64_t n_paths, double dt, std::uint64_t seed, std::uint32_t inner_m,
         std::uint32_t n_max) {
        MdhOptions opt;
        opt.n_paths = n_paths;
        opt.dt = dt;
        opt.seed = seed;
        opt.inner_m = inner_m;
        opt.n_max = n_max;
        py::list out;
        for (const auto& L : verify_multiple_dh(model, U, B, A, x, times, opt))
          out.append(py::dict(py::arg("t") = L.t, py::arg("lhs") = pair(L.lhs), py::arg("partial_sum") = L.partial_sum,
                              py::arg("truncation") = L.truncation, py::arg("remainder") = L.remainder,
                              py::arg("diff") = pair(L.diff), py::arg("pass") = L.pass));
        return out;
      },
      py::arg("model"), py::arg("U"), py::arg("B"), py::arg("A"), py::arg("x"), py::arg("times"), py::arg("n_paths"),
      py::arg("dt"), py::arg("seed"), py::arg("inner_m") = 16, py::arg("n_max") = 32);

  m.def(
      "derive_constants",
      [](double c_psi, double beta1, double beta2, double c_F, double alpha_F, double c, double gamma, double epsilon,
         double delta, bool chain, std::map<std::string, double> overrides) {
        ChainInputs in;
        in.c_psi = c_psi;
        in.beta1 = beta1;
        in.beta2 = beta2;
        in.c_F = c_F;
        in.alpha_F = alpha_F;
        in.c = c;
        in.gamma = gamma;
        in.epsilon = epsilon;
        in.delta = delta;
        const auto L = derive_constants(in, chain ? DeriveMode::chain : DeriveMode::displayed, overrides);
        py::dict out;
        for (const auto& e : L.entries) out[py::str(e.name)] = py::make_tuple(e.value, provenance_name(e.provenance));
        return out;
      },
      py::arg("c_psi"), py::arg("beta1"), py::arg("beta2"), py::arg("c_F"), py::arg("alpha_F"), py::arg("c"),
      py::arg("gamma"), py::arg("epsilon") = 0.25, py::arg("delta") = 1.0, py::arg("chain") = true,
      py::arg("overrides") = std::map<std::string, double>{});

  auto ref = m.def_submodule("reference", "closed forms for Brownian motion");
  ref.def("gaussian_interval", &reference::gaussian_interval, py::arg("t"), py::arg("x"), py::arg("a"), py::arg("b"),
          py::arg("scale") = 1.0);
  ref.def("dirichlet_kernel", &reference::dirichlet_kernel, py::arg("t"), py::arg("x"), py::arg("y"), py::arg("a"),
          py::arg("b"), py::arg("scale") = 1.0);
  ref.def("exit_prob_series", &reference::exit_prob_series);
  ref.def("capped_mean_series", &reference::capped_mean_series);

  m.def(
      "run_acceptance",
      [](std::vector<int> criteria, std::uint64_t seed) {
        AcceptanceOptions opt;
        opt.criteria = std::move(criteria);
        opt.seed = seed;
        py::list out;
        for (const auto& r : run_acceptance(opt))
          out.append(py::dict(py::arg("id") = r.id, py::arg("name") = r.name, py::arg("pass") = r.pass,
                              py::arg("detail") = r.detail, py::arg("seconds") = r.seconds));
        return out;
      },
      py::arg("criteria"), py::arg("seed") = AcceptanceOptions{}.seed);

  m.def(
      "cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "hkmc");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        py::gil_scoped_release release;
        return run_cli(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Runs the hkmc command line; returns its exit code.");
}
