#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <limits>

#include "visco/decay.hpp"
#include "visco/energy.hpp"
#include "visco/errors.hpp"
#include "visco/experiment.hpp"
#include "visco/io.hpp"
#include "visco/kernel.hpp"
#include "visco/log.hpp"
#include "visco/modes.hpp"
#include "visco/radial.hpp"
#include "visco/verify.hpp"

namespace py = pybind11;
using namespace visco;

namespace {

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict series_dict(const DecaySeries& s) {
  py::dict norms, fits;
  for (const auto& [p, v] : s.norms) norms[py::float_(p)] = v;
  for (const auto& [p, f] : s.fits) {
    py::dict d;
    d["slope"] = f.slope;
    d["std_error"] = f.std_error;
    d["points"] = f.points;
    d["window"] = py::make_tuple(f.window.t0, f.window.t1);
    fits[py::float_(p)] = d;
  }
  py::dict out;
  out["times"] = s.times;
  out["norms"] = norms;
  out["fits"] = fits;
  return out;
}

py::dict fit_dict(const FitResult& f) {
  py::dict d;
  d["slope"] = f.slope;
  d["std_error"] = f.std_error;
  d["points"] = f.points;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linearized and weakly nonlinear compressible viscoelastic flow on the periodic box";

  py::register_exception<IntegrityError>(m, "IntegrityError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double nu, double nu_prime, double beta, double gamma, double kappa) {
             ModelParams p{nu, nu_prime, beta, gamma, kappa};
             p.validate(true);
             return p;
           }),
           py::arg("nu") = 1.0, py::arg("nu_prime") = 0.0, py::arg("beta") = 1.0, py::arg("gamma") = 1.0,
           py::arg("kappa") = 0.0)
      .def_readwrite("nu", &ModelParams::nu)
      .def_readwrite("nu_prime", &ModelParams::nu_prime)
      .def_readwrite("beta", &ModelParams::beta)
      .def_readwrite("gamma", &ModelParams::gamma)
      .def_readwrite("kappa", &ModelParams::kappa)
      .def_property_readonly("nu_tilde", &ModelParams::nu_tilde)
      .def_property_readonly("m1", &ModelParams::m1)
      .def_property_readonly("wave_speed", &ModelParams::wave_speed)
      .def("__repr__", &ModelParams::describe);

  m.def("eigenvalues", [](const ModelParams& p, double k) { return eigenvalues(p, k).mu; }, py::arg("params"),
        py::arg("k"), "Roots mu1..mu4 of the two damped-wave branches at |xi| = k.");
  m.def("branch_factors", &branch_factors, py::arg("a"), py::arg("b"), py::arg("k"), py::arg("t"));
  m.def(
      "kernel_factors",
      [](const ModelParams& p, double k, double t) {
        const auto f = kernel_factors(p, k, t);
        py::dict d;
        d["s_minus"] = f.s_minus;
        d["s_plus"] = f.s_plus;
        d["s_zero"] = f.s_zero;
        d["c_minus"] = f.c_minus;
        d["c_plus"] = f.c_plus;
        d["c_zero"] = f.c_zero;
        return d;
      },
      py::arg("params"), py::arg("k"), py::arg("t"));
  m.def("generator_matrix", [](const ModelParams& p, const Vec3& xi) { return Eigen::MatrixXcd(generator_matrix(p, xi)); },
        py::arg("params"), py::arg("xi"));
  m.def(
      "kernel_apply",
      [](const ModelParams& p, const Vec3& xi, double t, const Eigen::VectorXcd& u) {
        if (u.size() != kStateDim) throw std::invalid_argument("mode vector must have 13 entries");
        return Eigen::VectorXcd(kernel_apply_point(p, xi, t, Mode13(u)));
      },
      py::arg("params"), py::arg("xi"), py::arg("t"), py::arg("u"),
      "Closed-form kernel applied to one constrained Fourier mode (phi, w, Psi row-major).");
  m.def("manifold_basis", [](const Vec3& xi) { return Eigen::MatrixXcd(manifold_basis(xi)); }, py::arg("xi"));

  m.def("theoretical_rate", &theoretical_rate, py::arg("p"));
  m.def(
      "fit_decay_exponent",
      [](const std::vector<double>& t, const std::vector<double>& v, double t0, double t1) {
        return fit_dict(fit_decay_exponent(t, v, {t0, t1}));
      },
      py::arg("times"), py::arg("values"), py::arg("t0"), py::arg("t1"));
  m.def("default_c1", &default_c1, py::arg("params"), py::arg("m1"));

  m.def(
      "radial_decay",
      [](const ModelParams& p, const std::vector<double>& times, double mass, double velocity, double sigma,
         bool heat_reference, std::optional<std::pair<double, double>> window) {
        RadialOptions o;
        o.params = p;
        o.data = {mass, velocity, sigma};
        o.times = times;
        o.heat_reference = heat_reference;
        DecaySeries s;
        {
          py::gil_scoped_release release;
          s = run_linear_radial(o);
        }
        if (window) s.fit_all({window->first, window->second});
        return series_dict(s);
      },
      py::arg("params"), py::arg("times"), py::arg("mass") = 1.0, py::arg("velocity") = 0.0, py::arg("sigma") = 1.0,
      py::arg("heat_reference") = false, py::arg("window") = py::none(),
      "L2, L4 and Linf norms of the radially symmetric linear solution at the given times.");

  m.def(
      "run_experiment",
      [](const std::string& config_text) {
        const auto cfg = ExperimentConfig::parse(config_text);
        ExperimentResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(cfg);
        }
        py::dict d;
        d["config_hash"] = hex64(cfg.hash());
        d["series"] = series_dict(r.series);
        if (!r.low.times.empty()) d["low"] = series_dict(r.low);
        if (!r.high.times.empty()) d["high"] = series_dict(r.high);
        if (r.heat_reference) d["heat_reference"] = series_dict(*r.heat_reference);
        if (r.solenoidal) d["solenoidal"] = series_dict(*r.solenoidal);
        if (r.solenoidal_beta_zero) d["solenoidal_beta_zero"] = series_dict(*r.solenoidal_beta_zero);
        if (r.high_exponential) d["high_exponential"] = fit_dict(*r.high_exponential);
        py::dict res;
        res["div_rhoF"] = r.residuals.div_rhoF;
        res["det"] = r.residuals.det;
        res["curl"] = r.residuals.curl;
        res["phi_trace"] = r.residuals.phi_trace;
        res["n1_trace_n3"] = r.residuals.n1_trace_n3;
        d["residuals"] = res;
        d["window"] = py::make_tuple(r.window.t0, r.window.t1);
        d["horizon"] = r.horizon;
        d["truncated"] = r.truncated;
        d["steps"] = r.steps;
        d["warnings"] = r.warnings;
        return d;
      },
      py::arg("config"), "Runs an experiment described by key=value lines or a JSON object.");

  m.def(
      "verify",
      [](const ModelParams& p, std::uint64_t seed, const std::set<std::string>& suites, bool mutate_kernel) {
        VerifyOptions o;
        o.params = p;
        o.seed = seed;
        o.suites = suites;
        o.mutate_kernel = mutate_kernel;
        VerifyReport r;
        {
          py::gil_scoped_release release;
          r = verify(o);
        }
        return to_python(r.to_json());
      },
      py::arg("params") = ModelParams{}, py::arg("seed") = 1, py::arg("suites") = std::set<std::string>{},
      py::arg("mutate_kernel") = false);
  m.def("verify_suite_names", &verify_suite_names);

  m.def(
      "read_snapshot",
      [](const std::filesystem::path& path) {
        const Snapshot s = read_snapshot(path);
        const auto n = static_cast<py::ssize_t>(s.n);
        py::array_t<double> a({static_cast<py::ssize_t>(s.components.size()), n, n, n});
        std::copy(s.values.begin(), s.values.end(), a.mutable_data());
        py::dict d;
        d["time"] = s.time;
        d["length"] = s.length;
        d["components"] = s.components;
        d["data"] = a;
        return d;
      },
      py::arg("path"));
  m.def("fnv1a64", [](const std::string& s) { return hex64(fnv1a64(s)); }, py::arg("text"));
  m.def(
      "set_quiet",
      [](bool quiet) { set_log_level(quiet ? LogLevel::error : LogLevel::info); }, py::arg("quiet") = true);
}
