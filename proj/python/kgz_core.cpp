#include <map>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "kgz/config.hpp"
#include "kgz/errors.hpp"
#include "kgz/experiments.hpp"
#include "kgz/parallel.hpp"
#include "kgz/special.hpp"

namespace py = pybind11;

namespace {

py::dict report_dict(const kgz::ExperimentReport& r) {
  py::dict d;
  for (const auto& [k, v] : r.metrics) d[py::str(k)] = v;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Klein-Gordon-Zakharov simulator core";

  py::register_exception<kgz::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<kgz::DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);

  m.def("bessel_j0", &kgz::bessel_j0, py::arg("s"));
  m.def("bessel_j1", &kgz::bessel_j1, py::arg("s"));
  m.def("bessel_j2", &kgz::bessel_j2, py::arg("s"));
  m.def("asymptotic_gap", &kgz::asymptotic_gap, py::arg("s"));
  m.def(
      "sine_bessel_integral", [](double a, double b) { return kgz::sine_bessel_integral(a, b).value; }, py::arg("a"),
      py::arg("b"));
  m.def(
      "phase_value",
      [](const std::string& kind, kgz::Vec2 xi, kgz::Vec2 eta) {
        static const std::map<std::string, kgz::PhaseKind> kinds = {{"1+", kgz::PhaseKind::Phi1Plus},
                                                                    {"1-", kgz::PhaseKind::Phi1Minus},
                                                                    {"2+", kgz::PhaseKind::Phi2Plus},
                                                                    {"2-", kgz::PhaseKind::Phi2Minus}};
        const auto it = kinds.find(kind);
        if (it == kinds.end()) throw py::value_error("kind must be one of 1+, 1-, 2+, 2-");
        const auto d = kgz::phase_eval(it->second, xi, eta, 1);
        return py::make_tuple(d.value, d.grad);
      },
      py::arg("kind"), py::arg("xi"), py::arg("eta"), "phase value and eta-gradient");
  m.def("theta_moment_part", &kgz::theta_moment_part, py::arg("t"), py::arg("xi_abs"), py::arg("p"), py::arg("t0"),
        py::arg("moment"), py::arg("ds"));

  m.def("set_threads", &kgz::set_threads, py::arg("n"));
  m.def("experiment_names", &kgz::experiment_names);
  m.def("audit_names", &kgz::audit_names);
  m.def(
      "check_config", [](const std::string& path) { return kgz::load_config(path).experiment; }, py::arg("path"),
      "parse and validate a config file, returning its experiment name");
  m.def(
      "run_config",
      [](const std::string& path, const std::filesystem::path& out) {
        const auto c = kgz::load_config(path);
        kgz::ExperimentReport r;
        {
          py::gil_scoped_release nogil;
          r = kgz::run_experiment(c, out);
        }
        return report_dict(r);
      },
      py::arg("path"), py::arg("out"));
  m.def(
      "run_audit",
      [](const std::string& suite) {
        py::list out;
        for (const auto& l : kgz::run_audit(suite)) out.append(py::make_tuple(l.name, l.value, l.bound, l.pass()));
        return out;
      },
      py::arg("suite"), "list of (name, value, bound, passed)");
}
