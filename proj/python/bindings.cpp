#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "llz/errors.hpp"
#include "llz/moments.hpp"
#include "llz/predictions.hpp"
#include "llz/rmt.hpp"
#include "llz/runner.hpp"
#include "llz/symmetry.hpp"
#include "llz/testfn.hpp"

namespace py = pybind11;

namespace {

llz::Support to_support(double delta) {
  return std::isinf(delta) ? llz::Support::infinite() : llz::Support(delta);
}

py::dict run_dict(const std::string& subcommand, const std::map<std::string, std::string>& options) {
  llz::ExperimentConfig cfg;
  for (const auto& [k, v] : options) cfg.set(k, v);
  const auto r = llz::run(subcommand, cfg);
  py::dict artifacts;
  for (const auto& a : r.artifacts) artifacts[py::str(a.name)] = a.content;
  py::dict out;
  out["exit_code"] = r.exit_code;
  out["check_requested"] = r.check_requested;
  out["check_passed"] = r.check_passed;
  out["check_messages"] = r.check_messages;
  out["warnings"] = r.warnings;
  out["artifacts"] = artifacts;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Low-lying zero densities, nonvanishing bounds and central-value moments.";
  m.attr("__version__") = LLZ_VERSION;

  py::register_exception<llz::InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
  py::register_exception<llz::UnsupportedArgument>(m, "UnsupportedArgument", PyExc_ValueError);

  py::enum_<llz::Group>(m, "Group")
      .value("U", llz::Group::kU)
      .value("O", llz::Group::kO)
      .value("SOeven", llz::Group::kSOeven)
      .value("SOodd", llz::Group::kSOodd)
      .value("Sp", llz::Group::kSp);
  py::enum_<llz::SignRegime>(m, "SignRegime")
      .value("AnySign", llz::SignRegime::kAnySign)
      .value("AllPlusOne", llz::SignRegime::kAllPlusOne);
  m.def("parse_group", [](const std::string& s) { return llz::parse_group(s); });

  py::class_<llz::TestFunction>(m, "TestFunction")
      .def_static("fejer", &llz::TestFunction::fejer, py::arg("delta"))
      .def_static(
          "piecewise_linear",
          [](const std::vector<std::pair<double, double>>& knots) {
            std::vector<llz::FourierKnot> k;
            for (auto [y, v] : knots) k.push_back({y, v});
            return llz::TestFunction::piecewise_linear(std::move(k));
          },
          py::arg("knots"))
      .def("__call__", &llz::TestFunction::eval, py::arg("x"))
      .def("hat", &llz::TestFunction::eval_hat, py::arg("y"))
      .def_property_readonly("support", &llz::TestFunction::support);

  m.def("density_integral", &llz::density_integral, py::arg("group"), py::arg("phi"));
  m.def("dirac_weight", &llz::dirac_weight, py::arg("group"));
  m.def("kappa", [](llz::Group g, double d) { return llz::kappa(g, to_support(d)); }, py::arg("group"),
        py::arg("delta"));
  m.def(
      "eta",
      [](llz::Group g, llz::SignRegime r, double d, bool clamp) {
        const auto e = llz::eta({g, r}, to_support(d));
        return clamp ? e.eta : e.eta_raw;
      },
      py::arg("group"), py::arg("regime"), py::arg("delta"), py::arg("clamp") = false);
  m.def("delta_min", [](llz::Group g, llz::SignRegime r) { return llz::delta_min({g, r}); }, py::arg("group"),
        py::arg("regime"));
  m.def("nonvanishing_bound", py::overload_cast<double, llz::SignRegime>(&llz::nonvanishing_bound),
        py::arg("density_value"), py::arg("regime"));

  m.def("gaussian_moment", &llz::gaussian_moment, py::arg("k"));
  m.def("gaussian_mass", &llz::gaussian_mass, py::arg("alpha"), py::arg("beta"));

  m.def(
      "ensemble_density",
      [](llz::Group g, int M, const llz::TestFunction& phi, std::size_t n, std::uint64_t seed, unsigned workers) {
        py::gil_scoped_release release;
        const auto e = llz::ensemble_density(g, M, phi, n, seed, workers);
        return std::make_pair(e.mean, e.std_error);
      },
      py::arg("group"), py::arg("dim"), py::arg("phi"), py::arg("samples"), py::arg("seed") = 1,
      py::arg("workers") = 1, "Monte Carlo (mean, std_error) of the periodized one-level statistic.");

  m.def("run", &run_dict, py::arg("subcommand"), py::arg("options") = std::map<std::string, std::string>{},
        "Runs a CLI subcommand in memory; returns exit status, checks and artifacts.");
  m.def("subcommands", &llz::subcommands);
}
