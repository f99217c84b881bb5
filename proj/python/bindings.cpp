#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "ndpa/amplitudes.hpp"
#include "ndpa/errors.hpp"
#include "ndpa/observables.hpp"
#include "ndpa/scenario.hpp"
#include "ndpa/wei_norman.hpp"

namespace py = pybind11;
using namespace ndpa;

namespace {

// Columns as numpy arrays, keyed by name, in table order.
py::dict table_to_dict(const Table& t) {
  py::dict out;
  for (std::size_t j = 0; j < t.columns.size(); ++j) {
    py::array_t<double> col(static_cast<py::ssize_t>(t.rows.size()));
    auto v = col.mutable_unchecked<1>();
    for (std::size_t i = 0; i < t.rows.size(); ++i) v(static_cast<py::ssize_t>(i)) = t.rows[i][j];
    out[py::str(t.columns[j])] = col;
  }
  return out;
}

FockPair pair(std::pair<int, int> p) { return {p.first, p.second}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Closed-form dynamics of the non-degenerate parametric amplifier";

  py::register_exception<RegimeError>(m, "RegimeError", PyExc_ValueError);
  py::register_exception<ParityError>(m, "ParityError", PyExc_ValueError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<double, double, double, double>(), py::arg("omega_a"),
           py::arg("omega_b"), py::arg("g"), py::arg("omega"))
      .def_static("from_k", &ModelParams::from_k, py::arg("k"), py::arg("g") = 1.0,
                  py::arg("omega_a") = 1.0, py::arg("omega_b") = 1.0)
      .def_static("from_k_squared", &ModelParams::from_k_squared, py::arg("k2"),
                  py::arg("g") = 1.0, py::arg("omega_a") = 1.0, py::arg("omega_b") = 1.0,
                  py::arg("negative_detuning") = false)
      .def_property_readonly("omega_a", &ModelParams::omega_a)
      .def_property_readonly("omega_b", &ModelParams::omega_b)
      .def_property_readonly("g", &ModelParams::g)
      .def_property_readonly("omega", &ModelParams::omega)
      .def_property_readonly("detuning", &ModelParams::detuning)
      .def_property_readonly("k", &ModelParams::k)
      .def_property_readonly("k_squared", &ModelParams::k_squared)
      .def("time_at", &ModelParams::time_at, py::arg("gt"))
      .def("regime", [](const ModelParams& p) { return to_string(classify_regime(p).tag); })
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(omega_a=" + format_number(p.omega_a()) +
               ", omega_b=" + format_number(p.omega_b()) + ", g=" + format_number(p.g()) +
               ", omega=" + format_number(p.omega()) + ")";
      });

  py::class_<WeiNormanCoefficients>(m, "Coefficients")
      .def_readonly("t", &WeiNormanCoefficients::t)
      .def_readonly("a_plus", &WeiNormanCoefficients::a_plus)
      .def_readonly("a_minus", &WeiNormanCoefficients::a_minus)
      .def_readonly("a_zero", &WeiNormanCoefficients::a_zero)
      .def_property_readonly("regime",
                             [](const WeiNormanCoefficients& c) { return to_string(c.regime); })
      .def("unitarity_residual",
           [](const WeiNormanCoefficients& c) { return unitarity_residuals(c).max(); });

  py::class_<DerivedScalars>(m, "DerivedScalars")
      .def_readonly("x", &DerivedScalars::x)
      .def_readonly("y", &DerivedScalars::y)
      .def_readonly("n0", &DerivedScalars::n0)
      .def_readonly("log_x", &DerivedScalars::log_x)
      .def_readonly("log_n0", &DerivedScalars::log_n0);

  m.def("solve_analytic",
        [](const ModelParams& p, double t) { return solve_analytic(p, t); }, py::arg("params"),
        py::arg("t"));
  m.def("solve_ode",
        [](const ModelParams& p, const std::vector<double>& grid, double tol) {
          return solve_ode(PumpProfile::harmonic(p), p, grid, tol);
        },
        py::arg("params"), py::arg("grid"), py::arg("tol") = 1e-10,
        "Integrates the coefficient equations for the harmonic pump.");
  m.def("derived_scalars",
        [](const ModelParams& p, double t) { return derived_scalars(p, t); }, py::arg("params"),
        py::arg("t"));

  m.def("fock_amplitude",
        [](const ModelParams& p, double t, std::pair<int, int> initial, std::pair<int, int> outcome) {
          return fock_amplitude(solve_analytic(p, t), pair(initial),
                                FockOutcome{outcome.first, outcome.second});
        },
        py::arg("params"), py::arg("t"), py::arg("initial"), py::arg("outcome"),
        "<m,n|U|r,s> with initial = (r, s) and outcome = (m, n).");
  m.def("vacuum_prob",
        [](const ModelParams& p, double t, long n) { return vacuum_prob(derived_scalars(p, t), n); },
        py::arg("params"), py::arg("t"), py::arg("n"));
  m.def("fock11_prob",
        [](const ModelParams& p, double t, long n) { return fock11_prob(derived_scalars(p, t), n); },
        py::arg("params"), py::arg("t"), py::arg("n"));
  m.def("poisson_prob",
        [](const ModelParams& p, double t, complex alpha, std::pair<int, int> outcome) {
          return amode_prob(derived_scalars(p, t), PureAModeState::poisson(alpha),
                            FockOutcome{outcome.first, outcome.second});
        },
        py::arg("params"), py::arg("t"), py::arg("alpha"), py::arg("outcome"));
  m.def("coherent_revival_prob",
        [](const ModelParams& p, double t, complex alpha, complex beta) {
          return coherent_revival_prob(solve_analytic(p, t), {alpha, beta}).prob;
        },
        py::arg("params"), py::arg("t"), py::arg("alpha"), py::arg("beta"));
  m.def("coherent_transition_prob",
        [](const ModelParams& p, double t, complex alpha, complex beta, complex w, complex z) {
          return coherent_transition_prob(solve_analytic(p, t), {alpha, beta}, {w, z});
        },
        py::arg("params"), py::arg("t"), py::arg("alpha"), py::arg("beta"), py::arg("w"),
        py::arg("z"));

  m.def("mandel_q_fock",
        [](const ModelParams& p, double t, std::pair<int, int> f) {
          return mandel_q_fock(derived_scalars(p, t), pair(f));
        },
        py::arg("params"), py::arg("t"), py::arg("initial"));
  m.def("cross_correlation_fock",
        [](const ModelParams& p, double t, std::pair<int, int> f) {
          const auto c = cross_correlation_fock(derived_scalars(p, t), pair(f));
          return std::pair<double, std::optional<double>>{c.f, c.normalized};
        },
        py::arg("params"), py::arg("t"), py::arg("initial"), "Returns (f, F); F is None when a mean vanishes.");
  m.def("quadrature_variance",
        [](const ModelParams& p, double theta, double t, std::pair<int, int> f) {
          return quadrature_variance(squeezing_kernel(p, theta, t), pair(f));
        },
        py::arg("params"), py::arg("theta"), py::arg("t"), py::arg("initial") = std::pair{0, 0});
  m.def("uncertainty_product",
        [](const ModelParams& p, double theta, double t, std::pair<int, int> f) {
          return uncertainty_product(p, theta, t, pair(f));
        },
        py::arg("params"), py::arg("theta"), py::arg("t"), py::arg("initial") = std::pair{0, 0});
  m.def("snr_rho_fock",
        [](const ModelParams& p, double t, std::pair<int, int> f) {
          return snr_rho_fock(derived_scalars(p, t), pair(f)).as_double();
        },
        py::arg("params"), py::arg("t"), py::arg("initial"));
  m.def("snr_rho_extrema",
        [](const ModelParams& p, std::pair<int, int> f, double t_max) {
          py::list out;
          for (const auto& e : snr_rho_extrema(p, pair(f), t_max))
            out.append(py::make_tuple(e.t, e.value, to_string(e.kind)));
          return out;
        },
        py::arg("params"), py::arg("initial"), py::arg("t_max"),
        "List of (t, value, kind) above threshold.");

  m.def("fock_revival_times",
        [](const ModelParams& p, int n_max) {
          std::vector<double> out;
          for (const auto& r : fock_revival_times(p, n_max)) out.push_back(r.t_rev);
          return out;
        },
        py::arg("params"), py::arg("n_max"));
  m.def("coherent_revival_params",
        [](int n, int p) {
          const auto r = coherent_revival_params(n, p);
          return py::make_tuple(r.k_squared, r.gt_rev);
        },
        py::arg("n"), py::arg("p"), "Returns (k2, gt_rev).");

  m.def("run_scenario", [](const std::string& text) { return table_to_dict(run(parse_scenario(text))); },
        py::arg("text"), "Runs a key = value scenario; returns {column: array}.");
  m.def("figure_names", &figure_names);
  m.def("figure",
        [](const std::string& name, std::optional<int> steps) {
          auto sc = figure_preset(name);
          if (steps) sc.grid.steps = *steps;
          return table_to_dict(run(sc));
        },
        py::arg("name"), py::arg("steps") = py::none());
  m.def("oracle_check",
        [](const std::string& text, const std::vector<double>& gts) {
          const auto sc = parse_scenario(text);
          py::list out;
          for (const auto& r : oracle_check(sc.series.at(0), gts, OracleConfig{})) {
            py::dict row;
            row["gt"] = r.gt;
            row["cutoff"] = r.cutoff;
            row["prob_diff"] = r.prob_diff;
            row["moment_diff"] = r.moment_diff;
            row["tolerance"] = r.tolerance;
            row["pass"] = r.pass;
            out.append(row);
          }
          return out;
        },
        py::arg("text"), py::arg("gts"));
}
