#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cptgrowth/errors.hpp"
#include "cptgrowth/oracle.hpp"
#include "cptgrowth/runner.hpp"

namespace py = pybind11;
using namespace cpt;

namespace {

Scenario make_scenario(double r, double theta, double T, double x0, double c, double g,
                       const std::string& weighting, double alpha, double beta,
                       double kappa, int phi_points) {
  Scenario s;
  s.market = MarketParams{r, theta, T, x0};
  s.benchmark = Benchmark{BenchmarkKind::ConstantExcess, g, 0.0, c};
  s.utility = UtilityParams{alpha, beta, kappa};
  s.weighting = weighting_kind_from_string(weighting);
  const double sigma_rho = KernelLaw::from(s.market).sigma_rho;
  s.jz = JinZhouParams{0.3, 1.6 * sigma_rho, 0.8 * sigma_rho};
  s.grids.phi_points = phi_points;
  return s;
}

py::dict outcome_to_dict(const Scenario& s, const SolveOutcome& oc) {
  py::dict d;
  d["scenario"] = s.label();
  switch (oc.status) {
    case SolveStatus::Solved: d["status"] = "solved"; break;
    case SolveStatus::Infeasible: d["status"] = "infeasible"; break;
    case SolveStatus::NoMultiplier: d["status"] = "no_multiplier"; break;
    case SolveStatus::Error: d["status"] = "error"; break;
  }
  if (!oc.detail.empty()) d["detail"] = oc.detail;
  if (oc.gap) {
    d["lambda0"] = oc.gap->lambda0;
    d["f_right_limit"] = oc.gap->f_right_limit;
    d["f_left_limit"] = oc.gap->f_left_limit;
  }
  if (oc.solution) {
    const SolverSolution& sol = *oc.solution;
    d["lambda"] = sol.lambda_star;
    d["a"] = sol.envelope->a();
    d["b"] = sol.envelope->b();
    if (sol.envelope->regime() == EnvelopeRegime::LocalChord)
      d["d"] = sol.envelope->d();
    d["regime"] =
        sol.regime == SolutionRegime::TwoRegion ? "TwoRegion" : "ThreeRegion";
    d["jumps"] = sol.jump_rhos;
    d["budget_residual"] = sol.budget_residual_rho;
    d["objective"] = sol.objective;
  }
  if (oc.zhang) {
    py::dict z;
    z["l"] = oc.zhang->l;
    z["lambda1"] = oc.zhang->lambda1;
    z["L"] = oc.zhang->L;
    z["jump_rho"] = oc.zhang->jump_rho;
    z["truncated_budget"] = oc.zhang->truncated_budget;
    d["zhang"] = z;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "growth-rate optimal portfolios under prospect-theory preferences";

  py::class_<UtilityParams>(m, "UtilityParams")
      .def(py::init([](double alpha, double beta, double kappa) {
             UtilityParams up{alpha, beta, kappa};
             up.validate();
             return up;
           }),
           py::arg("alpha") = 0.88, py::arg("beta") = 0.88, py::arg("kappa") = 2.5)
      .def_readonly("alpha", &UtilityParams::alpha)
      .def_readonly("beta", &UtilityParams::beta)
      .def_readonly("kappa", &UtilityParams::kappa);

  m.def("u", &u_value, py::arg("params"), py::arg("x"));
  m.def("v", &v_value, py::arg("params"), py::arg("x"));
  m.def("v_prime", &v_prime, py::arg("params"), py::arg("x"));
  m.def("v_prime_inverse_upper", &v_prime_inverse_upper);
  m.def("v_prime_inverse_lower", &v_prime_inverse_lower);
  m.def("global_envelope_points", [](const UtilityParams& up) {
    const auto [a, b] = global_envelope_points(up);
    return py::make_tuple(a, b);
  });

  py::class_<EnvelopeData>(m, "Envelope")
      .def(py::init<const UtilityParams&, double>(), py::arg("params"),
           py::arg("c_hat"))
      .def_property_readonly("a", &EnvelopeData::a)
      .def_property_readonly("b", &EnvelopeData::b)
      .def_property_readonly("c_hat", &EnvelopeData::c_hat)
      .def_property_readonly("d", &EnvelopeData::d)
      .def_property_readonly("two_region",
                             [](const EnvelopeData& e) {
                               return e.regime() == EnvelopeRegime::LocalChord;
                             })
      .def("value", &EnvelopeData::value)
      .def("derivative", &EnvelopeData::derivative)
      .def("optimal_level", &EnvelopeData::optimal_level);

  py::class_<WeightingFunction>(m, "Weighting")
      .def_static("identity", &WeightingFunction::identity)
      .def_static("power", &WeightingFunction::power, py::arg("exponent") = 0.5)
      .def_static("jin_zhou",
                  [](double p_bar, double a_bar, double b_bar) {
                    return WeightingFunction::jin_zhou({p_bar, a_bar, b_bar});
                  },
                  py::arg("p_bar") = 0.3, py::arg("a_bar") = 0.32,
                  py::arg("b_bar") = 0.16)
      .def("w", &WeightingFunction::w)
      .def("w_inv", &WeightingFunction::w_inv)
      .def("w_prime", &WeightingFunction::w_prime)
      .def("nu", &WeightingFunction::nu)
      .def("nu_prime", &WeightingFunction::nu_prime)
      .def_property_readonly("name", &WeightingFunction::name);

  py::class_<PhiCurve>(m, "PhiCurve")
      .def_property_readonly("grid", &PhiCurve::grid)
      .def_property_readonly("phi", &PhiCurve::phi_samples)
      .def_property_readonly("phi_hat", &PhiCurve::phi_hat_samples)
      .def("phi_hat_prime", &PhiCurve::phi_hat_prime)
      .def("phi_value", &PhiCurve::phi_value)
      .def_property_readonly("n_gaps",
                             [](const PhiCurve& c) { return c.gaps().size(); });

  m.def("build_phi", &build_phi, py::arg("eta_quantile"), py::arg("weighting"),
        py::arg("n_grid") = 4001);
  m.def("choquet_expectation",
        py::overload_cast<const std::function<double(double)>&,
                          const WeightingFunction&, double>(&choquet_expectation),
        py::arg("quantile"), py::arg("weighting"), py::arg("abs_tol") = 1e-10);

  m.def("feasibility_check", [](double r, double theta, double T, double x0, double c,
                                double g) {
    const Feasibility f = feasibility_check(MarketParams{r, theta, T, x0},
                                            Benchmark{BenchmarkKind::ConstantExcess, g,
                                                      0.0, c});
    return py::make_tuple(f.feasible, f.margin);
  });

  m.def(
      "solve",
      [](double c, double g, const std::string& weighting, double r, double theta,
         double T, double x0, double alpha, double beta, double kappa,
         int phi_points) {
        const Scenario s = make_scenario(r, theta, T, x0, c, g, weighting, alpha,
                                         beta, kappa, phi_points);
        return outcome_to_dict(s, solve_scenario(s));
      },
      py::arg("c"), py::arg("g") = 0.0, py::arg("weighting") = "identity",
      py::arg("r") = 0.02, py::arg("theta") = 0.2, py::arg("T") = 1.0,
      py::arg("x0") = 1.0, py::arg("alpha") = 0.88, py::arg("beta") = 0.88,
      py::arg("kappa") = 2.5, py::arg("phi_points") = 4001);

  m.def(
      "wealth_map",
      [](double c, double g, const std::string& weighting, std::vector<double> rhos,
         int phi_points) {
        const Scenario s = make_scenario(0.02, 0.2, 1.0, 1.0, c, g, weighting, 0.88,
                                         0.88, 2.5, phi_points);
        const SolveOutcome oc = solve_scenario(s);
        if (oc.status != SolveStatus::Solved)
          throw std::runtime_error("scenario did not solve: " + oc.detail);
        std::vector<double> ours, zhang;
        for (double rho : rhos) {
          ours.push_back(oc.solution->wealth_of_rho(rho));
          zhang.push_back(oc.zhang ? oc.zhang->wealth_of_rho(rho)
                                   : std::nan(""));
        }
        return py::make_tuple(ours, zhang);
      },
      py::arg("c"), py::arg("g"), py::arg("weighting"), py::arg("rhos"),
      py::arg("phi_points") = 4001);

  m.def("run_study", [](const std::string& config_json, const std::string& out_dir,
                        int jobs) {
    RunManifest mf = config_json.empty() ? default_manifest()
                                         : manifest_from_json_text(config_json);
    if (!out_dir.empty()) mf.out_dir = out_dir;
    return run(mf, jobs);
  },
        py::arg("config_json") = "", py::arg("out_dir") = "out", py::arg("jobs") = 1);

  py::register_exception<numerical_error>(m, "NumericalError");
  py::register_exception<unsupported_configuration>(m, "UnsupportedConfiguration");
}
