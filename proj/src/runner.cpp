#include "cptgrowth/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cptgrowth/errors.hpp"
#include "cptgrowth/oracle.hpp"

namespace cpt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

SolveOutcome solve_scenario(const Scenario& s) {
  SolveOutcome out;
  try {
    out.feasibility = feasibility_check(s.market, s.benchmark);
    if (!out.feasibility.feasible) {
      out.status = SolveStatus::Infeasible;
      out.detail = "E[rho e^benchmark] = " + g12(out.feasibility.expectation) +
                   " >= e^c = " + g12(out.feasibility.bound);
      return out;
    }
    const WeightingFunction wf = s.weighting_function();
    const PhiCurve phi =
        build_phi(eta_quantile(s.market, s.benchmark), wf, s.grids.phi_points);
    const EnvelopeData env(s.utility, s.benchmark.c_hat());
    LambdaSearch search = solve_lambda(env, phi);
    out.diagnostics = search.diag;
    if (!search.lambda) {
      out.status = SolveStatus::NoMultiplier;
      out.gap = search.gap;
      out.detail = "f jumps over 1 at lambda0 = " + g12(search.gap->lambda0);
      return out;
    }
    out.solution =
        assemble_solution(*search.lambda, env, wf, s.market, s.benchmark, phi);
    try {
      out.zhang = solve_zhang(s.market, s.benchmark, wf, s.utility);
    } catch (const unsupported_configuration&) {
      out.zhang.reset();
    }
    out.status = SolveStatus::Solved;
  } catch (const std::exception& e) {
    out.status = SolveStatus::Error;
    out.detail = e.what();
  }
  return out;
}

namespace {

void write_wealth_map(const fs::path& dir, const Scenario& s, const SolveOutcome& oc) {
  std::ofstream os(dir / "wealth_map.csv", std::ios::binary);
  os << "rho,ours,zhang\n";
  const SolverSolution& sol = *oc.solution;
  const std::vector<double> grid =
      default_rho_grid(s.market, sol.jump_rhos, s.grids.rho_points);
  for (double rho : grid) {
    os << g12(rho) << ',' << g12(sol.wealth_of_rho(rho)) << ',';
    os << (oc.zhang ? g12(oc.zhang->wealth_of_rho(rho)) : "nan");
    os << '\n';
  }
}

void write_exposure(const fs::path& dir, const Scenario& s, const SolveOutcome& oc) {
  std::ofstream os(dir / "exposure.csv", std::ios::binary);
  os << "rho_t,ours,zhang\n";
  const double t = std::min(0.5, 0.5 * s.market.T);
  const double tau_sigma = s.market.theta_norm * std::sqrt(t);
  const double mu_t = -(s.market.r + 0.5 * s.market.theta_norm * s.market.theta_norm) * t;
  WealthSurface ours(s.market, oc.solution->wealth_of_rho, oc.solution->quad_split_rhos);
  std::optional<WealthSurface> zh;
  if (oc.zhang)
    zh.emplace(s.market, oc.zhang->wealth_of_rho,
               std::vector<double>{oc.zhang->jump_rho});
  const int n = s.grids.exposure_points;
  for (int i = 0; i < n; ++i) {
    const double z = -3.0 + 6.0 * double(i) / double(n - 1);
    const double rho_t = std::exp(mu_t + tau_sigma * z);
    os << g12(rho_t) << ',' << g12(ours.exposure(t, rho_t)) << ',';
    os << (zh ? g12(zh->exposure(t, rho_t)) : "nan");
    os << '\n';
  }
}

void write_solution_json(const fs::path& dir, const Scenario& s,
                         const SolveOutcome& oc) {
  json j;
  j["scenario"] = s.label();
  j["status"] = oc.status == SolveStatus::Solved        ? "solved"
                : oc.status == SolveStatus::Infeasible  ? "infeasible"
                : oc.status == SolveStatus::NoMultiplier ? "no_multiplier"
                                                         : "error";
  j["feasibility"] = {{"expectation", oc.feasibility.expectation},
                      {"bound", oc.feasibility.bound},
                      {"margin", oc.feasibility.margin}};
  if (!oc.detail.empty()) j["detail"] = oc.detail;
  if (oc.gap) {
    j["no_multiplier"] = {{"lambda0", oc.gap->lambda0},
                          {"f_right_limit", oc.gap->f_right_limit},
                          {"f_left_limit", oc.gap->f_left_limit}};
  }
  if (oc.solution) {
    const SolverSolution& sol = *oc.solution;
    const EnvelopeData& env = *sol.envelope;
    j["lambda"] = sol.lambda_star;
    j["a"] = env.a();
    j["b"] = env.b();
    if (env.regime() == EnvelopeRegime::LocalChord) j["d"] = env.d();
    j["regime"] = sol.regime == SolutionRegime::TwoRegion ? "TwoRegion" : "ThreeRegion";
    j["jumps"] = sol.jump_rhos;
    j["budget_residual_rho"] = sol.budget_residual_rho;
    j["budget_residual_p"] = sol.budget_residual_p;
    j["objective"] = sol.objective;
    j["wellposedness_integral"] = sol.wellposedness_value;
    j["phi_class"] = oc.diagnostics.phi_class;
  }
  if (oc.zhang) {
    j["zhang"] = {{"l", oc.zhang->l},
                  {"lambda1", oc.zhang->lambda1},
                  {"L", oc.zhang->L},
                  {"jump_rho", oc.zhang->jump_rho},
                  {"truncated_budget", oc.zhang->truncated_budget}};
  }
  std::ofstream os(dir / "solution.json", std::ios::binary);
  os << j.dump(2) << '\n';
}

}  // namespace

void emit_weighting_figure(std::ostream& os, const JinZhouParams& jz,
                           double power_exponent) {
  const WeightingFunction wi = WeightingFunction::identity();
  const WeightingFunction wp = WeightingFunction::power(power_exponent);
  const WeightingFunction wj = WeightingFunction::jin_zhou(jz);
  os << "p,identity,power,jinzhou\n";
  for (int i = 0; i <= 1000; ++i) {
    const double p = double(i) / 1000.0;
    os << g12(p) << ',' << g12(wi.w(p)) << ',' << g12(wp.w(p)) << ',' << g12(wj.w(p))
       << '\n';
  }
}

int run(const RunManifest& manifest, int jobs) {
  const fs::path root(manifest.out_dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) {
    std::fprintf(stderr, "cannot create output directory %s\n", root.c_str());
    return 2;
  }

  const size_t n = manifest.scenarios.size();
  std::vector<SolveOutcome> outcomes(n);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      const Scenario& s = manifest.scenarios[i];
      SolveOutcome oc = solve_scenario(s);
      const fs::path dir = root / s.label();
      fs::create_directories(dir);
      if (oc.status == SolveStatus::Solved) {
        write_wealth_map(dir, s, oc);
        write_exposure(dir, s, oc);
      }
      write_solution_json(dir, s, oc);
      outcomes[i] = std::move(oc);
    }
  };
  const int n_workers = std::max(1, std::min<int>(jobs, int(n)));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  {
    std::ofstream os(root / "weighting.csv", std::ios::binary);
    const Scenario& base =
        manifest.scenarios.empty() ? Scenario{} : manifest.scenarios.front();
    emit_weighting_figure(os, base.jz, base.power_exponent);
  }

  bool any_error = false;
  {
    std::ofstream os(root / "summary.csv", std::ios::binary);
    os << "scenario,weighting,c,g,status,regime,lambda,a,b,d,budget_residual,"
          "objective,zhang_l,zhang_lambda1,seed\n";
    for (size_t i = 0; i < n; ++i) {
      const Scenario& s = manifest.scenarios[i];
      const SolveOutcome& oc = outcomes[i];
      os << s.label() << ',' << s.weighting_function().name() << ','
         << g12(s.benchmark.c) << ',' << g12(s.benchmark.g) << ',';
      switch (oc.status) {
        case SolveStatus::Solved: os << "solved"; break;
        case SolveStatus::Infeasible: os << "infeasible"; break;
        case SolveStatus::NoMultiplier: os << "no_multiplier"; break;
        case SolveStatus::Error: os << "error"; any_error = true; break;
      }
      if (oc.solution) {
        const SolverSolution& sol = *oc.solution;
        const EnvelopeData& env = *sol.envelope;
        os << ',' << (sol.regime == SolutionRegime::TwoRegion ? "TwoRegion"
                                                              : "ThreeRegion")
           << ',' << g12(sol.lambda_star) << ',' << g12(env.a()) << ',' << g12(env.b())
           << ','
           << (env.regime() == EnvelopeRegime::LocalChord ? g12(env.d()) : "nan")
           << ',' << g12(sol.budget_residual_rho) << ',' << g12(sol.objective);
      } else {
        os << ",,,,,,,";
      }
      if (oc.zhang)
        os << ',' << g12(oc.zhang->l) << ',' << g12(oc.zhang->lambda1);
      else
        os << ",nan,nan";
      os << ',' << manifest.seed << '\n';
    }
  }
  return any_error ? 1 : 0;
}

bool check_golden(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const std::vector<GoldenRow> rows = golden_value_report();
  write_golden_csv(rows, (fs::path(out_dir) / "golden.csv").string());
  bool ok = true;
  for (const GoldenRow& r : rows) {
    const bool pass = r.residual < 1e-8;
    std::printf("%-32s %.15g residual %.3e %s\n", r.name.c_str(), r.value, r.residual,
                pass ? "ok" : "FAIL");
    ok = ok && pass;
  }
  return ok;
}

}  // namespace cpt
