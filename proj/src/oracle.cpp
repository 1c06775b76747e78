#include "cptgrowth/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "cptgrowth/errors.hpp"
#include "cptgrowth/quadrature.hpp"

namespace cpt {

namespace {

void enumerate_rec(const DiscreteProblem& pb, const UtilityParams& up,
                   std::vector<int>& idx, int bin, int min_level, double partial_budget,
                   double partial_utility, OracleResult& best) {
  const int n = pb.n_bins;
  const int levels = int(pb.value_grid.size());
  if (bin == n) {
    ++best.enumerated;
    const double dev = partial_budget - pb.budget_target;
    if (std::fabs(dev) > pb.budget_slack) return;
    const double obj = partial_utility / n + pb.lambda_correction * (-dev);
    if (!best.feasible || obj > best.objective) {
      best.feasible = true;
      best.objective = obj;
      best.budget = partial_budget;
      best.assignment.resize(n);
      for (int i = 0; i < n; ++i) best.assignment[i] = pb.value_grid[idx[i]];
    }
    return;
  }
  // budget prune: remaining cells are at least the current level, at most max
  double w_min = 0.0, w_max = 0.0;
  for (int j = bin; j < n; ++j) {
    w_min += pb.weights[j];
    w_max += pb.weights[j];
  }
  for (int lev = min_level; lev < levels; ++lev) {
    const double g = pb.value_grid[lev];
    const double lo = partial_budget + g * w_min / n;
    const double hi = partial_budget + pb.value_grid[levels - 1] * w_max / n;
    if (lo > pb.budget_target + pb.budget_slack) break;       // monotone in lev
    if (hi < pb.budget_target - pb.budget_slack) continue;
    idx[bin] = lev;
    enumerate_rec(pb, up, idx, bin + 1, lev,
                  partial_budget + g * pb.weights[bin] / n,
                  partial_utility + v_value(up, g), best);
  }
}

}  // namespace

OracleResult brute_force_optimum(const DiscreteProblem& pb, const UtilityParams& up) {
  if (pb.n_bins < 1 || pb.n_bins > 6)
    throw std::domain_error("oracle: n_bins must be in [1, 6]");
  if (pb.value_grid.size() > 25)
    throw std::domain_error("oracle: at most 25 candidate levels");
  if (int(pb.weights.size()) != pb.n_bins)
    throw std::domain_error("oracle: weights size mismatch");
  if (!std::is_sorted(pb.value_grid.begin(), pb.value_grid.end()))
    throw std::domain_error("oracle: value grid must be sorted");
  OracleResult best;
  std::vector<int> idx(pb.n_bins, 0);
  enumerate_rec(pb, up, idx, 0, 0, 0.0, 0.0, best);
  return best;
}

ScenarioCells discretize_scenario(const SolverSolution& sol, int n_bins) {
  ScenarioCells out;
  const PhiCurve& phi = *sol.phi;
  const EnvelopeData& env = *sol.envelope;
  const double lambda = sol.lambda_star;
  std::vector<double> cuts = solution_p_cuts(sol);
  auto weight = [&](double p) { return phi.phi_hat_prime(p); };
  auto flow = [&](double p) {
    const double s = phi.phi_hat_prime(p);
    return env.optimal_level(lambda * s) * s;
  };
  for (int i = 0; i < n_bins; ++i) {
    const double lo = std::max(1e-13, double(i) / n_bins);
    const double hi = std::min(1.0 - 1e-13, double(i + 1) / n_bins);
    const double mass = integrate_segmented(weight, lo, hi, cuts, 1e-12).value;
    const double budget = integrate_segmented(flow, lo, hi, cuts, 1e-12).value;
    out.weights.push_back(mass / (hi - lo));
    out.cf_levels.push_back(budget / mass);
  }
  return out;
}

std::vector<double> oracle_value_grid(const ScenarioCells& cells,
                                      const EnvelopeData& env, int max_levels) {
  const double gap_lo = env.regime() == EnvelopeRegime::LocalChord ? env.c_hat() : env.a();
  const double gap_hi = env.regime() == EnvelopeRegime::LocalChord ? env.d() : env.b();
  auto project = [&](double g) {
    if (g > gap_lo && g < gap_hi)
      return (g - gap_lo < gap_hi - g) ? gap_lo : gap_hi;
    return g;
  };
  std::set<double> levels{env.c_hat()};
  static const double kFactors[] = {0.97, 0.99, 1.0, 1.01, 1.03};
  for (double cf : cells.cf_levels)
    for (double f : kFactors) {
      const double x = project(cf) * f;
      if (x >= env.c_hat() && !(x > gap_lo && x < gap_hi)) levels.insert(x);
    }
  std::vector<double> out(levels.begin(), levels.end());
  if (int(out.size()) > max_levels) out.resize(max_levels);
  return out;
}

// Independent (a, b) route: damped 2-D Newton on the tangency system.
std::pair<double, double> envelope_points_independent(const UtilityParams& up) {
  double a = 0.9 * v_inflection(up);
  double b = 1.0 + 1e-4;
  auto F1 = [&](double x, double y) { return v_prime(up, x) - v_prime(up, y); };
  auto F2 = [&](double x, double y) {
    return v_prime(up, x) * (y - x) - (v_value(up, y) - v_value(up, x));
  };
  double r_prev = 1e300;
  for (int it = 0; it < 400; ++it) {
    const double f1 = F1(a, b), f2 = F2(a, b);
    const double res = std::fabs(f1) + std::fabs(f2);
    if (res < 1e-12) break;
    const double j11 = v_second(up, a), j12 = -v_second(up, b);
    const double j21 = v_second(up, a) * (b - a), j22 = v_prime(up, a) - v_prime(up, b);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0) throw numerical_error("golden (a,b): singular jacobian");
    double da = -(f1 * j22 - f2 * j12) / det;
    double db = -(j11 * f2 - j21 * f1) / det;
    double step = 1.0;
    for (int back = 0; back < 60; ++back) {
      const double an = std::clamp(a + step * da, 1e-6, v_inflection(up) * (1 - 1e-9));
      const double bn = std::max(b + step * db, 1.0 + 1e-13);
      const double rn = std::fabs(F1(an, bn)) + std::fabs(F2(an, bn));
      if (rn < res || rn < r_prev) {
        a = an;
        b = bn;
        r_prev = rn;
        break;
      }
      step *= 0.5;
    }
  }
  return {a, b};
}

std::vector<GoldenRow> golden_value_report() {
  std::vector<GoldenRow> rows;
  const UtilityParams up{};  // 0.88 / 0.88 / 2.5 reference parameterization
  const MarketParams market{};

  const auto [a_n, b_n] = envelope_points_independent(up);
  const double chord = (v_value(up, b_n) - v_value(up, a_n)) / (b_n - a_n);
  rows.push_back({"a", a_n, std::fabs(v_prime(up, a_n) - v_prime(up, b_n))});
  rows.push_back({"b", b_n, std::fabs(v_prime(up, a_n) - chord)});

  for (double c : {0.1, 0.2, 0.3}) {
    const EnvelopeData env(up, std::exp(-c));
    char name[32];
    if (env.regime() == EnvelopeRegime::LocalChord) {
      std::snprintf(name, sizeof name, "d_c%.1f", c);
      const double resid = std::fabs(
          v_prime(up, env.d()) -
          (v_value(up, env.d()) - v_value(up, env.c_hat())) / (env.d() - env.c_hat()));
      rows.push_back({name, env.d(), resid});
    } else {
      std::snprintf(name, sizeof name, "regime_c%.1f", c);
      rows.push_back({name, 3.0, 0.0});  // three-region marker
    }
  }

  struct Cell {
    const char* weighting;
    double g, c;
  };
  static const Cell kCells[] = {
      {"identity", 0.0, 0.1},  {"identity", 0.0, 0.2},   {"identity", 0.0, 0.3},
      {"identity", 0.05, 0.2}, {"identity", -0.05, 0.3}, {"power", 0.0, 0.2},
      {"power", 0.05, 0.1},    {"power", -0.05, 0.3},    {"jinzhou", 0.0, 0.2},
      {"jinzhou", 0.05, 0.1},  {"jinzhou", -0.05, 0.3}};
  for (const Cell& cell : kCells) {
    const Benchmark bench{BenchmarkKind::ConstantExcess, cell.g, 0.0, cell.c};
    const WeightingFunction wf =
        WeightingFunction::from_kind(weighting_kind_from_string(cell.weighting));
    const PhiCurve phi = build_phi(eta_quantile(market, bench), wf);
    const EnvelopeData env(up, bench.c_hat());
    const LambdaSearch search = solve_lambda(env, phi);
    char name[64];
    std::snprintf(name, sizeof name, "lambda_%s_g%+.2f_c%.1f", cell.weighting, cell.g,
                  cell.c);
    if (search.lambda)
      rows.push_back({name, *search.lambda,
                      std::fabs(f_lambda(*search.lambda, env, phi) - 1.0)});
    else
      rows.push_back({name, 0.0, 1.0});
  }

  for (const auto& [g, c] : std::vector<std::pair<double, double>>{
           {0.0, 0.1}, {0.0, 0.2}, {0.0, 0.3}, {0.05, 0.2}, {-0.05, 0.3}}) {
    const Benchmark bench{BenchmarkKind::ConstantExcess, g, 0.0, c};
    const ZhangSolution zh =
        solve_zhang(market, bench, WeightingFunction::identity(), up);
    const double resid =
        up.alpha * std::pow(zh.l, up.alpha - 1.0) -
        (std::pow(zh.l, up.alpha) + up.kappa * std::pow(zh.L, up.beta)) / (zh.l + zh.L);
    char name[64];
    std::snprintf(name, sizeof name, "l_g%+.2f_c%.1f", g, c);
    rows.push_back({name, zh.l, std::fabs(resid)});
    std::snprintf(name, sizeof name, "lambda1_identity_g%+.2f_c%.1f", g, c);
    bool trunc = false;
    const double jr[] = {zh.jump_rho};
    const double budget = budget_value(zh.wealth_of_rho, market, jr, &trunc);
    rows.push_back({name, zh.lambda1, std::fabs(budget - market.x0)});
  }

  return rows;
}

void write_golden_csv(const std::vector<GoldenRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "name,value,residual\n";
  char line[160];
  for (const GoldenRow& r : rows) {
    std::snprintf(line, sizeof line, "%s,%.15g,%.3e\n", r.name.c_str(), r.value,
                  r.residual);
    out << line;
  }
}

std::vector<GoldenRow> read_golden_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<GoldenRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const size_t c1 = line.find(','), c2 = line.rfind(',');
    if (c1 == std::string::npos || c2 == c1) continue;
    rows.push_back({line.substr(0, c1), std::stod(line.substr(c1 + 1, c2 - c1 - 1)),
                    std::stod(line.substr(c2 + 1))});
  }
  return rows;
}

}  // namespace cpt
