#include "cptgrowth/solver.hpp"

#include <algorithm>
#include <cmath>

#include "cptgrowth/errors.hpp"
#include "cptgrowth/normal.hpp"
#include "cptgrowth/quadrature.hpp"
#include "cptgrowth/rootfind.hpp"

namespace cpt {

namespace {

constexpr double kPEdge = 1e-13;  // evaluation guard for phi_hat' at 0 and 1

// p where phi_hat'(p) = target (phi_hat' continuous, nonincreasing).
// Returns -1 when the target is above the initial slope (region empty) and
// +2 when it is below the terminal slope (region is everything).
double slope_crossing(const PhiCurve& phi, double target) {
  const double s_hi = phi.phi_hat_prime(kPEdge);
  const double s_lo = phi.phi_hat_prime(1.0 - kPEdge);
  if (target > s_hi) return -1.0;
  if (target < s_lo) return 2.0;
  auto g = [&](double p) { return phi.phi_hat_prime(p) - target; };
  return solve_bisect(g, kPEdge, 1.0 - kPEdge, 1e-14);
}

std::vector<double> f_integration_cuts(double lambda, const EnvelopeData& env,
                                       const PhiCurve& phi) {
  std::vector<double> cuts;
  for (const LinearSegment& seg : phi.flats()) {
    cuts.push_back(seg.p_lo);
    cuts.push_back(seg.p_hi);
  }
  std::vector<double> thresholds{env.jump_slope()};
  if (env.floor_slope() != env.jump_slope()) thresholds.push_back(env.floor_slope());
  for (double th : thresholds) {
    const double p = slope_crossing(phi, th / lambda);
    if (p > 0.0 && p < 1.0) cuts.push_back(p);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace

double f_lambda(double lambda, const EnvelopeData& env, const PhiCurve& phi,
                double abs_tol) {
  if (!(lambda > 0.0)) throw std::domain_error("f_lambda: lambda must be > 0");
  auto integrand = [&](double p) {
    const double s = phi.phi_hat_prime(p);
    return env.optimal_level(lambda * s) * s;
  };
  std::vector<double> cuts = f_integration_cuts(lambda, env, phi);
  double total = 0.0;
  double a = 0.0;
  cuts.push_back(1.0);
  for (double b : cuts) {
    if (b <= a) continue;
    // flat stretches integrate exactly
    const LinearSegment* flat = nullptr;
    for (const LinearSegment& seg : phi.flats())
      if (a >= seg.p_lo - 1e-15 && b <= seg.p_hi + 1e-15) {
        flat = &seg;
        break;
      }
    if (flat) {
      total += env.optimal_level(lambda * flat->slope) * flat->slope * (b - a);
    } else {
      QuadResult r = integrate(integrand, a, b, abs_tol, 1e-10);
      if (!r.converged)
        throw numerical_error("f_lambda: quadrature did not converge", r.error);
      total += r.value;
    }
    a = b;
  }
  return total;
}

double wellposedness_integral(const std::function<double(double)>& phi_hat_prime,
                              double alpha, bool* divergent) {
  if (divergent) *divergent = false;
  auto integrand = [&](double p) {
    const double s = phi_hat_prime(p);
    if (!(s > 0.0)) return std::pow(700.0, alpha);  // log-floor guard
    const double t = -std::log(s);
    return t > 0.0 ? std::pow(t, alpha) : 0.0;
  };
  double total = integrate(integrand, 0.0, 0.5, 1e-11, 1e-10).value;
  // dyadic tail toward p = 1, where phi_hat' may decay to zero
  double prev = std::numeric_limits<double>::infinity();
  int growing = 0;
  for (int k = 1; k <= 50; ++k) {
    const double a = 1.0 - std::pow(2.0, -double(k));
    const double b = 1.0 - std::pow(2.0, -double(k + 1));
    const double seg = integrate(integrand, a, b, 1e-12, 1e-10).value;
    total += seg;
    if (seg > prev * 0.995 && seg > 1e-12) ++growing;
    else growing = 0;
    if (growing >= 4 || total > 1e6) {
      if (divergent) *divergent = true;
      return total;
    }
    if (seg < 1e-13 && k > 8) break;
    prev = seg;
  }
  return total;
}

LambdaSearch solve_lambda(const EnvelopeData& env, const PhiCurve& phi) {
  LambdaSearch out;
  LambdaDiagnostics& diag = out.diag;

  // Appendix-C jump candidates: the flat slopes of phi_hat'
  for (const LinearSegment& seg : phi.flats())
    if (seg.slope > 0.0) diag.lambda_candidates.push_back(env.jump_slope() / seg.slope);
  if (phi.gaps().empty())
    diag.phi_class = phi.flats().empty() ? "concave" : "general";
  if (phi.gaps().size() == 1 && phi.gaps().front().p_lo <= kPEdge)
    diag.phi_class = "single-gap";
  else if (!phi.gaps().empty())
    diag.phi_class = "general";

  auto f = [&](double lambda) {
    ++diag.f_evaluations;
    return f_lambda(lambda, env, phi);
  };

  // geometric bracket on log lambda
  double ll_lo = 0.0, ll_hi = 0.0;
  double f_lo = f(1.0), f_hi = f_lo;
  const double ll_min = std::log(1e-8), ll_max = std::log(1e8);
  while (f_lo < 1.0 && ll_lo > ll_min) {
    ll_lo -= 1.0;
    f_lo = f(std::exp(ll_lo));
  }
  while (f_hi > 1.0 && ll_hi < ll_max) {
    ll_hi += 1.0;
    f_hi = f(std::exp(ll_hi));
  }
  if (f_lo < 1.0 || f_hi > 1.0)
    throw numerical_error("solve_lambda: no bracket inside [1e-8, 1e8]",
                          std::min(std::fabs(f_lo - 1.0), std::fabs(f_hi - 1.0)));

  double best_lambda = 0.0, best_gap = 1e300;
  for (int it = 0; it < 200 && ll_hi - ll_lo > 1e-10; ++it) {
    const double ll = 0.5 * (ll_lo + ll_hi);
    const double fv = f(std::exp(ll));
    if (std::fabs(fv - 1.0) < best_gap) {
      best_gap = std::fabs(fv - 1.0);
      best_lambda = std::exp(ll);
    }
    if (fv >= 1.0)
      ll_lo = ll;
    else
      ll_hi = ll;
  }

  if (best_gap <= 1e-8) {
    out.lambda = best_lambda;
    diag.f_residual = best_gap;
    return out;
  }

  // pinched a discontinuity: identify lambda0 and the one-sided limits
  double lambda0 = 0.5 * (std::exp(ll_lo) + std::exp(ll_hi));
  for (double cand : diag.lambda_candidates)
    if (std::log(cand) >= ll_lo - 1e-8 && std::log(cand) <= ll_hi + 1e-8) lambda0 = cand;
  NoMultiplierReport gap;
  gap.lambda0 = lambda0;
  gap.f_right_limit = f(lambda0 * (1.0 + 1e-9));
  gap.f_left_limit = f(lambda0 * (1.0 - 1e-9));
  diag.f_residual = best_gap;
  if (std::fabs(gap.f_right_limit - 1.0) <= 1e-8) {
    // right-limit solution is optimal (f evaluated right-continuously)
    out.lambda = lambda0;
    diag.f_residual = std::fabs(gap.f_right_limit - 1.0);
    return out;
  }
  out.gap = gap;
  return out;
}

namespace {

struct MapContext {
  double lambda;
  std::shared_ptr<const EnvelopeData> env;
  std::shared_ptr<const PhiCurve> phi;
  WeightingFunction wf;
  MarketParams market;
  Benchmark bench;
  KernelLaw kernel;
  EtaLaw eta;

  double uniform_of_rho(double rho) const {
    const double F = std::clamp(kernel.cdf(rho), 1e-16, 1.0 - 1e-16);
    return eta.comonotone_with_rho ? F : 1.0 - F;
  }
  double zeta_of_rho(double rho) const {
    const double p = std::clamp(1.0 - wf.w(uniform_of_rho(rho)), kPEdge, 1.0 - kPEdge);
    return env->optimal_level(lambda * phi->phi_hat_prime(p));
  }
  double wealth(double rho) const {
    return market.x0 * std::exp(benchmark_growth(market, bench, rho)) *
           zeta_of_rho(rho);
  }
  double growth_rate(double rho) const {
    return benchmark_growth(market, bench, rho) + std::log(zeta_of_rho(rho));
  }
};

// rho at which lambda phi_hat'(1 - w(U(rho))) crosses `threshold`
std::optional<double> threshold_rho(const MapContext& ctx, double threshold) {
  auto slope_minus = [&](double z) {
    const double rho = std::exp(ctx.kernel.mu_rho + ctx.kernel.sigma_rho * z);
    const double p = std::clamp(1.0 - ctx.wf.w(ctx.uniform_of_rho(rho)), kPEdge,
                                1.0 - kPEdge);
    return ctx.lambda * ctx.phi->phi_hat_prime(p) - threshold;
  };
  const double zlo = -12.0, zhi = 12.0;
  const double flo = slope_minus(zlo), fhi = slope_minus(zhi);
  if (flo * fhi > 0.0) return std::nullopt;
  const double z = solve_bisect(slope_minus, zlo, zhi, 1e-13);
  return std::exp(ctx.kernel.mu_rho + ctx.kernel.sigma_rho * z);
}

}  // namespace

SolverSolution assemble_solution(double lambda_star, const EnvelopeData& env,
                                 const WeightingFunction& wf, const MarketParams& m,
                                 const Benchmark& b, const PhiCurve& phi) {
  SolverSolution sol;
  sol.lambda_star = lambda_star;
  sol.envelope = std::make_shared<EnvelopeData>(env);
  sol.phi = std::make_shared<PhiCurve>(phi);
  sol.regime = env.a() <= env.c_hat() ? SolutionRegime::TwoRegion
                                      : SolutionRegime::ThreeRegion;

  MapContext ctx{lambda_star, sol.envelope, sol.phi, wf, m, b,
                 KernelLaw::from(m), eta_law(m, b)};

  // G* on the phi grid
  sol.G_star.interpolation = Interp::PiecewiseLinear;
  const std::vector<double>& grid = phi.grid();
  for (size_t i = 0; i < grid.size(); ++i) {
    const double p = std::clamp(grid[i], kPEdge, 1.0 - kPEdge);
    sol.G_star.grid.push_back(p);
    sol.G_star.values.push_back(
        env.optimal_level(lambda_star * sol.phi->phi_hat_prime(p)));
  }

  if (auto jr = threshold_rho(ctx, env.jump_slope())) {
    sol.jump_rhos.push_back(*jr);
    sol.quad_split_rhos.push_back(*jr);
  }
  if (env.floor_slope() != env.jump_slope()) {
    if (auto kr = threshold_rho(ctx, env.floor_slope()))
      sol.quad_split_rhos.push_back(*kr);  // continuous kink, split for quadrature
  }

  sol.wealth_of_rho = [ctx](double rho) { return ctx.wealth(rho); };
  sol.growth_rate_of_rho = [ctx](double rho) { return ctx.growth_rate(rho); };

  sol.budget_residual_p = std::fabs(f_lambda(lambda_star, env, phi) - 1.0);
  sol.budget_residual_rho =
      std::fabs(budget_value(sol.wealth_of_rho, m, sol.quad_split_rhos) - m.x0);

  // objective int_0^1 v(G*(p)) dp over the same cuts as f
  {
    auto integrand = [&](double p) {
      return v_value(env.params(),
                     env.optimal_level(lambda_star * phi.phi_hat_prime(p)));
    };
    std::vector<double> cuts = f_integration_cuts(lambda_star, env, phi);
    QuadResult r = integrate_segmented(integrand, kPEdge, 1.0 - kPEdge, cuts, 1e-10);
    sol.objective = r.value;
  }

  bool divergent = false;
  sol.wellposedness_value = wellposedness_integral(
      [&phi](double p) { return phi.phi_hat_prime(p); }, env.params().alpha,
      &divergent);
  if (divergent)
    throw numerical_error("assemble_solution: ill-posed scenario",
                          sol.wellposedness_value);
  return sol;
}

namespace {

double zhang_slope(const KernelLaw& kernel, const WeightingFunction& wf,
                   double lambda1, double z) {
  const double rho = std::exp(kernel.mu_rho + kernel.sigma_rho * z);
  const double F = std::clamp(norm_cdf(z), 1e-16, 1.0 - 1e-16);
  return lambda1 * rho / wf.w_prime(F);
}

}  // namespace

ZhangSolution solve_zhang(const MarketParams& m, const Benchmark& b,
                          const WeightingFunction& wf, const UtilityParams& up) {
  m.validate();
  b.validate();
  up.validate();
  if (b.kind != BenchmarkKind::ConstantExcess)
    throw unsupported_configuration(
        "zhang reference model requires a constant benchmark");
  if (!feasibility_check(m, b).feasible)
    throw std::domain_error("zhang: infeasible scenario");

  ZhangSolution sol;
  const double wp = (m.r + b.g) * m.T;
  const double bench_wealth = m.x0 * std::exp(wp);
  sol.L = bench_wealth * (1.0 - b.c_hat());

  // gain boundary: alpha l^{alpha-1} = (l^alpha + kappa L^beta) / (l + L)
  {
    const double L = sol.L;
    auto psi = [&](double l) {
      return up.alpha * std::pow(l, up.alpha - 1.0) * (l + L) - std::pow(l, up.alpha) -
             up.kappa * std::pow(L, up.beta);
    };
    double hi = 1.0;
    while (psi(hi) > 0.0) hi *= 2.0;
    double lo = 1e-12;
    while (psi(lo) < 0.0 && lo > 1e-300) lo *= 0.5;
    sol.l = solve_bisect(psi, lo, hi, 1e-16);
    const double resid = up.alpha * std::pow(sol.l, up.alpha - 1.0) -
                         (std::pow(sol.l, up.alpha) + up.kappa * std::pow(sol.L, up.beta)) /
                             (sol.l + sol.L);
    if (std::fabs(resid) > 1e-8)
      throw numerical_error("zhang: l-equation residual too large", std::fabs(resid));
  }

  const double threshold = up.alpha * std::pow(sol.l, up.alpha - 1.0);
  const KernelLaw kernel = KernelLaw::from(m);

  auto make_map = [=](double lambda1) {
    return [=](double rho) {
      const double F = std::clamp(kernel.cdf(rho), 1e-16, 1.0 - 1e-16);
      const double slope = lambda1 * rho / wf.w_prime(F);
      if (slope <= threshold) return bench_wealth + u_prime_inverse_gain(up, slope);
      return bench_wealth - sol.L;
    };
  };
  auto jump_of = [&](double lambda1) -> double {
    auto g = [&](double z) { return zhang_slope(kernel, wf, lambda1, z) - threshold; };
    if (g(-12.0) > 0.0) return kernel.quantile(1e-16);
    if (g(12.0) < 0.0) return kernel.quantile(1.0 - 1e-16);
    const double z = solve_bisect(g, -12.0, 12.0, 1e-13);
    return std::exp(kernel.mu_rho + kernel.sigma_rho * z);
  };

  bool truncated = false;
  auto budget = [&](double lambda1) {
    const double jr[] = {jump_of(lambda1)};
    bool trunc = false;
    const double val = budget_value(make_map(lambda1), m, jr, &trunc);
    truncated = truncated || trunc;
    return val - m.x0;
  };

  double ll_lo = 0.0, ll_hi = 0.0;
  double b_lo = budget(1.0), b_hi = b_lo;
  while (b_lo < 0.0 && ll_lo > std::log(1e-10)) b_lo = budget(std::exp(ll_lo -= 1.0));
  while (b_hi > 0.0 && ll_hi < std::log(1e10)) b_hi = budget(std::exp(ll_hi += 1.0));
  if (b_lo < 0.0 || b_hi > 0.0)
    throw numerical_error("zhang: no multiplier bracket", std::min(-b_lo, b_hi));
  const double ll = solve_bisect([&](double x) { return budget(std::exp(x)); }, ll_lo,
                                 ll_hi, 1e-12);
  sol.lambda1 = std::exp(ll);
  sol.truncated_budget = truncated;
  sol.jump_rho = jump_of(sol.lambda1);
  sol.wealth_of_rho = make_map(sol.lambda1);
  return sol;
}

std::vector<double> solution_p_cuts(const SolverSolution& sol) {
  return f_integration_cuts(sol.lambda_star, *sol.envelope, *sol.phi);
}

Comparison compare_maps(const SolverSolution& ours, const ZhangSolution& theirs,
                        std::span<const double> rho_grid, double tol) {
  Comparison out;
  const double jump = ours.jump_rhos.empty() ? 1e300 : ours.jump_rhos.front();
  const double floor_rho = ours.quad_split_rhos.empty()
                               ? jump
                               : *std::max_element(ours.quad_split_rhos.begin(),
                                                   ours.quad_split_rhos.end());
  int last_below = -1, first_above = -1;
  for (size_t i = 0; i < rho_grid.size(); ++i) {
    const double rho = rho_grid[i];
    ComparisonRow row{rho, ours.wealth_of_rho(rho), theirs.wealth_of_rho(rho), 'g'};
    if (rho > floor_rho)
      row.region = 'b';
    else if (rho > jump)
      row.region = 'i';
    out.rows.push_back(row);
    const double diff = row.ours - row.zhang;
    if (diff < -tol) last_below = int(i);
    if (diff > tol && first_above < 0) first_above = int(i);
  }
  if (last_below >= 0) out.lower_crossing = rho_grid[last_below];
  if (first_above >= 0) out.upper_crossing = rho_grid[first_above];
  if (last_below >= 0 && first_above >= 0)
    out.single_crossing = last_below < first_above;
  // interleaving check: any strictly-below after first_above breaks it
  if (first_above >= 0)
    for (size_t i = size_t(first_above); i < out.rows.size(); ++i)
      if (out.rows[i].ours - out.rows[i].zhang < -tol) out.single_crossing = false;
  return out;
}

std::vector<double> default_rho_grid(const MarketParams& m,
                                     std::span<const double> jump_rhos, int n,
                                     double width) {
  const KernelLaw kernel = KernelLaw::from(m);
  std::vector<double> grid;
  grid.reserve(size_t(n) + 64 * jump_rhos.size());
  const double lo = kernel.mu_rho - width * kernel.sigma_rho;
  const double hi = kernel.mu_rho + width * kernel.sigma_rho;
  for (int i = 0; i < n; ++i)
    grid.push_back(std::exp(lo + (hi - lo) * double(i) / double(n - 1)));
  for (double jr : jump_rhos) {
    if (!(jr > 0.0)) continue;
    const double lj = std::log(jr);
    for (int i = 0; i < 64; ++i)
      grid.push_back(std::exp(lj + 0.02 * kernel.sigma_rho * (double(i) / 31.5 - 1.0)));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace cpt
