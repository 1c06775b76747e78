#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cptgrowth/market.hpp"
#include "cptgrowth/quantile.hpp"
#include "cptgrowth/utility.hpp"
#include "cptgrowth/weighting.hpp"

namespace cpt {

enum class SolutionRegime { TwoRegion, ThreeRegion };

// f(lambda) = int_0^1 I(lambda phi_hat'(p)) phi_hat'(p) dp
double f_lambda(double lambda, const EnvelopeData& env, const PhiCurve& phi,
                double abs_tol = 1e-11);

// int_0^1 (max(-log phi_hat'(p), 0))^alpha dp; sets *divergent when the tail
// refuses to settle (ill-posed problem).
double wellposedness_integral(const std::function<double(double)>& phi_hat_prime,
                              double alpha, bool* divergent);

struct NoMultiplierReport {
  double lambda0;        // discontinuity of f
  double f_right_limit;  // lim_{l -> lambda0+} f(l)
  double f_left_limit;   // lim_{l -> lambda0-} f(l)
};

struct LambdaDiagnostics {
  int f_evaluations = 0;
  double f_residual = 0.0;
  std::vector<double> lambda_candidates;  // jump candidates  tilde_v / flat slope
  std::string phi_class;                  // concave | single-gap | general
};

struct LambdaSearch {
  std::optional<double> lambda;
  std::optional<NoMultiplierReport> gap;
  LambdaDiagnostics diag;
};

LambdaSearch solve_lambda(const EnvelopeData& env, const PhiCurve& phi);

struct SolverSolution {
  double lambda_star = 0.0;
  SolutionRegime regime;
  std::shared_ptr<const EnvelopeData> envelope;
  std::shared_ptr<const PhiCurve> phi;
  QuantileCurve G_star;                       // on the phi grid
  std::function<double(double)> wealth_of_rho;
  std::function<double(double)> growth_rate_of_rho;
  std::vector<double> jump_rhos;              // discontinuities of the wealth map
  std::vector<double> quad_split_rhos;        // jumps plus kink images
  double budget_residual_p = 0.0;             // |int G* phi_hat' dp - 1|
  double budget_residual_rho = 0.0;           // |E[rho X] - x0|
  double objective = 0.0;                     // int v(G*) dp
  double wellposedness_value = 0.0;
};

SolverSolution assemble_solution(double lambda_star, const EnvelopeData& env,
                                 const WeightingFunction& wf, const MarketParams& m,
                                 const Benchmark& b, const PhiCurve& phi);

// p-space subdivision points of G*: flat boundaries and threshold crossings.
std::vector<double> solution_p_cuts(const SolverSolution& sol);

struct ZhangSolution {
  double l = 0.0;        // gain boundary
  double lambda1 = 0.0;
  double L = 0.0;        // maximum loss x0 e^wp (1 - e^{-c})
  double jump_rho = 0.0;
  bool truncated_budget = false;  // kernel window truncation was required
  std::function<double(double)> wealth_of_rho;
};

// Wealth-based reference model (identical gain/loss weighting reduction).
// Only constant benchmarks are supported; the budget integral can diverge for
// corner-heavy weightings, in which case the documented kernel window
// convention applies and truncated_budget is set.
ZhangSolution solve_zhang(const MarketParams& m, const Benchmark& b,
                          const WeightingFunction& wf, const UtilityParams& up);

struct ComparisonRow {
  double rho, ours, zhang;
  char region;  // g(ood) / i(ntermediate) / b(ad) per our model's thresholds
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  bool single_crossing = true;
  std::optional<double> lower_crossing;  // largest rho with ours < zhang - tol
  std::optional<double> upper_crossing;  // smallest rho with ours > zhang + tol
};

Comparison compare_maps(const SolverSolution& ours, const ZhangSolution& theirs,
                        std::span<const double> rho_grid, double tol = 1e-9);

// log-spaced kernel grid over mu_rho +- width sigma_rho, densified near jumps
std::vector<double> default_rho_grid(const MarketParams& m,
                                     std::span<const double> jump_rhos, int n = 2001,
                                     double width = 5.0);

}  // namespace cpt
