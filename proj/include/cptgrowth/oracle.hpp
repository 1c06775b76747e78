#pragma once

#include <string>
#include <vector>

#include "cptgrowth/solver.hpp"
#include "cptgrowth/utility.hpp"

namespace cpt {

// Desk-scale discretization of the quantile problem: n_bins equal probability
// cells, one level per cell, levels nondecreasing across cells.
struct DiscreteProblem {
  int n_bins = 5;
  std::vector<double> value_grid;   // sorted candidate levels, >= c_hat
  std::vector<double> weights;      // phi_hat' averaged per cell
  double budget_target = 1.0;
  double budget_slack = 0.02;
  double lambda_correction = 0.0;   // first-order Lagrangian correction weight
};

struct OracleResult {
  std::vector<double> assignment;
  double objective = 0.0;           // corrected objective
  double budget = 0.0;
  bool feasible = false;
  long long enumerated = 0;
};

// Exhaustive search over nondecreasing assignments within the budget slack.
OracleResult brute_force_optimum(const DiscreteProblem& problem,
                                 const UtilityParams& up);

// Cell weights and budget-preserving closed-form cell levels for a solved
// scenario; the basis of both the oracle value grid and the certification.
struct ScenarioCells {
  std::vector<double> weights;      // phi_hat' cell averages
  std::vector<double> cf_levels;    // phi_hat'-weighted cell averages of G*
};
ScenarioCells discretize_scenario(const SolverSolution& sol, int n_bins);

// Value grid around the closed-form levels, projected off the forbidden gap.
std::vector<double> oracle_value_grid(const ScenarioCells& cells,
                                      const EnvelopeData& env, int max_levels = 25);

struct GoldenRow {
  std::string name;
  double value;
  double residual;
};

// Tangency pair via damped 2-D Newton on the defining system; kept separate
// from the production nested bisection so the two can certify each other.
std::pair<double, double> envelope_points_independent(const UtilityParams& up);

// Independent recomputation of every frozen constant, with defining-equation
// residuals.  The (a, b) row uses a damped 2-D Newton rather than the slope
// bisection so the two paths are independent.
std::vector<GoldenRow> golden_value_report();
void write_golden_csv(const std::vector<GoldenRow>& rows, const std::string& path);
std::vector<GoldenRow> read_golden_csv(const std::string& path);

}  // namespace cpt
