#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "cptgrowth/scenario.hpp"
#include "cptgrowth/solver.hpp"

namespace cpt {

enum class SolveStatus { Solved, Infeasible, NoMultiplier, Error };

struct SolveOutcome {
  SolveStatus status = SolveStatus::Error;
  std::string detail;
  Feasibility feasibility{};
  std::optional<SolverSolution> solution;
  std::optional<ZhangSolution> zhang;       // absent when unsupported
  std::optional<NoMultiplierReport> gap;
  LambdaDiagnostics diagnostics;
};

// Full pipeline for one cell: feasibility, phi, envelope, lambda, maps, and
// the wealth-based reference model.
SolveOutcome solve_scenario(const Scenario& s);

// Experiment driver: one directory per cell with wealth_map.csv,
// exposure.csv and solution.json, plus summary.csv and weighting.csv at the
// root.  Returns a process exit code.
int run(const RunManifest& manifest, int jobs = 1);

// Figure data for the three weighting curves on 1001 grid points.
void emit_weighting_figure(std::ostream& os, const JinZhouParams& jz,
                           double power_exponent = 0.5);

// Recompute the golden table, write golden.csv under out_dir, return whether
// every residual clears 1e-8.
bool check_golden(const std::string& out_dir);

}  // namespace cpt
