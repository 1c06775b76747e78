#pragma once

#include <functional>
#include <span>
#include <vector>

namespace cpt {

struct GaussRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;
};

// Golub-Welsch rules, cached per order.
const GaussRule& legendre_rule(int n);          // weight 1 on [-1, 1]
const GaussRule& hermite_rule(int n);           // weight e^{-t^2} on R (physicists')

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long evals = 0;
  bool converged = true;
};

// Adaptive bisection with an embedded Gauss-Legendre 7/15 pair per interval.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, double rel_tol = 1e-12, int max_depth = 52);

// Same, with mandatory subdivision at interior `points` (jump or kink guards).
QuadResult integrate_segmented(const std::function<double(double)>& f, double a, double b,
                               std::span<const double> points, double abs_tol = 1e-10,
                               double rel_tol = 1e-12);

// E[f(Z)], Z standard normal: adaptive segments over a growing window, split at
// `splits`.  The window starts at +-8.5 and extends until tail segments stop
// contributing; refusal to settle by |z| = 16 raises numerical_error unless
// `truncated` is provided, in which case the flag is set and the windowed
// value returned.
double gaussian_expectation(const std::function<double(double)>& f_of_z,
                            std::span<const double> splits, double abs_tol = 1e-11,
                            bool* truncated = nullptr);

// Fixed-order Gauss-Hermite path for smooth integrands.
double gauss_hermite_expectation(const std::function<double(double)>& f_of_z, int n = 201);

}  // namespace cpt
