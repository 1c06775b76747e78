#pragma once

#include <functional>

namespace cpt {

struct Bracket {
  double lo = 0.0, hi = 0.0;
  bool ok = false;
};

// Expand [lo, hi] geometrically about its endpoints until f changes sign.
Bracket expand_bracket(const std::function<double(double)>& f, double lo, double hi,
                       double lo_limit, double hi_limit, int max_steps = 200);

// Bracketing bisection refined by safeguarded Newton steps.  `fprime` may be
// null, in which case the solve is pure bisection.  The root is located to
// `x_tol` absolute on the argument; the caller checks residuals.
double solve_monotone(const std::function<double(double)>& f,
                      const std::function<double(double)>& fprime,
                      double lo, double hi, double x_tol = 1e-12, int max_iter = 200);

inline double solve_bisect(const std::function<double(double)>& f, double lo, double hi,
                           double x_tol = 1e-12, int max_iter = 200) {
  return solve_monotone(f, nullptr, lo, hi, x_tol, max_iter);
}

}  // namespace cpt
