#include "cptgrowth/rootfind.hpp"

#include <algorithm>
#include <cmath>

#include "cptgrowth/errors.hpp"

namespace cpt {

Bracket expand_bracket(const std::function<double(double)>& f, double lo, double hi,
                       double lo_limit, double hi_limit, int max_steps) {
  double flo = f(lo), fhi = f(hi);
  for (int i = 0; i < max_steps; ++i) {
    if (std::isfinite(flo) && std::isfinite(fhi) && flo * fhi <= 0.0)
      return {lo, hi, true};
    const double width = hi - lo;
    if (flo * fhi > 0.0) {
      if (std::fabs(flo) < std::fabs(fhi)) {
        lo = std::max(lo_limit, lo - width);
        flo = f(lo);
      } else {
        hi = std::min(hi_limit, hi + width);
        fhi = f(hi);
      }
    } else {
      return {lo, hi, false};
    }
    if (lo <= lo_limit && hi >= hi_limit && flo * fhi > 0.0) break;
  }
  return {lo, hi, false};
}

double solve_monotone(const std::function<double(double)>& f,
                      const std::function<double(double)>& fprime,
                      double lo, double hi, double x_tol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo * fhi < 0.0))
    throw numerical_error("solve_monotone: endpoints do not bracket a root",
                          std::min(std::fabs(flo), std::fabs(fhi)));

  double x = 0.5 * (lo + hi);
  for (int i = 0; i < max_iter; ++i) {
    double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    if (hi - lo < x_tol) return 0.5 * (lo + hi);

    double x_next = 0.0;
    bool newton_ok = false;
    if (fprime) {
      const double dfx = fprime(x);
      if (std::isfinite(dfx) && dfx != 0.0) {
        x_next = x - fx / dfx;
        newton_ok = std::isfinite(x_next) && x_next > lo && x_next < hi;
      }
    }
    x = newton_ok ? x_next : 0.5 * (lo + hi);
  }
  return 0.5 * (lo + hi);
}

}  // namespace cpt
