#include "cptgrowth/utility.hpp"

#include <algorithm>
#include <stdexcept>

#include "cptgrowth/errors.hpp"
#include "cptgrowth/rootfind.hpp"

namespace cpt {

void UtilityParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must be in (0,1)");
  if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("beta must be in (0,1)");
  if (!(kappa > 0.0)) throw std::domain_error("kappa must be > 0");
}

double u_value(const UtilityParams& up, double x) {
  if (!std::isfinite(x)) throw std::domain_error("u: x must be finite");
  return x >= 0.0 ? std::pow(x, up.alpha) : -up.kappa * std::pow(-x, up.beta);
}

double u_prime(const UtilityParams& up, double x) {
  if (x == 0.0) throw std::domain_error("u': undefined at 0");
  return x > 0.0 ? up.alpha * std::pow(x, up.alpha - 1.0)
                 : up.kappa * up.beta * std::pow(-x, up.beta - 1.0);
}

double u_prime_inverse_gain(const UtilityParams& up, double y) {
  if (!(y > 0.0)) throw std::domain_error("u' gain inverse: y must be > 0");
  return std::pow(y / up.alpha, 1.0 / (up.alpha - 1.0));
}

double v_value(const UtilityParams& up, double x) {
  if (!(x > 0.0)) throw std::domain_error("v: x must be > 0");
  return u_value(up, std::log(x));
}

double v_prime(const UtilityParams& up, double x) {
  if (!(x > 0.0)) throw std::domain_error("v': x must be > 0");
  if (x == 1.0) throw std::domain_error("v': singular at x = 1");
  const double t = std::log(x);
  if (t > 0.0) return up.alpha * std::pow(t, up.alpha - 1.0) / x;
  return up.kappa * up.beta * std::pow(-t, up.beta - 1.0) / x;
}

double v_second(const UtilityParams& up, double x) {
  const double t = std::log(x);
  if (x > 1.0) {
    // [u''(t) - u'(t)] / x^2 with u on the gain branch
    const double upp = up.alpha * (up.alpha - 1.0) * std::pow(t, up.alpha - 2.0);
    const double upr = up.alpha * std::pow(t, up.alpha - 1.0);
    return (upp - upr) / (x * x);
  }
  const double s = -t;
  const double upp = -up.kappa * up.beta * (up.beta - 1.0) * std::pow(s, up.beta - 2.0);
  const double upr = up.kappa * up.beta * std::pow(s, up.beta - 1.0);
  return (upp - upr) / (x * x);
}

double v_inflection(const UtilityParams& up) { return std::exp(up.beta - 1.0); }

double v_prime_lower_min(const UtilityParams& up) {
  const double s = 1.0 - up.beta;
  return up.kappa * up.beta * std::pow(s, up.beta - 1.0) * std::exp(s);
}

namespace {

// Inverses are solved in t = |log x| space where both branches are monotone
// exponentials; this keeps full precision near the kink at x = 1.

// Residuals are checked in log space: near the kink at x = 1 the slope is
// steep enough that an x-space evaluation would round through the pole.
void check_log_residual(double lhs_log, double rhs_log) {
  const double r = std::fabs(lhs_log - rhs_log);
  if (r > 1e-8) throw numerical_error("v' inverse residual too large", r);
}

// upper: alpha t^{alpha-1} e^{-t} = y, t > 0
double upper_t_of_slope(const UtilityParams& up, double y) {
  const double ln_target = std::log(y / up.alpha);
  auto f = [&](double t) { return (up.alpha - 1.0) * std::log(t) - t - ln_target; };
  auto fp = [&](double t) { return (up.alpha - 1.0) / t - 1.0; };
  // f decreasing in t; f(0+) = +inf
  double hi = 1.0;
  while (f(hi) > 0.0) hi *= 2.0;
  double lo = std::min(1.0, hi * 0.5);
  while (f(lo) < 0.0 && lo > 1e-300) lo *= 0.5;
  const double t = solve_monotone(f, fp, lo, hi, 1e-15);
  check_log_residual((up.alpha - 1.0) * std::log(t) - t, ln_target);
  return t;
}

// lower: kappa beta t^{beta-1} e^{t} = y, t >= 1 - beta
double lower_t_of_slope(const UtilityParams& up, double y) {
  const double ln_target = std::log(y / (up.kappa * up.beta));
  auto f = [&](double t) { return (up.beta - 1.0) * std::log(t) + t - ln_target; };
  auto fp = [&](double t) { return (up.beta - 1.0) / t + 1.0; };
  // f increasing on [1-beta, inf)
  const double lo = 1.0 - up.beta;
  if (f(lo) >= 0.0) return lo;  // y at (or rounding onto) the branch minimum
  double hi = std::max(2.0, 2.0 * lo);
  while (f(hi) < 0.0) hi *= 2.0;
  const double t = solve_monotone(f, fp, lo, hi, 1e-15);
  check_log_residual((up.beta - 1.0) * std::log(t) + t, ln_target);
  return t;
}

}  // namespace

double v_prime_inverse_upper(const UtilityParams& up, double y) {
  if (!(y > 0.0)) throw std::domain_error("v' upper inverse: y must be > 0");
  return std::exp(upper_t_of_slope(up, y));
}

double v_prime_inverse_lower(const UtilityParams& up, double y) {
  if (!(y >= v_prime_lower_min(up)))
    throw std::domain_error("v' lower inverse: y below branch minimum");
  return std::exp(-lower_t_of_slope(up, y));
}

namespace {

// Appendix-A construction: f1/f2 are the branch-wise conjugates
// inf { y x - v(x) } over x >= 1 and 0 < x <= 1; their crossing slope is the
// common tangent.
struct ConjPoint {
  double value, x;
};

ConjPoint conj_upper(const UtilityParams& up, double y) {
  const double t = upper_t_of_slope(up, y);
  const double x = std::exp(t);
  return {y * x - std::pow(t, up.alpha), x};
}

ConjPoint conj_lower(const UtilityParams& up, double y) {
  // minimum over (0, 1]: interior critical point on the concave part when it
  // beats the endpoint x = 1 (value y there, since v(1) = 0)
  if (y > v_prime_lower_min(up)) {
    const double t = lower_t_of_slope(up, y);
    const double x = std::exp(-t);
    const double val = y * x + up.kappa * std::pow(t, up.beta);
    if (val < y) return {val, x};
  }
  return {y, 1.0};
}

}  // namespace

std::pair<double, double> global_envelope_points(const UtilityParams& up) {
  up.validate();
  auto h = [&](double y) { return conj_upper(up, y).value - conj_lower(up, y).value; };
  Bracket br = expand_bracket(h, 1.0, 2.0, 1e-12, 1e12);
  if (!br.ok) throw numerical_error("global envelope: no slope bracket found");
  const double y_star = solve_bisect(h, br.lo, br.hi, 1e-15);
  const double a = conj_lower(up, y_star).x;
  const double b = conj_upper(up, y_star).x;

  const double chord = (v_value(up, b) - v_value(up, a)) / (b - a);
  const double r1 = std::fabs(v_prime(up, a) - v_prime(up, b));
  const double r2 = std::fabs(v_prime(up, a) - chord);
  if (r1 > 1e-8 || r2 > 1e-8)
    throw numerical_error("global envelope residual too large", std::max(r1, r2));
  return {a, b};
}

EnvelopeData::EnvelopeData(const UtilityParams& up, double c_hat) : params_(up) {
  up.validate();
  if (!(c_hat > 0.0 && c_hat < 1.0)) throw std::domain_error("c_hat must be in (0,1)");
  c_hat_ = c_hat;
  std::tie(a_, b_) = global_envelope_points(up);

  if (c_hat <= a_) {
    regime_ = EnvelopeRegime::GlobalCoincides;
    slope_ = v_prime(up, a_);
    jump_slope_ = slope_;
    floor_slope_ = v_prime(up, c_hat);
  } else {
    regime_ = EnvelopeRegime::LocalChord;
    // chord from (c_hat, v(c_hat)) tangent to the gain branch at d in (1, b):
    // v'(d) (d - c_hat) = v(d) - v(c_hat).  Solved in t = log d.
    const double vch = v_value(up, c_hat);
    auto h = [&](double t) {
      const double d = std::exp(t);
      return v_prime(up, d) * (d - c_hat) - (std::pow(t, up.alpha) - vch);
    };
    const double t_hi = std::log(b_);
    double t_lo = std::min(1e-9, 0.5 * t_hi);
    while (h(t_lo) < 0.0 && t_lo > 1e-300) t_lo *= 0.5;
    const double t_d = solve_bisect(h, t_lo, t_hi, 1e-16);
    d_ = std::exp(t_d);
    slope_ = v_prime(up, d_);
    jump_slope_ = slope_;
    floor_slope_ = slope_;
    const double resid = std::fabs(slope_ - (v_value(up, d_) - vch) / (d_ - c_hat));
    if (resid > 1e-8) throw numerical_error("d-equation residual too large", resid);
  }
}

double EnvelopeData::d() const {
  if (regime_ != EnvelopeRegime::LocalChord)
    throw std::logic_error("d is defined only in the LocalChord regime");
  return d_;
}

double EnvelopeData::value(double x) const {
  if (!(x >= c_hat_)) throw std::domain_error("envelope value: x below c_hat");
  if (regime_ == EnvelopeRegime::LocalChord) {
    if (x >= d_) return v_value(params_, x);
    return v_value(params_, c_hat_) + slope_ * (x - c_hat_);
  }
  if (x >= b_) return v_value(params_, x);
  if (x <= a_) return v_value(params_, x);
  return v_value(params_, a_) + slope_ * (x - a_);
}

double EnvelopeData::derivative(double x) const {
  if (!(x >= c_hat_)) throw std::domain_error("envelope derivative: x below c_hat");
  if (regime_ == EnvelopeRegime::LocalChord)
    return x >= d_ ? v_prime(params_, x) : slope_;
  if (x >= b_) return v_prime(params_, x);
  if (x >= a_) return slope_;
  return v_prime(params_, x);
}

double EnvelopeData::optimal_level(double x) const {
  if (!(x > 0.0)) throw std::domain_error("I: x must be > 0");
  if (regime_ == EnvelopeRegime::LocalChord) {
    if (x >= jump_slope_) return c_hat_;
    return v_prime_inverse_upper(params_, x);  // lands in (d, inf)
  }
  if (x >= floor_slope_) return c_hat_;
  if (x > jump_slope_) return v_prime_inverse_lower(params_, x);  // lands in (c_hat, a)
  if (x == jump_slope_) return a_;
  return v_prime_inverse_upper(params_, x);  // lands in (b, inf)
}

}  // namespace cpt
