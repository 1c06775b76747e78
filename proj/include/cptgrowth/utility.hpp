#pragma once

#include <cmath>
#include <utility>

namespace cpt {

// Piece-wise power utility of Tversky-Kahneman type.
struct UtilityParams {
  double alpha = 0.88;   // gain curvature, in (0,1)
  double beta = 0.88;    // loss curvature, in (0,1)
  double kappa = 2.5;    // loss aversion, > 0
  void validate() const;
};

// u(x) = x^alpha (x >= 0), -kappa (-x)^beta (x < 0)
double u_value(const UtilityParams& up, double x);
double u_prime(const UtilityParams& up, double x);          // x != 0
double u_prime_inverse_gain(const UtilityParams& up, double y);  // gain branch, y > 0

// v(x) = u(log x), x > 0.  Concave on (0, e^{beta-1}], convex on
// [e^{beta-1}, 1], concave on [1, inf).
double v_value(const UtilityParams& up, double x);
double v_prime(const UtilityParams& up, double x);           // x > 0, x != 1
double v_second(const UtilityParams& up, double x);          // away from x = 1
double v_inflection(const UtilityParams& up);                // e^{beta-1}

// Branch inverses of v'.  The upper branch lives on (1, inf) where v' is a
// strictly decreasing bijection onto (0, inf); the lower branch is v'
// restricted to (0, e^{beta-1}], decreasing from +inf down to its minimum
// v'(e^{beta-1}).
double v_prime_inverse_upper(const UtilityParams& up, double y);
double v_prime_inverse_lower(const UtilityParams& up, double y);
double v_prime_lower_min(const UtilityParams& up);           // v'(e^{beta-1})

// Tangency pair 0 < a < 1 < b of the global concave envelope:
// v'(a) = v'(b) = (v(b) - v(a)) / (b - a).
std::pair<double, double> global_envelope_points(const UtilityParams& up);

enum class EnvelopeRegime {
  GlobalCoincides,  // c_hat <= a: local envelope equals the global one on [c_hat, inf)
  LocalChord,       // c_hat > a: chord on [c_hat, d], coincides with v on [d, inf)
};

// Concave envelope of v on [c_hat, inf) and the generalized inverse of its
// derivative.
class EnvelopeData {
 public:
  EnvelopeData(const UtilityParams& up, double c_hat);

  const UtilityParams& params() const { return params_; }
  EnvelopeRegime regime() const { return regime_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double c_hat() const { return c_hat_; }
  double d() const;                  // LocalChord only
  double slope() const { return slope_; }   // common tangent slope of the active chord

  // Thresholds of the envelope derivative.  jump_slope is where I jumps
  // (v'(d) or v'(a)); floor_slope is where I hits the floor c_hat
  // (v'(d) or v'(c_hat)).
  double jump_slope() const { return jump_slope_; }
  double floor_slope() const { return floor_slope_; }

  // Envelope value and right derivative on [c_hat, inf).
  double value(double x) const;
  double derivative(double x) const;

  // I(x): right-continuous generalized inverse of the envelope derivative.
  // Decreasing, never lands strictly inside (c_hat, d) resp. (a, b).
  double optimal_level(double x) const;

 private:
  UtilityParams params_;
  EnvelopeRegime regime_;
  double a_, b_, c_hat_;
  double d_ = 0.0;
  double slope_ = 0.0;
  double jump_slope_ = 0.0, floor_slope_ = 0.0;
};

}  // namespace cpt
