#pragma once

#include <string>

namespace cpt {

enum class WeightingKind { Identity, Power, JinZhou };

struct JinZhouParams {
  double p_bar = 0.3;
  double a_bar = 0.32;  // 1.6 * sigma_rho in the reference parameterization
  double b_bar = 0.16;  // 0.8 * sigma_rho
};

// Probability weighting function w: [0,1] -> [0,1], strictly increasing, C^1
// on (0,1), w(0)=0, w(1)=1.  Also supplies the induced change of variables
// nu(p) = 1 - w^{-1}(1-p).
class WeightingFunction {
 public:
  static WeightingFunction identity();
  static WeightingFunction power(double exponent = 0.5);
  static WeightingFunction jin_zhou(const JinZhouParams& params = {});
  static WeightingFunction from_kind(WeightingKind kind, const JinZhouParams& jz = {},
                                     double power_exponent = 0.5);

  double w(double p) const;
  double w_inv(double q) const;
  double w_prime(double p) const;      // interior points only

  double nu(double p) const { return 1.0 - w_inv(1.0 - p); }
  double nu_prime(double p) const;

  // w^{-1}(1-p) evaluated without forming 1 - nu(p); the solver-critical path.
  double w_inv_complement(double p) const { return w_inv(1.0 - p); }

  WeightingKind kind() const { return kind_; }
  const JinZhouParams& jz_params() const { return jz_; }
  double jz_k() const { return k_; }
  double jz_A() const { return A_; }
  std::string name() const;

 private:
  WeightingFunction() = default;
  WeightingKind kind_ = WeightingKind::Identity;
  double exponent_ = 0.5;
  JinZhouParams jz_;
  // Jin-Zhou precomputed constants
  double k_ = 0.0, A_ = 0.0;
  double z_bar_ = 0.0;      // Phi^{-1}(p_bar)
  double c_left_ = 0.0;     // k e^{(a+b) z_bar + a^2/2}
  double c_right_ = 0.0;    // k e^{b^2/2}
  double w_at_pbar_ = 0.0;
};

WeightingKind weighting_kind_from_string(const std::string& name);

}  // namespace cpt
