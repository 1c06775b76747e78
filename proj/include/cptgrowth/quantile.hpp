#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cptgrowth/weighting.hpp"

namespace cpt {

enum class Interp { PiecewiseConstantRightContinuous, PiecewiseLinear };

// Monotone right-continuous function on (0,1) sampled on a grid.
struct QuantileCurve {
  std::vector<double> grid;    // strictly increasing, in (0,1)
  std::vector<double> values;  // nondecreasing
  Interp interpolation = Interp::PiecewiseConstantRightContinuous;

  double operator()(double p) const;
  void validate() const;
};

// Choquet expectation of the law given by a quantile curve / function.
double choquet_expectation(const QuantileCurve& q, const WeightingFunction& wf);
double choquet_expectation(const std::function<double(double)>& quantile,
                           const WeightingFunction& wf, double abs_tol = 1e-10);

// Upper concave hull of samples (p ascending).  hat_prime holds the right
// derivative at each sample (the last entry repeats the final slope).
struct ConcaveEnvelopeResult {
  std::vector<double> hat;
  std::vector<double> hat_prime;
  std::vector<int> hull_indices;
};
ConcaveEnvelopeResult concave_envelope(std::span<const double> p,
                                       std::span<const double> f);

// A maximal interval where phi_hat is linear.
struct LinearSegment {
  double p_lo, p_hi;
  double slope;
  double value_lo;   // phi_hat(p_lo)
  bool is_gap;       // true when phi_hat > phi strictly inside
};

// phi of the quantile change of variables and its concave envelope on [0,1]:
//   phi(p)  = -int_p^1 Q_eta(w^{-1}(1-s)) / w'(w^{-1}(1-s)) ds
//   phi_hat = concave envelope, phi_hat' its right derivative.
class PhiCurve {
 public:
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& phi_samples() const { return phi_; }
  const std::vector<double>& phi_hat_samples() const { return phi_hat_; }
  const std::vector<LinearSegment>& gaps() const { return gaps_; }
  const std::vector<LinearSegment>& flats() const { return flats_; }

  double phi_value(double p) const;        // interpolated
  double phi_hat_value(double p) const;
  double phi_hat_prime(double p) const;    // right derivative, continuous off 0
  double phi_prime_raw(double p) const { return phi_prime_(p); }

  double phi_at_zero() const { return phi_.front(); }

  // limit of phi_hat' as p -> 1 (0 when the derivative decays to zero)
  double terminal_slope() const;

 private:
  friend PhiCurve build_phi(const std::function<double(double)>&,
                            const WeightingFunction&, int);
  std::vector<double> grid_, phi_, phi_hat_;
  std::function<double(double)> phi_prime_;
  std::vector<LinearSegment> gaps_, flats_;
  const LinearSegment* segment_at(double p) const;
};

PhiCurve build_phi(const std::function<double(double)>& eta_quantile,
                   const WeightingFunction& wf, int n_grid = 4001);

}  // namespace cpt
