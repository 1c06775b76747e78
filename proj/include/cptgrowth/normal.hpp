#pragma once

#include <cmath>

namespace cpt {

inline double norm_pdf(double z) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

inline double norm_cdf(double z) {
  static const double inv_sqrt_2 = 0.7071067811865475244;
  return 0.5 * std::erfc(-z * inv_sqrt_2);
}

// Inverse normal CDF, Wichura's AS241 rational approximations,
// polished with one Newton step on erfc.
double norm_cdf_inv(double p);

}  // namespace cpt
