#include "cptgrowth/weighting.hpp"

#include <cmath>
#include <stdexcept>

#include "cptgrowth/normal.hpp"

namespace cpt {

WeightingFunction WeightingFunction::identity() {
  WeightingFunction wf;
  wf.kind_ = WeightingKind::Identity;
  return wf;
}

WeightingFunction WeightingFunction::power(double exponent) {
  if (!(exponent > 0.0 && exponent < 1.0))
    throw std::domain_error("power weighting exponent must be in (0,1)");
  WeightingFunction wf;
  wf.kind_ = WeightingKind::Power;
  wf.exponent_ = exponent;
  return wf;
}

WeightingFunction WeightingFunction::jin_zhou(const JinZhouParams& params) {
  if (!(params.p_bar > 0.0 && params.p_bar < 1.0))
    throw std::domain_error("jin-zhou p_bar must be in (0,1)");
  if (params.a_bar < 0.0 || params.b_bar < 0.0)
    throw std::domain_error("jin-zhou a_bar, b_bar must be nonnegative");
  WeightingFunction wf;
  wf.kind_ = WeightingKind::JinZhou;
  wf.jz_ = params;
  const double zb = norm_cdf_inv(params.p_bar);
  wf.z_bar_ = zb;
  const double eb = std::exp(0.5 * params.b_bar * params.b_bar);
  const double ea = std::exp((params.a_bar + params.b_bar) * zb +
                             0.5 * params.a_bar * params.a_bar);
  wf.k_ = 1.0 / (eb * norm_cdf(-zb + params.b_bar) + ea * norm_cdf(zb + params.a_bar));
  wf.A_ = 1.0 - wf.k_ * eb;
  wf.c_left_ = wf.k_ * ea;
  wf.c_right_ = wf.k_ * eb;
  wf.w_at_pbar_ = wf.c_left_ * norm_cdf(zb + params.a_bar);
  return wf;
}

WeightingFunction WeightingFunction::from_kind(WeightingKind kind, const JinZhouParams& jz,
                                               double power_exponent) {
  switch (kind) {
    case WeightingKind::Identity: return identity();
    case WeightingKind::Power: return power(power_exponent);
    case WeightingKind::JinZhou: return jin_zhou(jz);
  }
  throw std::logic_error("unknown weighting kind");
}

double WeightingFunction::w(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("w: p must be in [0,1]");
  switch (kind_) {
    case WeightingKind::Identity: return p;
    case WeightingKind::Power: return std::pow(p, exponent_);
    case WeightingKind::JinZhou: {
      if (p <= 0.0) return 0.0;
      if (p >= 1.0) return 1.0;
      const double z = norm_cdf_inv(p);
      if (p <= jz_.p_bar) return c_left_ * norm_cdf(z + jz_.a_bar);
      return A_ + c_right_ * norm_cdf(z - jz_.b_bar);
    }
  }
  return p;
}

double WeightingFunction::w_inv(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("w_inv: q must be in [0,1]");
  switch (kind_) {
    case WeightingKind::Identity: return q;
    case WeightingKind::Power: return std::pow(q, 1.0 / exponent_);
    case WeightingKind::JinZhou: {
      // both branches invert in closed form through Phi / Phi^{-1}
      if (q <= 0.0) return 0.0;
      if (q >= 1.0) return 1.0;
      if (q <= w_at_pbar_) return norm_cdf(norm_cdf_inv(q / c_left_) - jz_.a_bar);
      return norm_cdf(norm_cdf_inv((q - A_) / c_right_) + jz_.b_bar);
    }
  }
  return q;
}

double WeightingFunction::w_prime(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("w': p must be in (0,1)");
  switch (kind_) {
    case WeightingKind::Identity: return 1.0;
    case WeightingKind::Power: return exponent_ * std::pow(p, exponent_ - 1.0);
    case WeightingKind::JinZhou: {
      const double z = norm_cdf_inv(p);
      if (p <= jz_.p_bar)
        return k_ * std::exp((jz_.a_bar + jz_.b_bar) * z_bar_ - jz_.a_bar * z);
      return k_ * std::exp(jz_.b_bar * z);
    }
  }
  return 1.0;
}

double WeightingFunction::nu_prime(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("nu': p must be in (0,1)");
  const double x = w_inv(1.0 - p);
  if (x <= 0.0 || x >= 1.0) throw std::domain_error("nu': w' endpoint evaluation");
  return 1.0 / w_prime(x);
}

std::string WeightingFunction::name() const {
  switch (kind_) {
    case WeightingKind::Identity: return "identity";
    case WeightingKind::Power: return "power";
    case WeightingKind::JinZhou: return "jinzhou";
  }
  return "?";
}

WeightingKind weighting_kind_from_string(const std::string& name) {
  if (name == "identity") return WeightingKind::Identity;
  if (name == "power") return WeightingKind::Power;
  if (name == "jinzhou") return WeightingKind::JinZhou;
  throw std::domain_error("unknown weighting: " + name);
}

}  // namespace cpt
