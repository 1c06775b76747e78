#include "cptgrowth/market.hpp"

#include <cmath>
#include <stdexcept>

#include "cptgrowth/errors.hpp"
#include "cptgrowth/normal.hpp"
#include "cptgrowth/quadrature.hpp"

namespace cpt {

void MarketParams::validate() const {
  if (!(T > 0.0)) throw std::domain_error("market: T must be > 0");
  if (!(x0 > 0.0)) throw std::domain_error("market: x0 must be > 0");
  if (!(theta_norm >= 0.0)) throw std::domain_error("market: theta_norm must be >= 0");
}

KernelLaw KernelLaw::from(const MarketParams& m) {
  m.validate();
  return {-(m.r + 0.5 * m.theta_norm * m.theta_norm) * m.T,
          m.theta_norm * std::sqrt(m.T)};
}

double KernelLaw::quantile(double p) const {
  return std::exp(mu_rho + sigma_rho * norm_cdf_inv(p));
}

double KernelLaw::cdf(double rho) const {
  if (!(rho > 0.0)) return 0.0;
  if (sigma_rho == 0.0) return std::log(rho) < mu_rho ? 0.0 : 1.0;
  return norm_cdf((std::log(rho) - mu_rho) / sigma_rho);
}

double Benchmark::c_hat() const { return std::exp(-c); }

void Benchmark::validate() const {
  if (!(c > 0.0)) throw std::domain_error("benchmark: c must be > 0");
}

double benchmark_growth(const MarketParams& m, const Benchmark& b, double rho) {
  if (b.kind == BenchmarkKind::ConstantExcess) return (m.r + b.g) * m.T;
  if (!(rho > 0.0)) throw std::domain_error("benchmark growth: rho must be > 0");
  return -b.k * std::log(rho);
}

double EtaLaw::quantile(double p) const {
  if (sigma == 0.0) return std::exp(mu);
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("eta quantile: p in (0,1)");
  return std::exp(mu + sigma * norm_cdf_inv(p));
}

double EtaLaw::mean() const { return std::exp(mu + 0.5 * sigma * sigma); }

double EtaLaw::partial_expectation(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return mean();
  if (sigma == 0.0) return x * std::exp(mu);
  return mean() * norm_cdf(norm_cdf_inv(x) - sigma);
}

EtaLaw eta_law(const MarketParams& m, const Benchmark& b) {
  b.validate();
  const KernelLaw kernel = KernelLaw::from(m);
  if (b.kind == BenchmarkKind::ConstantExcess) {
    const double wp = (m.r + b.g) * m.T;
    return {kernel.mu_rho + wp, kernel.sigma_rho, true};
  }
  const double scale = 1.0 - b.k;
  return {scale * kernel.mu_rho, std::fabs(scale) * kernel.sigma_rho, b.k <= 1.0};
}

std::function<double(double)> eta_quantile(const MarketParams& m, const Benchmark& b) {
  const EtaLaw law = eta_law(m, b);
  return [law](double p) { return law.quantile(p); };
}

Feasibility feasibility_check(const MarketParams& m, const Benchmark& b) {
  const double expectation = eta_law(m, b).mean();
  const double bound = std::exp(b.c);
  return {expectation < bound, expectation, bound, bound - expectation};
}

double budget_value(const std::function<double(double)>& wealth_of_rho,
                    const MarketParams& m, std::span<const double> jump_rhos,
                    bool* truncated) {
  const KernelLaw kernel = KernelLaw::from(m);
  std::vector<double> splits;
  for (double rho : jump_rhos)
    if (rho > 0.0 && kernel.sigma_rho > 0.0)
      splits.push_back((std::log(rho) - kernel.mu_rho) / kernel.sigma_rho);
  auto f = [&](double z) {
    const double rho = std::exp(kernel.mu_rho + kernel.sigma_rho * z);
    return rho * wealth_of_rho(rho);
  };
  return gaussian_expectation(f, splits, 1e-11, truncated);
}

WealthSurface::WealthSurface(MarketParams m, std::function<double(double)> terminal,
                             std::vector<double> jump_rhos)
    : market_(m), terminal_(std::move(terminal)), jump_rhos_(std::move(jump_rhos)) {
  market_.validate();
}

WealthSurface::Moments WealthSurface::moments(double t, double rho_t,
                                              bool with_first) const {
  if (!(t >= 0.0 && t < market_.T))
    throw std::domain_error("wealth surface: t must be in [0, T)");
  if (!(rho_t > 0.0)) throw std::domain_error("wealth surface: rho_t must be > 0");
  const double tau = market_.T - t;
  const double mz = -(market_.r + 0.5 * market_.theta_norm * market_.theta_norm) * tau;
  const double sz = market_.theta_norm * std::sqrt(tau);
  std::vector<double> splits;
  for (double rho : jump_rhos_)
    if (rho > 0.0 && sz > 0.0)
      splits.push_back((std::log(rho) - std::log(rho_t) - mz) / sz);

  auto discounted = [&](double z) {
    return std::exp(mz + sz * z) * terminal_(rho_t * std::exp(mz + sz * z));
  };
  Moments out{};
  bool trunc = false;
  out.psi = gaussian_expectation(discounted, splits, 1e-11, &trunc);
  if (with_first)
    out.first = gaussian_expectation(
        [&](double z) { return discounted(z) * z; }, splits, 1e-11, &trunc);
  return out;
}

double WealthSurface::psi(double t, double rho_t) const {
  return moments(t, rho_t, false).psi;
}

double WealthSurface::exposure(double t, double rho_t) const {
  const double h = 1e-4 * rho_t;
  const double up = psi(t, rho_t + h);
  const double dn = psi(t, rho_t - h);
  const double psi_x = (up - dn) / (2.0 * h);
  const double mid = 0.5 * (up + dn);
  return -psi_x * rho_t / mid;
}

double WealthSurface::exposure_quadrature(double t, double rho_t) const {
  const double tau = market_.T - t;
  const double sz = market_.theta_norm * std::sqrt(tau);
  if (sz == 0.0) return 0.0;
  const Moments m = moments(t, rho_t, true);
  return 1.0 - m.first / (sz * m.psi);
}

}  // namespace cpt
