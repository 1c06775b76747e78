#pragma once

#include <functional>
#include <span>
#include <vector>

namespace cpt {

struct MarketParams {
  double r = 0.02;          // risk-free rate
  double theta_norm = 0.2;  // risk premium magnitude
  double T = 1.0;           // horizon in years
  double x0 = 1.0;          // initial wealth
  void validate() const;
};

// Terminal pricing kernel: log rho ~ N(mu_rho, sigma_rho^2), E[rho] = e^{-rT}.
struct KernelLaw {
  double mu_rho, sigma_rho;
  static KernelLaw from(const MarketParams& m);
  double quantile(double p) const;
  double cdf(double rho) const;
};

enum class BenchmarkKind {
  ConstantExcess,  // benchmark growth (r + g) T
  KernelPower,     // benchmark growth k log(1/rho)
};

struct Benchmark {
  BenchmarkKind kind = BenchmarkKind::ConstantExcess;
  double g = 0.0;  // excess growth rate (ConstantExcess)
  double k = 0.0;  // kernel power (KernelPower)
  double c = 0.1;  // risk tolerance level, > 0
  double c_hat() const;
  void validate() const;
};

// Benchmark growth for a realized kernel value.
double benchmark_growth(const MarketParams& m, const Benchmark& b, double rho);

// Benchmark-adjusted kernel eta = rho e^{benchmark}; lognormal here.
struct EtaLaw {
  double mu, sigma;              // log eta ~ N(mu, sigma^2); sigma = 0 degenerate
  bool comonotone_with_rho;      // false when the benchmark overshoots (k > 1)
  double quantile(double p) const;
  double mean() const;
  // E[eta 1{eta <= Q_eta(x)}]; closed form used as the quadrature oracle
  double partial_expectation(double x) const;
};
EtaLaw eta_law(const MarketParams& m, const Benchmark& b);
std::function<double(double)> eta_quantile(const MarketParams& m, const Benchmark& b);

struct Feasibility {
  bool feasible;
  double expectation;  // E[rho e^benchmark]
  double bound;        // e^c
  double margin;       // bound - expectation
};
Feasibility feasibility_check(const MarketParams& m, const Benchmark& b);

// E[rho X(rho)] for a terminal wealth map, splitting the kernel expectation at
// the map's jump points.
double budget_value(const std::function<double(double)>& wealth_of_rho,
                    const MarketParams& m, std::span<const double> jump_rhos = {},
                    bool* truncated = nullptr);

// Time-t wealth Psi(t, rho_t) = E[rho(T) X(T) | rho(t) = rho_t] / rho_t for a
// terminal map, and the scalar risk exposure relative to the growth-optimal
// portfolio: -Psi_x rho_t / Psi.
class WealthSurface {
 public:
  WealthSurface(MarketParams m, std::function<double(double)> terminal,
                std::vector<double> jump_rhos = {});

  double psi(double t, double rho_t) const;
  double exposure(double t, double rho_t) const;             // central differences
  double exposure_quadrature(double t, double rho_t) const;  // z-moment identity

 private:
  struct Moments {
    double psi, first;  // E[...], E[... z]
  };
  Moments moments(double t, double rho_t, bool with_first) const;
  MarketParams market_;
  std::function<double(double)> terminal_;
  std::vector<double> jump_rhos_;
};

}  // namespace cpt
