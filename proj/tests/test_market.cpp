#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cptgrowth/market.hpp"
#include "cptgrowth/normal.hpp"
#include "cptgrowth/quadrature.hpp"

using namespace cpt;

namespace {
const MarketParams kMarket{0.02, 0.2, 1.0, 1.0};
}

TEST_CASE("kernel law from market parameters") {
  const KernelLaw law = KernelLaw::from(kMarket);
  CHECK(law.mu_rho == doctest::Approx(-0.04).epsilon(1e-15));
  CHECK(law.sigma_rho == doctest::Approx(0.2).epsilon(1e-15));
  // E[rho] = e^{-rT} via Gauss-Hermite
  const double mean = gauss_hermite_expectation(
      [&](double z) { return std::exp(law.mu_rho + law.sigma_rho * z); });
  CHECK(mean == doctest::Approx(std::exp(-0.02)).epsilon(1e-12));
  CHECK(law.cdf(law.quantile(0.37)) == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("feasibility") {
  Benchmark b{BenchmarkKind::ConstantExcess, 0.0, 0.0, 0.1};
  const Feasibility f0 = feasibility_check(kMarket, b);
  CHECK(f0.feasible);
  CHECK(f0.expectation == doctest::Approx(1.0).epsilon(1e-13));

  b.g = 0.05;
  const Feasibility f1 = feasibility_check(kMarket, b);
  CHECK(f1.feasible);
  CHECK(f1.margin ==
        doctest::Approx(std::exp(0.1) - std::exp(0.05)).epsilon(1e-12));

  b.g = 0.11;  // g = c + 0.01
  CHECK_FALSE(feasibility_check(kMarket, b).feasible);

  // kernel-power benchmark: E[rho^{1-k}] < e^c
  Benchmark kp{BenchmarkKind::KernelPower, 0.0, 0.5, 0.1};
  const EtaLaw law = eta_law(kMarket, kp);
  CHECK(feasibility_check(kMarket, kp).expectation ==
        doctest::Approx(law.mean()).epsilon(1e-13));
}

TEST_CASE("benchmark-adjusted kernel quantile") {
  Benchmark b{BenchmarkKind::ConstantExcess, 0.0, 0.0, 0.1};
  auto q = eta_quantile(kMarket, b);
  CHECK(q(0.5) == doctest::Approx(std::exp(-0.02)).epsilon(1e-13));
  double prev = 0.0;
  for (double p : {0.05, 0.2, 0.5, 0.8, 0.95}) {
    CHECK(q(p) > prev);
    prev = q(p);
  }

  // degenerate kernel power k = 1
  Benchmark kp{BenchmarkKind::KernelPower, 0.0, 1.0, 0.1};
  auto q1 = eta_quantile(kMarket, kp);
  CHECK(q1(0.3) == 1.0);
  CHECK(q1(0.9) == 1.0);

  // k > 1 flips comonotonicity
  Benchmark kp2{BenchmarkKind::KernelPower, 0.0, 1.5, 0.1};
  CHECK_FALSE(eta_law(kMarket, kp2).comonotone_with_rho);
}

TEST_CASE("budget values with closed-form oracles") {
  // risk-free payoff prices back to x0
  const double rf = kMarket.x0 * std::exp(kMarket.r * kMarket.T);
  CHECK(budget_value([rf](double) { return rf; }, kMarket) ==
        doctest::Approx(kMarket.x0).epsilon(1e-10));

  // growth-optimal payoff C / rho prices to C
  CHECK(budget_value([](double rho) { return 3.7 / rho; }, kMarket) ==
        doctest::Approx(3.7).epsilon(1e-10));

  // lognormal moment: X = rho^s, E[rho^{1+s}] in closed form
  const KernelLaw law = KernelLaw::from(kMarket);
  const double s = 0.7;
  const double closed = std::exp((1.0 + s) * law.mu_rho +
                                 0.5 * (1.0 + s) * (1.0 + s) * law.sigma_rho *
                                     law.sigma_rho);
  CHECK(budget_value([s](double rho) { return std::pow(rho, s); }, kMarket) ==
        doctest::Approx(closed).epsilon(1e-10));

  // a jump payoff split at its discontinuity
  const double rho_star = 1.1;
  auto step = [rho_star](double rho) { return rho < rho_star ? 2.0 : 0.5; };
  const double jumps[] = {rho_star};
  const double z_star = (std::log(rho_star) - law.mu_rho) / law.sigma_rho;
  const double expect = 2.0 * std::exp(law.mu_rho + 0.5 * law.sigma_rho * law.sigma_rho);
  // E[rho 1{z < z*}] = e^{mu + s^2/2} Phi(z* - s)
  const double m1 = std::exp(law.mu_rho + 0.5 * law.sigma_rho * law.sigma_rho);
  const double closed_step =
      2.0 * m1 * norm_cdf(z_star - law.sigma_rho) +
      0.5 * m1 * (1.0 - norm_cdf(z_star - law.sigma_rho));
  (void)expect;
  CHECK(budget_value(step, kMarket, jumps) ==
        doctest::Approx(closed_step).epsilon(1e-10));
}

TEST_CASE("time-t wealth surface: trivial payoffs") {
  // constant payoff discounts at the risk-free rate and has zero exposure
  const double K = 1.4;
  WealthSurface flat(kMarket, [K](double) { return K; });
  CHECK(flat.psi(0.5, 1.0) ==
        doctest::Approx(K * std::exp(-kMarket.r * 0.5)).epsilon(1e-10));
  CHECK(flat.exposure(0.5, 1.0) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(flat.exposure_quadrature(0.5, 1.0) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK_THROWS_AS(flat.psi(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(flat.psi(0.5, -1.0), std::domain_error);

  // growth-optimal payoff has exposure one
  WealthSurface gop(kMarket, [](double rho) { return 2.0 / rho; });
  CHECK(gop.psi(0.5, 0.9) == doctest::Approx(2.0 / 0.9).epsilon(1e-10));
  CHECK(gop.exposure(0.5, 0.9) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(gop.exposure_quadrature(0.5, 0.9) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("time-t wealth surface: step payoff") {
  const double rho_star = 1.05;
  auto step = [rho_star](double rho) { return rho < rho_star ? 1.6 : 0.9; };
  WealthSurface surf(kMarket, step, {rho_star});

  SUBCASE("tower property across intermediate dates") {
    for (double t : {0.25, 0.5, 0.75}) {
      const double rho_t = 0.95;
      const double direct = surf.psi(t, rho_t);
      // integrate the t' = t + 0.2 surface over the transition
      const double t2 = t + 0.2;
      const double tau = t2 - t;
      const double m = -(kMarket.r + 0.5 * kMarket.theta_norm * kMarket.theta_norm) * tau;
      const double sdev = kMarket.theta_norm * std::sqrt(tau);
      const double nested = gauss_hermite_expectation([&](double z) {
        const double rho2 = rho_t * std::exp(m + sdev * z);
        return std::exp(m + sdev * z) * surf.psi(t2, rho2);
      });
      CHECK(nested == doctest::Approx(direct).epsilon(1e-5));
    }
  }

  SUBCASE("finite differences agree with the quadrature derivative") {
    for (double rho_t : {0.7, 0.95, 1.3}) {
      const double fd = surf.exposure(0.5, rho_t);
      const double qd = surf.exposure_quadrature(0.5, rho_t);
      CHECK(fd == doctest::Approx(qd).epsilon(1e-4));
    }
  }
}
