#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cptgrowth/normal.hpp"
#include "cptgrowth/quadrature.hpp"
#include "cptgrowth/quantile.hpp"

using namespace cpt;

namespace {

std::function<double(double)> lognormal_quantile(double mu, double sigma) {
  return [=](double p) { return std::exp(mu + sigma * norm_cdf_inv(p)); };
}

}  // namespace

TEST_CASE("choquet expectation of indicators and constants") {
  // two-point r.v. xi = 1 w.p. q, 0 otherwise: E_w = w(q)
  const double q = 0.5;
  QuantileCurve two;
  two.grid = {0.25, 1.0 - q};
  two.values = {0.0, 1.0};
  for (const WeightingFunction& wf :
       {WeightingFunction::identity(), WeightingFunction::power(),
        WeightingFunction::jin_zhou()}) {
    CHECK(choquet_expectation(two, wf) == doctest::Approx(wf.w(q)).epsilon(1e-12));
  }
  CHECK(choquet_expectation(two, WeightingFunction::power()) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

  // degenerate r.v.: normalization w(1) = 1 gives the constant back
  QuantileCurve flat;
  flat.grid = {0.5};
  flat.values = {3.25};
  for (const WeightingFunction& wf :
       {WeightingFunction::identity(), WeightingFunction::power(),
        WeightingFunction::jin_zhou()})
    CHECK(choquet_expectation(flat, wf) == doctest::Approx(3.25).epsilon(1e-13));
}

TEST_CASE("choquet reduces to the mean under identity weighting") {
  // standard lognormal mean e^{1/2}
  const double got = choquet_expectation(lognormal_quantile(0.0, 1.0),
                                         WeightingFunction::identity(), 1e-11);
  CHECK(got == doctest::Approx(std::exp(0.5)).epsilon(1e-9));
}

TEST_CASE("quantile curve validation") {
  QuantileCurve bad;
  bad.grid = {0.5, 0.4};
  bad.values = {1.0, 2.0};
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad.grid = {0.4, 0.5};
  bad.values = {2.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("concave envelope of samples") {
  // concave input is its own envelope
  std::vector<double> p, f;
  for (int i = 0; i <= 100; ++i) {
    p.push_back(i / 100.0);
    f.push_back(-(p.back() - 0.6) * (p.back() - 0.6));
  }
  auto env = concave_envelope(p, f);
  for (size_t i = 0; i < p.size(); ++i)
    CHECK(env.hat[i] == doctest::Approx(f[i]).epsilon(1e-13));

  // convex input collapses to the single chord
  std::vector<double> g;
  for (double x : p) g.push_back(x * x);
  auto chord = concave_envelope(p, g);
  for (size_t i = 0; i < p.size(); ++i)
    CHECK(chord.hat[i] == doctest::Approx(p[i]).epsilon(1e-13));
  CHECK(chord.hull_indices.size() == 2);

  // idempotence and nonincreasing right derivative
  auto again = concave_envelope(p, env.hat);
  for (size_t i = 0; i < p.size(); ++i)
    CHECK(again.hat[i] == doctest::Approx(env.hat[i]).epsilon(1e-13));
  for (size_t i = 0; i + 1 < env.hat_prime.size(); ++i)
    CHECK(env.hat_prime[i] >= env.hat_prime[i + 1] - 1e-12);

  CHECK_THROWS_AS(concave_envelope(std::vector<double>{0.0}, std::vector<double>{1.0}),
                  std::domain_error);
}

TEST_CASE("phi for a degenerate kernel is nu(p) - 1") {
  auto unit = [](double) { return 1.0; };
  for (const WeightingFunction& wf :
       {WeightingFunction::identity(), WeightingFunction::power(),
        WeightingFunction::jin_zhou()}) {
    const PhiCurve phi = build_phi(unit, wf, 801);
    for (double p : {0.1, 0.3, 0.5, 0.9}) {
      CHECK(phi.phi_value(p) == doctest::Approx(wf.nu(p) - 1.0).epsilon(1e-8));
    }
    CHECK(phi.phi_at_zero() == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(phi.phi_samples().back() == 0.0);
  }
}

TEST_CASE("phi matches the lognormal closed form") {
  const double mu = -0.02, sigma = 0.2;  // benchmark-adjusted kernel, g = 0
  auto q_eta = lognormal_quantile(mu, sigma);
  const double mean = std::exp(mu + 0.5 * sigma * sigma);
  for (const WeightingFunction& wf :
       {WeightingFunction::identity(), WeightingFunction::power(),
        WeightingFunction::jin_zhou()}) {
    const PhiCurve phi = build_phi(q_eta, wf, 2001);
    CHECK(phi.phi_at_zero() == doctest::Approx(-mean).epsilon(1e-9));
    for (double p : {0.05, 0.25, 0.5, 0.75, 0.95}) {
      const double x = wf.w_inv(1.0 - p);
      const double closed = -mean * norm_cdf(norm_cdf_inv(x) - sigma);
      CHECK(phi.phi_value(p) == doctest::Approx(closed).epsilon(1e-8));
    }
    // identity weighting: phi'(p) = Q_eta(1 - p)
    if (wf.kind() == WeightingKind::Identity)
      for (double p : {0.2, 0.5, 0.8})
        CHECK(phi.phi_prime_raw(p) == doctest::Approx(q_eta(1.0 - p)).epsilon(1e-12));
    // the reference parameterization keeps phi concave: no hull gaps
    CHECK(phi.gaps().empty());
    // phi_hat' integrates back to phi_hat(1) - phi_hat(0)
    const double total =
        integrate([&](double p) { return phi.phi_hat_prime(p); }, 0.0, 1.0, 1e-11)
            .value;
    CHECK(total == doctest::Approx(-phi.phi_at_zero()).epsilon(1e-9));
    // phi_hat' positive and nonincreasing
    double prev = 1e300;
    for (int i = 1; i < 400; ++i) {
      const double s = phi.phi_hat_prime(i / 400.0);
      CHECK(s > 0.0);
      CHECK(s <= prev * (1.0 + 1e-10));
      prev = s;
    }
  }
}

TEST_CASE("steep inverse-s weighting produces a single initial gap") {
  // b_bar above sigma_eta turns phi convex near p = 0 (s-shaped case)
  const JinZhouParams steep{0.3, 0.32, 0.4};
  const WeightingFunction wf = WeightingFunction::jin_zhou(steep);
  const PhiCurve phi = build_phi(lognormal_quantile(-0.02, 0.2), wf, 4001);
  REQUIRE(phi.gaps().size() == 1);
  const LinearSegment& g = phi.gaps().front();
  CHECK(g.p_lo == doctest::Approx(0.0).epsilon(1e-12));
  // frozen from the independent desk solve
  CHECK(g.p_hi == doctest::Approx(0.840006714921).epsilon(1e-6));
  CHECK(g.slope == doctest::Approx(1.04140040882).epsilon(1e-7));
  // tangency: chord slope equals phi' at the junction
  CHECK(phi.phi_prime_raw(g.p_hi) == doctest::Approx(g.slope).epsilon(1e-9));
  // phi_hat dominates phi strictly inside the gap
  CHECK(phi.phi_hat_value(0.4) > phi.phi_value(0.4) + 1e-4);
  // and phi_hat' is continuous across the junction
  CHECK(phi.phi_hat_prime(g.p_hi - 1e-9) ==
        doctest::Approx(phi.phi_hat_prime(g.p_hi + 1e-9)).epsilon(1e-6));
}

TEST_CASE("hardy-littlewood lower bound by exhaustive coupling") {
  const std::array<long, 6> x{1, 2, 3, 4, 5, 6};
  const std::array<long, 6> y{2, 3, 5, 7, 11, 13};
  // anti-comonotone pairing attains the minimum exactly
  long anti = 0;
  for (int i = 0; i < 6; ++i) anti += x[i] * y[5 - i];
  std::array<int, 6> perm{0, 1, 2, 3, 4, 5};
  long best = std::numeric_limits<long>::max();
  long worst = std::numeric_limits<long>::min();
  do {
    long s = 0;
    for (int i = 0; i < 6; ++i) s += x[i] * y[perm[i]];
    best = std::min(best, s);
    worst = std::max(worst, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(best == anti);
  // comonotone pairing attains the maximum (upper Hardy-Littlewood bound)
  long co = 0;
  for (int i = 0; i < 6; ++i) co += x[i] * y[i];
  CHECK(worst == co);
}

TEST_CASE("change of variables identities on a monotone test curve") {
  auto Q = [](double p) { return 0.5 + p * p + 0.25 * p; };
  auto q_eta = lognormal_quantile(-0.02, 0.2);
  const double mean_eta = std::exp(-0.02 + 0.5 * 0.04);
  for (const WeightingFunction& wf :
       {WeightingFunction::identity(), WeightingFunction::power(),
        WeightingFunction::jin_zhou()}) {
    // objective form: int v(Q) w'(1-p) dp == int v(Q(nu(p))) dp, with v = log
    auto lhs_f = [&](double p) { return std::log(Q(p)) * wf.w_prime(std::min(1.0 - p, 1.0 - 1e-16)); };
    const double delta = 1e-10;
    double lhs = integrate_segmented(
                     lhs_f, 0.0, 1.0 - delta,
                     std::vector<double>{0.5, 0.9, 0.99, 1 - 1e-4, 1 - 1e-7}, 1e-11)
                     .value;
    lhs += std::log(Q(1.0 - delta)) * wf.w(delta);  // analytic endpoint completion
    const double rhs =
        integrate([&](double p) { return std::log(Q(wf.nu(p))); }, 0.0, 1.0, 1e-11)
            .value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));

    // budget form: int Q(p) Q_eta(1-p) dp == int Q(nu(p)) phi'(p) dp
    const PhiCurve phi = build_phi(q_eta, wf, 2001);
    const double bl =
        gauss_hermite_expectation([&](double z) {
          const double p = std::clamp(norm_cdf(-z), 1e-16, 1.0 - 1e-16);
          return Q(p) * std::exp(-0.02 + 0.2 * z);
        });
    const double br = integrate_segmented(
                          [&](double p) {
                            return Q(wf.nu(p)) * phi.phi_prime_raw(p);
                          },
                          1e-13, 1.0 - 1e-13, std::vector<double>{0.3, 0.7}, 1e-11)
                          .value;
    CHECK(bl == doctest::Approx(br).epsilon(1e-7));
    (void)mean_eta;
  }
}
