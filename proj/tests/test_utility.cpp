#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cptgrowth/utility.hpp"

using namespace cpt;

namespace {
const UtilityParams kRef{0.88, 0.88, 2.5};

// frozen from the independent desk solve (nested bisection, scipy brentq)
constexpr double kA = 0.778442303079567;
constexpr double kB = 1.00001499943442;
constexpr double kSlopeAB = 3.33693358413404;
constexpr double kD01 = 1.00001100642157;   // c = 0.1
constexpr double kD02 = 1.00001466381041;   // c = 0.2
constexpr double kVpD01 = 3.46322447272769;
constexpr double kVpD02 = 3.34600869705222;
}  // namespace

TEST_CASE("piecewise power utility values") {
  CHECK(u_value(kRef, 0.0) == 0.0);
  CHECK(u_value(kRef, 1.0) == 1.0);
  CHECK(u_value(kRef, -1.0) == doctest::Approx(-2.5).epsilon(1e-14));
  CHECK(u_value(kRef, 2.0) > u_value(kRef, 1.0));
  CHECK_THROWS_AS(u_value(kRef, std::nan("")), std::domain_error);
}

TEST_CASE("relative utility v = u(log x)") {
  CHECK(v_value(kRef, 1.0) == 0.0);
  CHECK(v_value(kRef, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v_value(kRef, std::exp(-1.0)) == doctest::Approx(-2.5).epsilon(1e-14));
  CHECK_THROWS_AS(v_value(kRef, 0.0), std::domain_error);
  CHECK_THROWS_AS(v_value(kRef, -1.0), std::domain_error);
}

TEST_CASE("v' and branch inverses") {
  const double e = std::exp(1.0);
  CHECK(v_prime(kRef, e) == doctest::Approx(0.88 / e).epsilon(1e-14));
  CHECK(v_prime_inverse_upper(kRef, 0.88 / e) == doctest::Approx(e).epsilon(1e-12));
  CHECK(v_prime(kRef, 1.0 / e) == doctest::Approx(2.2 * e).epsilon(1e-14));
  CHECK(v_prime_inverse_lower(kRef, 2.2 * e) ==
        doctest::Approx(1.0 / e).epsilon(1e-12));
  CHECK_THROWS_AS(v_prime(kRef, 1.0), std::domain_error);
  CHECK_THROWS_AS(v_prime_inverse_upper(kRef, -1.0), std::domain_error);
  CHECK_THROWS_AS(v_prime_inverse_lower(kRef, 0.5 * v_prime_lower_min(kRef)),
                  std::domain_error);

  // upper inverse diverges as the slope vanishes
  CHECK(v_prime_inverse_upper(kRef, 1e-8) > 1e6);

  // bisection oracle round trips on both branches
  for (double y : {0.05, 0.5, 1.0, 2.0, 3.0}) {
    const double x = v_prime_inverse_upper(kRef, y);
    CHECK(v_prime(kRef, x) == doctest::Approx(y).epsilon(1e-10));
  }
  for (double y : {3.3, 4.0, 6.0, 20.0, 300.0}) {
    const double x = v_prime_inverse_lower(kRef, y);
    CHECK(x <= v_inflection(kRef));
    CHECK(v_prime(kRef, x) == doctest::Approx(y).epsilon(1e-10));
  }
}

TEST_CASE("shape of v: concave-convex-concave") {
  const double infl = v_inflection(kRef);
  for (double x : {0.2, 0.5, 0.8 * infl}) CHECK(v_second(kRef, x) < 0.0);
  for (double x : {infl * 1.01, 0.95, 0.99}) CHECK(v_second(kRef, x) > 0.0);
  for (double x : {1.01, 2.0, 10.0}) CHECK(v_second(kRef, x) < 0.0);
  // finite differences agree with the closed form away from the kink
  for (double x : {0.5, 0.95, 1.5}) {
    const double h = 1e-5 * x;
    const double fd =
        (v_value(kRef, x + h) - 2.0 * v_value(kRef, x) + v_value(kRef, x - h)) / (h * h);
    CHECK(fd == doctest::Approx(v_second(kRef, x)).epsilon(1e-4));
  }
}

TEST_CASE("global envelope tangency pair") {
  const auto [a, b] = global_envelope_points(kRef);
  CHECK(a == doctest::Approx(kA).epsilon(1e-10));
  CHECK(b == doctest::Approx(kB).epsilon(1e-10));
  CHECK(std::fabs(v_prime(kRef, a) - v_prime(kRef, b)) < 1e-8);
  const double chord = (v_value(kRef, b) - v_value(kRef, a)) / (b - a);
  CHECK(std::fabs(v_prime(kRef, a) - chord) < 1e-8);
  CHECK(v_prime(kRef, a) == doctest::Approx(kSlopeAB).epsilon(1e-10));
  // regime brackets of the reference study
  CHECK(std::exp(-0.3) < a);
  CHECK(a <= std::exp(-0.2));
  CHECK(a < v_inflection(kRef));
  CHECK(b > 1.0);
}

TEST_CASE("local envelope per tolerance level") {
  const EnvelopeData e01(kRef, std::exp(-0.1));
  const EnvelopeData e02(kRef, std::exp(-0.2));
  const EnvelopeData e03(kRef, std::exp(-0.3));

  CHECK(e01.regime() == EnvelopeRegime::LocalChord);
  CHECK(e02.regime() == EnvelopeRegime::LocalChord);
  CHECK(e03.regime() == EnvelopeRegime::GlobalCoincides);
  CHECK_THROWS_AS(e03.d(), std::logic_error);

  CHECK(e01.d() == doctest::Approx(kD01).epsilon(1e-9));
  CHECK(e02.d() == doctest::Approx(kD02).epsilon(1e-9));
  CHECK(e01.jump_slope() == doctest::Approx(kVpD01).epsilon(1e-9));
  CHECK(e02.jump_slope() == doctest::Approx(kVpD02).epsilon(1e-9));
  CHECK(1.0 < e01.d());
  CHECK(e01.d() < e01.b());
  CHECK(1.0 < e02.d());
  CHECK(e02.d() < e02.b());
}

TEST_CASE("envelope values: chord and coincidence") {
  const EnvelopeData env(kRef, std::exp(-0.1));
  const double ch = env.c_hat(), d = env.d();
  CHECK(env.value(ch) == doctest::Approx(v_value(kRef, ch)).epsilon(1e-13));
  CHECK(env.value(2.0) == doctest::Approx(v_value(kRef, 2.0)).epsilon(1e-13));
  const double mid = 0.5 * (ch + d);
  CHECK(env.value(mid) ==
        doctest::Approx(0.5 * (v_value(kRef, ch) + v_value(kRef, d))).epsilon(1e-10));
  CHECK(env.value(mid) >= v_value(kRef, mid));
  CHECK_THROWS_AS(env.value(0.5 * ch), std::domain_error);

  // dominance and concavity on a grid
  std::vector<double> xs;
  for (int i = 0; i <= 400; ++i) xs.push_back(ch * std::pow(8.0 / ch, i / 400.0));
  for (double x : xs) CHECK(env.value(x) >= v_value(kRef, x) - 1e-12);
  for (size_t i = 1; i + 1 < xs.size(); ++i) {
    const double l = env.value(xs[i - 1]), m = env.value(xs[i]), r = env.value(xs[i + 1]);
    const double t = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
    CHECK(m >= (1.0 - t) * l + t * r - 1e-10);
  }
}

TEST_CASE("monotone envelope ordering in the tolerance level") {
  // enlarging the domain [c_hat, inf) enlarges the chord supremum, so a larger
  // tolerance (smaller c_hat) dominates pointwise on the common domain
  const EnvelopeData tight(kRef, std::exp(-0.1));
  const EnvelopeData loose(kRef, std::exp(-0.25));
  for (double x : {0.95, 1.0, 1.000005, 1.2, 3.0})
    CHECK(loose.value(x) >= tight.value(x) - 1e-12);
  // and both stay between v and the global envelope
  const EnvelopeData global_like(kRef, 0.05);
  for (double x : {0.95, 1.0000049, 1.5}) {
    CHECK(tight.value(x) >= v_value(kRef, x) - 1e-14);
    CHECK(tight.value(x) <= global_like.value(x) + 1e-12);
  }
}

TEST_CASE("I: two-region form (a <= c_hat)") {
  const EnvelopeData env(kRef, std::exp(-0.1));
  const double vd = env.jump_slope();
  CHECK(env.optimal_level(vd) == env.c_hat());
  CHECK(env.optimal_level(vd * 1.5) == env.c_hat());
  CHECK(env.optimal_level(vd * (1.0 - 1e-9)) >= env.d());
  CHECK(env.optimal_level(1e-9) > 1e6);
  CHECK_THROWS_AS(env.optimal_level(0.0), std::domain_error);
  // never lands strictly inside (c_hat, d)
  for (double x = 0.05; x < 8.0; x *= 1.17) {
    const double level = env.optimal_level(x);
    CHECK(!(level > env.c_hat() + 1e-12 && level < env.d() - 1e-12));
  }
}

TEST_CASE("I: three-region form (a > c_hat)") {
  const EnvelopeData env(kRef, std::exp(-0.3));
  const double va = env.jump_slope(), vch = env.floor_slope();
  CHECK(env.optimal_level(va) == doctest::Approx(env.a()).epsilon(1e-12));
  CHECK(env.optimal_level(vch) == env.c_hat());
  CHECK(env.optimal_level(vch * 2.0) == env.c_hat());
  const double mid = 0.5 * (va + vch);
  const double level = env.optimal_level(mid);
  CHECK(level > env.c_hat());
  CHECK(level < env.a());
  CHECK(env.optimal_level(va * (1.0 - 1e-9)) >= env.b());
  // never lands strictly inside (a, b)
  for (double x = 0.05; x < 8.0; x *= 1.13) {
    const double lv = env.optimal_level(x);
    CHECK(!(lv > env.a() + 1e-12 && lv < env.b() - 1e-12));
  }
}

TEST_CASE("I is decreasing and right-continuous") {
  for (double c : {0.1, 0.3}) {
    const EnvelopeData env(kRef, std::exp(-c));
    double prev = 1e300;
    for (double x = 0.02; x < 10.0; x *= 1.05) {
      const double lv = env.optimal_level(x);
      CHECK(lv <= prev + 1e-12);
      prev = lv;
      const double right = env.optimal_level(x * (1.0 + 1e-12));
      CHECK(right == doctest::Approx(lv).epsilon(1e-6));
    }
  }
}

TEST_CASE("fenchel property of the envelope inverse") {
  for (double c : {0.1, 0.3}) {
    const EnvelopeData env(kRef, std::exp(-c));
    for (double x : {0.5, 1.0, 2.0, 3.3, 3.45, 4.0}) {
      // dense grid search of max_{y >= c_hat} (v(y) - x y)
      double best = -1e300;
      for (int i = 0; i <= 200000; ++i) {
        const double y = env.c_hat() * std::pow(40.0 / env.c_hat(), i / 200000.0);
        best = std::max(best, v_value(kRef, y) - x * y);
      }
      const double I = env.optimal_level(x);
      const double closed = env.value(I) - x * I;
      CHECK(closed == doctest::Approx(best).epsilon(1e-6));
      // the optimizer sits where envelope and v agree
      CHECK(env.value(I) == doctest::Approx(v_value(kRef, I)).epsilon(1e-11));
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((UtilityParams{1.2, 0.88, 2.5}.validate()), std::domain_error);
  CHECK_THROWS_AS((UtilityParams{0.88, 0.0, 2.5}.validate()), std::domain_error);
  CHECK_THROWS_AS((UtilityParams{0.88, 0.88, -1.0}.validate()), std::domain_error);
  CHECK_THROWS_AS(EnvelopeData(kRef, 1.5), std::domain_error);
}
