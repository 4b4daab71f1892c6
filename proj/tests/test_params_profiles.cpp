#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hslab/profile.hpp"
#include "hslab/serialize.hpp"

using namespace hslab;

namespace {

FractionalParams canonical() { return make_params(1, 0.3, 2.0, 0.0); }
FractionalParams secondary() { return make_params(2, 0.75, 2.0, 0.5); }

}  // namespace

TEST_CASE("make_params derives the critical exponent") {
  const auto pr = canonical();
  CHECK(pr.r == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(pr.threshold() == doctest::Approx(10.0 / 7.0).epsilon(1e-14));
  CHECK(pr.tail_decay_rate() == doctest::Approx(0.4).epsilon(1e-14));

  const auto pr2 = secondary();
  CHECK(pr2.r == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(pr2.threshold() == doctest::Approx(1.6).epsilon(1e-14));
}

TEST_CASE("make_params rejects inadmissible bundles") {
  CHECK_THROWS_AS(make_params(1, 0.3, 2.0, 0.7), ConstraintViolation);  // alpha >= ps
  CHECK_THROWS_AS(make_params(1, 0.3, 1.0, 0.0), ConstraintViolation);  // p = 1
  CHECK_THROWS_AS(make_params(1, 1.0, 2.0, 0.0), ConstraintViolation);  // s = 1
  CHECK_THROWS_AS(make_params(1, 0.0, 2.0, 0.0), ConstraintViolation);
  CHECK_THROWS_AS(make_params(1, 0.6, 2.0, 0.0), ConstraintViolation);  // ps >= N
  CHECK_THROWS_AS(make_params(1, 0.3, 2.0, -0.1), ConstraintViolation);
  CHECK_THROWS_AS(make_params(0, 0.3, 2.0, 0.0), ConstraintViolation);
}

TEST_CASE("scaling relation holds to machine precision") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> us(0.05, 0.95), up(1.05, 6.0);
  std::uniform_int_distribution<int> un(1, 5);
  int tested = 0;
  while (tested < 200) {
    const int N = un(rng);
    const double s = us(rng), p = up(rng);
    if (!(p * s < N)) continue;
    std::uniform_real_distribution<double> ua(0.0, p * s * 0.999);
    const double alpha = ua(rng);
    const auto pr = make_params(N, s, p, alpha);
    const double lhs = (N - pr.alpha) / pr.r;
    const double rhs = (N - pr.p * pr.s) / pr.p;
    CHECK(std::abs(lhs - rhs) <= 1e-15 * std::max(std::abs(lhs), 1.0));
    CHECK(pr.threshold() < pr.p);
    ++tested;
  }
}

TEST_CASE("local family parameters") {
  const auto pr = make_local_params(3, 2.0, 0.0);
  CHECK(pr.s == 1.0);
  CHECK(pr.r == doctest::Approx(6.0));
  CHECK_THROWS_AS(make_local_params(2, 2.0, 0.0), ConstraintViolation);  // p >= N
}

TEST_CASE("closed-form optimizer profile") {
  const auto pr = canonical();
  const RadialProfile u = at_profile(pr);
  CHECK(u.evaluate(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(u.evaluate(1.0) == doctest::Approx(std::pow(2.0, -0.2)).epsilon(1e-14));
  // tail: u(rho) * rho^{0.4} -> 1
  CHECK(u.evaluate(1e6) * std::pow(1e6, 0.4) == doctest::Approx(1.0).epsilon(1e-5));

  const RadialProfile u2 = at_profile(secondary());
  // (1 + rho^{4/3})^{-3/8}
  CHECK(u2.evaluate(2.0) == doctest::Approx(std::pow(1.0 + std::pow(2.0, 4.0 / 3.0), -0.375)));
  CHECK(u2.evaluate(0.0) == doctest::Approx(1.0));
}

TEST_CASE("rescaling the concentrating family") {
  const auto pr = canonical();
  const RadialProfile u = at_profile(pr);

  SUBCASE("identity at eps = 1") {
    const RadialProfile v = rescale(u, 1.0);
    for (double rho : {0.0, 0.5, 3.0, 100.0}) CHECK(v.evaluate(rho) == u.evaluate(rho));
  }
  SUBCASE("amplitude scaling at the origin") {
    const RadialProfile v = rescale(u, 0.1);
    CHECK(v.evaluate(0.0) == doctest::Approx(std::pow(0.1, -0.2)).epsilon(1e-14));
  }
  SUBCASE("group law") {
    const RadialProfile ab = rescale(rescale(u, 0.2), 5.0e-2);
    const RadialProfile once = rescale(u, 0.2 * 5.0e-2);
    for (int i = 0; i < 64; ++i) {
      const double rho = std::pow(10.0, -4.0 + 8.0 * i / 63.0);
      CHECK(ab.evaluate(rho) ==
            doctest::Approx(once.evaluate(rho)).epsilon(1e-12));
    }
  }
}

TEST_CASE("normalization algebra") {
  const auto pr = canonical();
  const RadialProfile u = at_profile(pr);

  SUBCASE("equal powers give c = 1") {
    const auto [v, c] = normalize(u, 3.7, 3.7);
    CHECK(c == doctest::Approx(1.0));
    CHECK(v.evaluate(2.0) == doctest::Approx(u.evaluate(2.0)));
  }
  SUBCASE("worked example") {
    const auto [v, c] = normalize(u, 2.0, 1.0);
    CHECK(c == doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-14));
  }
  SUBCASE("idempotence") {
    const auto [v, c] = normalize(u, 2.0, 1.0);
    // after scaling, powers become c^p * 2 and c^r * 1, which are equal
    const double gp = std::pow(c, pr.p) * 2.0;
    const double hr = std::pow(c, pr.r) * 1.0;
    CHECK(gp == doctest::Approx(hr).epsilon(1e-12));
    const auto [w, c2] = normalize(v, gp, hr);
    CHECK(c2 == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("degenerate inputs rejected") {
    CHECK_THROWS_AS(normalize(u, 0.0, 1.0), DegenerateNorm);
    CHECK_THROWS_AS(normalize(u, 1.0, -2.0), DegenerateNorm);
  }
}

TEST_CASE("decay fit recovers the tail exponent") {
  const auto pr = canonical();
  const RadialProfile u = at_profile(pr);
  const DecayFit fit = decay_fit(u, 10.0, 1000.0);
  CHECK(fit.measured_exponent == doctest::Approx(-0.4).epsilon(0.05));
  CHECK(std::abs(fit.measured_exponent + 0.4) < 0.02);
  CHECK(fit.c1 <= fit.c2);
  CHECK(fit.c1 > 0.0);

  const RadialProfile u2 = at_profile(secondary());
  const DecayFit fit2 = decay_fit(u2, 10.0, 1000.0);
  CHECK(std::abs(fit2.measured_exponent + 0.5) < 0.02);
}

TEST_CASE("decay fit of a pure power law") {
  const auto pr = canonical();
  std::vector<double> rho, val;
  for (int i = 0; i < 200; ++i) {
    const double r = std::pow(10.0, 3.0 * i / 199.0);  // [1, 1e3]
    rho.push_back(r);
    val.push_back(std::pow(r, -0.4));
  }
  const RadialProfile u = sampled_profile(pr, rho, val, 0.4);
  const DecayFit fit = decay_fit(u, 1.0, 900.0);
  CHECK(fit.measured_exponent == doctest::Approx(-0.4).epsilon(1e-10));
  CHECK(fit.c1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fit.c2 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("decay fit window validation") {
  const auto pr = canonical();
  const RadialProfile u = at_profile(pr);
  CHECK_THROWS_AS(decay_fit(u, 0.5, 100.0), InvalidRange);
  CHECK_THROWS_AS(decay_fit(u, 10.0, 15.0), InvalidRange);
  // sampled grid with too few nodes in the window
  std::vector<double> rho{0.0, 1.0, 2.0, 5.0, 1e4};
  std::vector<double> val{1.0, 0.5, 0.4, 0.3, 0.01};
  const RadialProfile v = sampled_profile(pr, rho, val, 0.4);
  CHECK_THROWS_AS(decay_fit(v, 1.0, 100.0), InsufficientRange);
}

TEST_CASE("sampled profiles reproduce the closed form") {
  const auto pr = canonical();
  const RadialProfile u = at_profile(pr);
  const RadialProfile v = sample_profile(u, 4096, 1e-4, 1e4);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double rho = std::pow(10.0, -3.0 + 6.0 * i / 1999.0);
    const double a = u.evaluate(rho), b = v.evaluate(rho);
    worst = std::max(worst, std::abs(a - b) / a);
  }
  CHECK(worst < 1e-6);
  CHECK(v.evaluate(1.0) == doctest::Approx(std::pow(2.0, -0.2)).epsilon(1e-6));
}

TEST_CASE("profiles are monotone non-increasing") {
  const auto pr = canonical();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ur(-4.0, 4.0);
  for (const RadialProfile& u :
       {at_profile(pr), rescale(at_profile(pr), 0.03), sample_profile(at_profile(pr))}) {
    for (int i = 0; i < 500; ++i) {
      double a = std::pow(10.0, ur(rng)), b = std::pow(10.0, ur(rng));
      if (a > b) std::swap(a, b);
      CHECK(u.evaluate(a) >= u.evaluate(b) * (1.0 - 1e-13));
    }
  }
}

TEST_CASE("sampled grid validation") {
  const auto pr = canonical();
  CHECK_THROWS_AS(sampled_profile(pr, {1.0, 0.5}, {1.0, 0.5}, 0.4), ConstraintViolation);
  CHECK_THROWS_AS(sampled_profile(pr, {0.5, 1.0}, {0.5, 1.0}, 0.4), ConstraintViolation);
  CHECK_THROWS_AS(sampled_profile(pr, {0.5, 1.0}, {1.0, -0.5}, 0.4), ConstraintViolation);
}

TEST_CASE("profile JSON round-trip") {
  const auto pr = secondary();
  const RadialProfile u = rescale(at_profile(pr), 0.25);
  const json j = profile_to_json(u);
  const RadialProfile v = profile_from_json(j);
  for (double rho : {0.0, 1e-3, 0.7, 42.0}) {
    CHECK(v.evaluate(rho) == doctest::Approx(u.evaluate(rho)).epsilon(1e-14));
  }
  CHECK(profile_to_json(v) == j);

  const RadialProfile w = sample_profile(u, 64, 1e-3, 1e3);
  const json jw = profile_to_json(w);
  CHECK(profile_to_json(profile_from_json(jw)) == jw);
}
