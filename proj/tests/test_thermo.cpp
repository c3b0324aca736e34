#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "lagvac/gas_law.hpp"
#include "lagvac/quad.hpp"

using namespace lagvac;

TEST_CASE("gauss-kronrod quadrature handles smooth and singular integrands") {
  auto r1 = integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
  CHECK(r1.converged);
  CHECK(std::abs(r1.value - 2.0) < 1e-12);

  // integrable endpoint singularity
  auto r2 =
      integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10);
  CHECK(r2.converged);
  CHECK(std::abs(r2.value - 2.0) < 1e-9);

  // reversed limits flip the sign
  auto r3 = integrate([](double x) { return x; }, 1.0, 0.0, 1e-12);
  CHECK(std::abs(r3.value + 0.5) < 1e-13);
}

TEST_CASE("beta exponent mapping") {
  CHECK(beta_of_gamma(3.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(beta_of_gamma(5.0 / 3.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS(beta_of_gamma(1.0), InvalidConstitutiveLaw);
  CHECK_THROWS_AS(beta_of_gamma(0.5), InvalidConstitutiveLaw);
}

TEST_CASE("normalized gamma law closed forms at beta = 2") {
  auto law = GasLaw::gamma_law(3.0);  // beta = 2
  CHECK(law.beta() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(law.v(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(law.c(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(law.p(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(law.eps(1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(law.h_of_v(1.0) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK(law.v(0.0) == std::numeric_limits<double>::infinity());
  CHECK(law.c(0.0) == 0.0);
  CHECK(law.p(0.0) == 0.0);
  CHECK(law.eps(0.0) == 0.0);
  CHECK(law.c_inverse(0.0) == 0.0);
  CHECK_THROWS_AS(law.v(-0.1), std::domain_error);
}

TEST_CASE("h is the integral of the sound speed in v") {
  // Independent oracle: h(v1) - h(v2) = int_{v1}^{v2} sqrt(-P'(v)) dv.
  for (bool rescaled : {true, false}) {
    auto law = GasLaw::gamma_law(1.4, 0.8, rescaled);
    const double v1 = 0.3, v2 = 4.0;
    double lhs = law.h_of_v(v1) - law.h_of_v(v2);
    double rhs = integrate_or_throw(
        [&](double v) { return law.sound_speed_of_v(v); }, v1, v2, 1e-13);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
  }
}

TEST_CASE("gamma law roundtrips and cross-consistency") {
  for (double gamma : {1.4, 2.0, 3.0}) {
    for (bool rescaled : {true, false}) {
      auto law = GasLaw::gamma_law(gamma, 2.5, rescaled);
      for (double h : {0.01, 0.5, 1.0, 7.0}) {
        CHECK(law.h_of_v(law.v(h)) == doctest::Approx(h).epsilon(1e-13));
        CHECK(law.c_inverse(law.c(h)) == doctest::Approx(h).epsilon(1e-13));
        CHECK(law.pressure_of_v(law.v(h)) ==
              doctest::Approx(law.p(h)).epsilon(1e-13));
        CHECK(law.energy_of_v(law.v(h)) ==
              doctest::Approx(law.eps(h)).epsilon(1e-13));
        CHECK(law.sound_speed_of_v(law.v(h)) ==
              doctest::Approx(law.c(h)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("energy primitive: d eps / d v = -P") {
  auto law = GasLaw::gamma_law(1.4, 1.0, false);
  const double v = 1.7, dv = 1e-5;
  double lhs = (law.energy_of_v(v + dv) - law.energy_of_v(v - dv)) / (2 * dv);
  CHECK(lhs == doctest::Approx(-law.pressure_of_v(v)).epsilon(1e-8));
}

static GasLaw sampled_gamma(double gamma, int n, double vlo, double vhi) {
  std::vector<double> v(n), P(n);
  for (int i = 0; i < n; ++i) {
    v[i] = vlo * std::pow(vhi / vlo, double(i) / (n - 1));
    P[i] = std::pow(v[i], -gamma);
  }
  return GasLaw::tabulated(v, P);
}

TEST_CASE("tabulated law reproduces the gamma law it was sampled from") {
  const double gamma = 1.4;
  auto tab = std::make_shared<GasLaw>(sampled_gamma(gamma, 400, 0.05, 50.0));
  auto ref = GasLaw::gamma_law(gamma, 1.0, false);

  for (double v : {0.1, 0.7, 3.0, 20.0, 200.0}) {  // 200 exercises the tail
    CHECK(tab->h_of_v(v) == doctest::Approx(ref.h_of_v(v)).epsilon(2e-4));
    CHECK(tab->pressure_of_v(v) ==
          doctest::Approx(ref.pressure_of_v(v)).epsilon(2e-4));
    CHECK(tab->energy_of_v(v) ==
          doctest::Approx(ref.energy_of_v(v)).epsilon(2e-4));
  }
  for (double h : {0.05, 0.3, 1.0}) {
    CHECK(tab->v(h) == doctest::Approx(ref.v(h)).epsilon(5e-4));
    CHECK(tab->p(h) == doctest::Approx(ref.p(h)).epsilon(1e-3));
    CHECK(tab->c(h) == doctest::Approx(ref.c(h)).epsilon(1e-3));
    CHECK(tab->c_inverse(tab->c(h)) == doctest::Approx(h).epsilon(1e-10));
    CHECK(tab->h_of_v(tab->v(h)) == doctest::Approx(h).epsilon(1e-10));
  }
  CHECK(std::isfinite(tab->h_max()));
}

TEST_CASE("tabulated law validation") {
  // too few rows
  CHECK_THROWS_AS(GasLaw::tabulated({1, 2, 3}, {3, 2, 1}),
                  InvalidConstitutiveLaw);
  // non-monotone pressure
  CHECK_THROWS_AS(GasLaw::tabulated({1, 2, 3, 4}, {4, 5, 2, 1}),
                  InvalidConstitutiveLaw);
  // negative pressure
  CHECK_THROWS_AS(GasLaw::tabulated({1, 2, 3, 4}, {4, 3, 2, -1}),
                  InvalidConstitutiveLaw);
  // tail decays too slowly for H to converge: P ~ v^-0.9
  {
    std::vector<double> v(40), P(40);
    for (int i = 0; i < 40; ++i) {
      v[i] = 0.5 * std::pow(100.0, i / 39.0);
      P[i] = std::pow(v[i], -0.9);
    }
    CHECK_THROWS_WITH_AS(GasLaw::tabulated(v, P),
                         doctest::Contains("diverges"),
                         InvalidConstitutiveLaw);
  }
}
