#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ordstat/marginals.hpp"

using namespace ordstat;

TEST_CASE("weibull baseline basics") {
  const auto w = make_weibull(1.2, 0.5);
  CHECK(w->survival(0.0) == 1.0);
  CHECK(w->survival(2.0) == doctest::Approx(std::exp(-std::pow(2.4, 0.5))));
  CHECK(w->survival(1e9) < 1e-100);
  CHECK(std::isinf(w->hazard(0.0)));
  CHECK(make_weibull(2.0, 1.0)->hazard(0.0) == 2.0);
  CHECK(make_weibull(2.0, 3.0)->hazard(0.0) == 0.0);
  for (double v : {1.0, 0.9, 0.3, 1e-8, 1e-200}) {
    CHECK(w->survival(w->quantile_survival(v)) == doctest::Approx(v).epsilon(1e-12));
  }
  CHECK_THROWS_AS(make_weibull(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_weibull(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("exponential baseline is the unit-shape weibull") {
  const auto e = make_exponential(0.7);
  const auto w = make_weibull(0.7, 1.0);
  for (double x : {0.0, 0.5, 3.0}) {
    CHECK(e->survival(x) == doctest::Approx(w->survival(x)).epsilon(1e-15));
    CHECK(e->hazard(x) == doctest::Approx(0.7));
  }
  CHECK_FALSE(same_baseline(e, w));
  CHECK(same_baseline(w, make_weibull(0.7, 1.0)));
}

TEST_CASE("mphr boundary values and errors") {
  const MphrMarginal m(0.3, 1.7, make_weibull(0.9, 1.4));
  CHECK(mphr_cdf(m, 0.0) == 0.0);
  CHECK(mphr_sf(m, 0.0) == 1.0);
  CHECK(mphr_sf(m, 1e6) == 0.0);
  CHECK(mphr_cdf(m, 1e6) == 1.0);
  CHECK_THROWS_AS(mphr_cdf(m, -1.0), std::domain_error);
  CHECK_THROWS_AS(mphr_quantile(m, 1.0), std::domain_error);
  CHECK_THROWS_AS(mphr_quantile(m, -0.1), std::domain_error);
  CHECK_THROWS_AS(mphr_sf(MphrMarginal(-0.1, 1.0, make_exponential(1.0)), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(mphr_sf(MphrMarginal(0.5, 0.0, make_exponential(1.0)), 1.0), std::invalid_argument);
}

TEST_CASE("alpha one reduces to proportional hazards") {
  const auto b = make_exponential(1.0);
  CHECK(mphr_cdf(MphrMarginal(1.0, 2.0, b), 1.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-15));
  const auto w = make_weibull(0.6, 2.2);
  for (double x : {0.1, 1.0, 2.5}) {
    CHECK(mphr_sf(MphrMarginal(1.0, 3.0, w), x) == doctest::Approx(std::pow(w->survival(x), 3.0)).epsilon(1e-14));
    CHECK(mphr_hazard(MphrMarginal(1.0, 3.0, w), x) == doctest::Approx(3.0 * w->hazard(x)).epsilon(1e-14));
  }
}

TEST_CASE("lambda one gives the tilt hazard, bounded by the baseline hazard") {
  const auto e = make_exponential(1.0);
  for (double x : {0.01, 0.5, 2.0, 10.0}) {
    const double tilt = mphr_hazard(MphrMarginal(0.5, 1.0, e), x);
    CHECK(tilt == doctest::Approx(1.0 / (1.0 - 0.5 * std::exp(-x))).epsilon(1e-14));
    CHECK(tilt >= 1.0);
    CHECK(mphr_hazard(MphrMarginal(2.0, 1.0, e), x) <= 1.0);
  }
}

TEST_CASE("complement identity and hazard consistency") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (int t = 0; t < 40; ++t) {
    const MphrMarginal m(3.0 * unit(rng), 3.0 * unit(rng), make_weibull(2.0 * unit(rng), 2.5 * unit(rng)));
    for (double x = 1e-3; x < 20.0; x *= 1.7) {
      CHECK(mphr_cdf(m, x) + mphr_sf(m, x) == doctest::Approx(1.0).epsilon(1e-14));
      const double s = mphr_sf(m, x);
      if (s < 1e-200) continue;
      const double h = 1e-6 * x;
      const double fd = -(std::log(mphr_sf(m, x + h)) - std::log(mphr_sf(m, x - h))) / (2 * h);
      CHECK(mphr_hazard(m, x) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("quantile round trip on random pairs") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const MphrMarginal m(0.01 + 2.0 * unit(rng), 0.05 + 3.0 * unit(rng),
                         make_weibull(0.1 + 2.0 * unit(rng), 0.2 + 2.5 * unit(rng)));
    const double u = 0.999 * unit(rng);
    const double x = mphr_quantile(m, u);
    CHECK(mphr_cdf(m, x) == doctest::Approx(u).epsilon(1e-10));
  }
  const MphrMarginal m(0.5, 1.0, make_exponential(1.0));
  CHECK(mphr_quantile(m, 0.0) == 0.0);
  CHECK(mphr_quantile(m, 2.0 / 3.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  const auto w = make_weibull(1.0, 2.0);
  CHECK(mphr_quantile(MphrMarginal(1.0, 2.0, w), 0.4) ==
        doctest::Approx(w->quantile_survival(std::pow(0.6, 0.5))).epsilon(1e-14));
}

TEST_CASE("distortion function") {
  CHECK(distortion_h(1.0, 0.3, 2.0) == 0.0);
  CHECK(distortion_h(0.0, 0.3, 2.0) == 1.0);
  CHECK(distortion_h(0.4, 1.0, 2.0) == doctest::Approx(1.0 - 0.16).epsilon(1e-15));
  // lambda = 1 is the distortion of the tilt family
  CHECK(distortion_h(0.4, 0.3, 1.0) == doctest::Approx(tilt_family1_cdf(0.4, 0.3)).epsilon(1e-15));
  const MphrMarginal m(0.3, 1.8, make_weibull(0.5, 0.8));
  for (double x : {0.0, 0.2, 2.0, 30.0}) {
    CHECK(distortion_h(m.baseline->survival(x), m.alpha, m.lambda) == doctest::Approx(mphr_cdf(m, x)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(distortion_h(1.2, 0.3, 1.0), std::domain_error);
}

TEST_CASE("tilt duality between the two tilt families") {
  for (double alpha : {0.1, 0.5, 0.9, 1.0, 3.0}) {
    for (double v : {0.0, 0.2, 0.7, 1.0}) {
      CHECK(tilt_family1_cdf(v, 1.0 / alpha) == doctest::Approx(tilt_family2_cdf(v, alpha)).epsilon(1e-12));
    }
  }
}

TEST_CASE("extreme times stay finite") {
  const MphrMarginal m(0.2, 4.0, make_weibull(3.0, 2.0));
  for (double x : {50.0, 1e3, 1e8}) {
    CHECK(std::isfinite(mphr_hazard(m, x)));
    CHECK(mphr_sf(m, x) == 0.0);
  }
}
