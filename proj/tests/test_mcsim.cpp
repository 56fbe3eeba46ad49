#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ordstat/mcsim.hpp"

using namespace ordstat;

namespace {

std::vector<MphrMarginal> example3_x() {
  const auto b = make_weibull(0.15, 1.2);
  return {{0.25, 0.5, b}, {1.0 / 3, 0.5, b}, {0.5, 0.5, b}, {1.0, 0.5, b}};
}

}  // namespace

TEST_CASE("random stream reproducibility and splitting") {
  RandomStream a(42), b(42);
  for (int k = 0; k < 100; ++k) CHECK(a.next() == b.next());
  RandomStream s0 = RandomStream::split(42, 0), s0b = RandomStream::split(42, 0), s1 = RandomStream::split(42, 1);
  const double v0 = s0.uniform();
  CHECK(v0 == s0b.uniform());
  CHECK(v0 != s1.uniform());
  RandomStream c(7);
  for (int k = 0; k < 10000; ++k) {
    const double u = c.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("sampling by inversion") {
  const auto e = make_exponential(1.0);
  const std::vector<MphrMarginal> unit{{1.0, 1.0, e}};
  RandomStream rng(5);
  double sum = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) sum += sample_independent_vector(unit, rng)[0];
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
  const std::vector<MphrMarginal> ms = example3_x();
  CHECK(mphr_quantile(ms[2], 0.0) == 0.0);
}

TEST_CASE("each coordinate passes a KS test at the 1% level") {
  const auto ms = example3_x();
  RandomStream rng(2024);
  const std::size_t n = 100000;
  std::vector<std::vector<double>> cols(ms.size());
  for (std::size_t r = 0; r < n; ++r) {
    const auto v = sample_independent_vector(ms, rng);
    for (std::size_t j = 0; j < ms.size(); ++j) cols[j].push_back(v[j]);
  }
  for (std::size_t j = 0; j < ms.size(); ++j) {
    const double d = ks_statistic(cols[j], [&](double x) { return mphr_cdf(ms[j], x); });
    CHECK(d < ks_critical_value_1pct(n));
  }
  // a wrong cdf is rejected
  const double wrong = ks_statistic(cols[0], [&](double x) { return mphr_cdf(ms[3], x); });
  CHECK(wrong > ks_critical_value_1pct(n));
}

TEST_CASE("empirical second-order survival") {
  const Grid g = Grid::uniform(std::exp(-3.5), 1.0, 400);
  const auto curve = empirical_second_order_sf({{3.0, 1.0, 2.0}}, g);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(curve[k] == (g.x()[k] < 2.0 ? 1.0 : 0.0));
  CHECK_THROWS_AS(empirical_second_order_sf({{1.0}}, g), std::invalid_argument);

  const auto e = make_exponential(1.0);
  SimConfig c;
  c.marginals = {{1, 1, e}, {1, 1, e}, {1, 1, e}};
  c.replications = 100000;
  c.seed = 9;
  c.grid = Grid::uniform(1e-3, 1.0, 200);
  const auto iid = mc_vs_analytic_report(c, [](double x) { return 3 * std::exp(-2 * x) - 2 * std::exp(-3 * x); });
  CHECK(iid.pass);
}

TEST_CASE("concordance with the closed form, controls and reproducibility") {
  SimConfig c;
  c.marginals = example3_x();
  c.replications = 100000;
  c.seed = 20261015;
  const auto r = mc_vs_analytic_report(c);
  CHECK(r.pass);
  CHECK(r.max_standardized_deviation < kMcPassThreshold);
  CHECK(r.algorithm == std::string(RandomStream::kAlgorithm));

  const auto again = mc_vs_analytic_report(c);
  CHECK(again.empirical == r.empirical);
  CHECK(again.max_standardized_deviation == r.max_standardized_deviation);

  // a different worker count changes the partition but not correctness
  SimConfig c1 = c;
  c1.workers = 1;
  CHECK(mc_vs_analytic_report(c1).pass);

  const auto self = compare_to_analytic(r.analytic, r.analytic, c.grid, c.replications);
  CHECK(self.max_standardized_deviation == 0.0);
  CHECK(self.pass);

  const auto& ms = c.marginals;
  const auto corrupted =
      mc_vs_analytic_report(c, [&ms](double x) { return std::min(1.0, second_order_sf_independent(ms, x) + 0.01); });
  CHECK_FALSE(corrupted.pass);
}
