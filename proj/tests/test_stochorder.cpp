#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ordstat/cli.hpp"
#include "ordstat/stochorder.hpp"
#include "support/random_scenarios.hpp"

using namespace ordstat;

namespace {

Scenario example(int id) { return cli::builtin_example(id).scenario; }

Scenario swapped(Scenario s) {
  std::swap(s.x_side, s.y_side);
  std::swap(s.n1, s.n2);
  return s;
}

DependentSampleSpec spec_of(const std::vector<double>& alpha, const std::vector<double>& lambda, BaselinePtr b,
                            GeneratorPtr g) {
  DependentSampleSpec s;
  s.generator = std::move(g);
  for (std::size_t i = 0; i < alpha.size(); ++i) s.marginals.push_back({alpha[i], lambda[i], b});
  return s;
}

}  // namespace

TEST_CASE("grid construction") {
  const Grid g = Grid::uniform();
  CHECK(g.size() == 1000);
  CHECK(g.u().front() == doctest::Approx(1e-3));
  CHECK(g.u().back() == 1.0);
  CHECK(g.x().back() == 0.0);
  CHECK(g.x().front() == doctest::Approx(-std::log(1e-3)));
  CHECK_THROWS_AS(Grid(std::vector<double>(10, 0.5)), std::invalid_argument);
  std::vector<double> dup(60);
  for (int k = 0; k < 60; ++k) dup[k] = (k + 1) / 60.0;
  dup[10] = dup[9];
  CHECK_THROWS_AS(Grid{dup}, std::invalid_argument);
  CHECK_THROWS_AS(Grid::uniform(0.0, 1.0, 100), std::invalid_argument);
}

TEST_CASE("identical curves hold every order with zero margin") {
  const Grid g = Grid::uniform(1e-3, 1.0, 200);
  auto sf = [](double x) { return std::exp(-x); };
  auto hr = [](double) { return 1.0; };
  auto cdf = [](double x) { return -std::expm1(-x); };
  const auto st = check_st(sf, sf, g);
  CHECK(st.holds);
  CHECK(st.min_margin == 0.0);
  const auto h = check_hr(hr, hr, sf, sf, g);
  CHECK(h.holds);
  CHECK(h.min_margin == 0.0);
  CHECK_FALSE(h.numerically_unstable);
  CHECK(check_rh(cdf, cdf, g).holds);
}

TEST_CASE("usual stochastic order on the worked examples") {
  for (int id : {1, 2}) {
    const auto r = run_comparison(example(id));
    REQUIRE(r.dominance.size() == 1);
    CHECK(r.dominance[0].order == StochasticOrder::st);
    CHECK(r.dominance[0].holds);
    CHECK(r.dominance[0].min_margin >= -1e-12);
    CHECK(r.dominance[0].points_checked == 1000);
    const auto s = run_comparison(swapped(example(id)));
    CHECK_FALSE(s.dominance[0].holds);
    CHECK(s.dominance[0].min_margin < 0.0);
  }
}

TEST_CASE("hazard rate order on the worked examples") {
  for (int id : {3, 4}) {
    const auto r = run_comparison(example(id));
    REQUIRE(r.dominance.size() == 1);
    const auto& d = r.dominance[0];
    CHECK(d.order == StochasticOrder::hr);
    CHECK(d.holds);
    CHECK(d.hazard_check_holds);
    CHECK(d.ratio_monotone);
    CHECK_FALSE(d.numerically_unstable);
    CHECK(d.points_checked == 999);  // x = 0 is excluded
  }
}

TEST_CASE("reversed hazard rate checker") {
  const Grid g = Grid::uniform(1e-3, 1.0, 500);
  auto cdf1 = [](double x) { return -std::expm1(-x); };
  auto cdf2 = [](double x) { return -std::expm1(-2 * x); };
  CHECK(check_rh(cdf2, cdf1, g).holds);
  const auto r = check_rh(cdf1, cdf2, g);
  CHECK_FALSE(r.holds);
  CHECK(r.min_margin < 0.0);
}

TEST_CASE("evaluation errors name the abscissa") {
  const Grid g = Grid::uniform(1e-3, 1.0, 100);
  auto bad = [](double x) -> double {
    if (x > 3.0) throw std::domain_error("boom");
    return 1.0;
  };
  CHECK_THROWS_WITH_AS(check_st(bad, bad, g), doctest::Contains("x = "), std::runtime_error);
}

TEST_CASE("hypothesis validators on the worked examples") {
  const auto h1 = validate_theorem(example(1));
  CHECK(h1.passed());
  for (const char* name : {"common_alpha_in_unit_interval", "lambda_mu_common_cone", "lambda_weakly_supermajorizes_mu",
                           "n1_st_n2", "psi_log_concave", "common_generator", "common_baseline"}) {
    CAPTURE(name);
    REQUIRE(h1.find(name));
    CHECK(h1.find(name)->passed);
  }
  const auto h2 = validate_theorem(example(2));
  CHECK(h2.passed());
  REQUIRE(h2.find("generator_n_monotone"));
  CHECK_FALSE(h2.find("generator_n_monotone")->passed);
  CHECK_FALSE(h2.find("generator_n_monotone")->gating);
  CHECK(validate_theorem(example(3)).passed());
  CHECK(validate_theorem(example(4)).passed());

  Scenario untagged = example(1);
  untagged.theorem = TheoremTag::none;
  CHECK(validate_theorem(untagged).checks.empty());
  CHECK(validate_theorem(untagged).passed());

  CHECK_FALSE(validate_theorem(swapped(example(1))).passed());
  CHECK_FALSE(validate_theorem(swapped(example(3))).passed());
}

TEST_CASE("violated hypotheses are reported while the comparison still runs") {
  const auto b = make_weibull(1.0, 1.0);
  Scenario s;
  s.x_side = MultipleOutlierSpec{0.5, 0.3, 0.4, 2, 3, b};
  s.y_side = MultipleOutlierSpec{0.5, 0.2, 0.4, 2, 3, b};  // lambda1 > lambda2
  s.theorem = TheoremTag::thm4;
  const auto r = run_comparison(s);
  CHECK_FALSE(r.hypotheses.passed());
  REQUIRE(r.hypotheses.find("lambda_chain"));
  CHECK_FALSE(r.hypotheses.find("lambda_chain")->passed);
  CHECK(r.dominance.size() == 1);
  CHECK(cli::comparison_exit_code(r) != 0);

  Scenario mixed = example(1);
  mixed.theorem = TheoremTag::thm4;
  CHECK_FALSE(validate_theorem(mixed).passed());

  Scenario clayton = example(1);
  auto& xs = std::get<DependentSampleSpec>(clayton.x_side);
  auto& ys = std::get<DependentSampleSpec>(clayton.y_side);
  xs.generator = ys.generator = builtin_generator("clayton", {1.0});
  const auto hc = validate_theorem(clayton);
  CHECK_FALSE(hc.find("psi_log_concave")->passed);

  Scenario cones = example(1);
  std::get<DependentSampleSpec>(cones.y_side).marginals[0].lambda = 1.7;  // mu = (1.7, 0.3, 1.5, 1.6)
  CHECK_FALSE(validate_theorem(cones).find("lambda_mu_common_cone")->passed);
}

TEST_CASE("parse theorem tags and default orders") {
  CHECK(parse_theorem_tag("thm3") == TheoremTag::thm3);
  CHECK(parse_theorem_tag("none") == TheoremTag::none);
  CHECK_FALSE(parse_theorem_tag("thm6"));
  CHECK(requested_orders(example(1)) == std::vector<StochasticOrder>{StochasticOrder::st});
  CHECK(requested_orders(example(4)) == std::vector<StochasticOrder>{StochasticOrder::hr});
}

TEST_CASE("survival of the dependent sample is decreasing in each PHR parameter, in the required order") {
  // At D+ points the partials satisfy 0 >= f_(1) >= ... >= f_(n).
  const auto b = make_weibull(1.2, 0.5);
  const auto g = builtin_generator("example1", {0.1});
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  std::vector<std::vector<double>> pts;
  for (int t = 0; t < 60; ++t) {
    std::vector<double> l{u(rng), u(rng), u(rng), u(rng)};
    std::sort(l.begin(), l.end(), std::greater<>());
    pts.push_back(l);
  }
  for (double x : {0.1, 0.7, 2.0}) {
    auto f = [&](std::span<const double> lambda) {
      return second_order_sf_dependent(spec_of(std::vector<double>(4, 0.8), {lambda.begin(), lambda.end()}, b, g), x);
    };
    const auto r = schur_condition_check(f, SchurPattern::weak_super_decreasing, Cone::decreasing, pts);
    CHECK(r.points_checked == 60);
    CHECK(r.holds);
  }
}

TEST_CASE("independent hazard is Schur-concave in the reciprocal tilts on I+") {
  const auto b = make_weibull(0.15, 1.2);
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(1.0, 6.0);
  std::vector<std::vector<double>> pts;
  for (int t = 0; t < 60; ++t) {
    std::vector<double> a{u(rng), u(rng), u(rng), u(rng)};
    std::sort(a.begin(), a.end());
    pts.push_back(a);
  }
  for (double x : {0.5, 3.0, 20.0}) {
    auto phi = [&](std::span<const double> a) {
      std::vector<MphrMarginal> ms;
      for (double v : a) ms.push_back({1.0 / v, 0.5, b});
      return second_order_hazard_independent(ms, x);
    };
    CHECK(schur_condition_check(phi, SchurPattern::decreasing_in_k, Cone::increasing, pts).holds);
  }
}

TEST_CASE("property suites: fixed-size and multiple-outlier theorems") {
  for (auto t : {TheoremTag::thm3, TheoremTag::thm4, TheoremTag::thm5}) {
    CAPTURE(to_string(t));
    const auto r = testing::run_property_suite(t, 100, 20261015);
    CHECK(r.scenarios == 100);
    CHECK(r.failures == 0);
    CHECK(r.st_implied_checked == 100);
    CHECK(r.st_implied_failures == 0);
  }
}

TEST_CASE("property suites: dependent theorems with a fixed sample size") {
  for (auto t : {TheoremTag::thm1, TheoremTag::thm2}) {
    CAPTURE(to_string(t));
    std::mt19937_64 rng(77);
    int fixed = 0;
    while (fixed < 100) {
      auto d = testing::draw_passing_scenario(t, rng);
      if (d.scenario.n1) continue;
      ++fixed;
      CAPTURE(d.description);
      CHECK(run_comparison(d.scenario).dominance_holds());
    }
  }
}

TEST_CASE("a stochastically larger random sample size lowers the second-order statistic") {
  // Identical observations on both sides, N1 >=st N2: the comparison runs the
  // other way, so the st conclusion fails although every listed hypothesis holds.
  Scenario s = example(1);
  s.y_side = s.x_side;
  s.n1 = SampleSizeLaw({0.0, 0.0, 0.0, 1.0});
  s.n2 = SampleSizeLaw({0.0, 1.0, 0.0, 0.0});
  const auto r = run_comparison(s);
  CHECK(r.hypotheses.passed());
  CHECK_FALSE(r.dominance_holds());
  std::swap(s.n1, s.n2);
  CHECK(run_comparison(s).dominance_holds());
}

TEST_CASE("random sample sizes: the direction-corrected statement holds") {
  // N1 <=st N2 with the smallest components first (lambda in I+, 1/alpha in I+).
  for (auto t : {TheoremTag::thm1, TheoremTag::thm2}) {
    CAPTURE(to_string(t));
    std::mt19937_64 rng(78);
    int checked = 0;
    while (checked < 100) {
      auto d = testing::draw_passing_scenario(t, rng);
      if (!d.scenario.n1) continue;
      const auto& x = std::get<DependentSampleSpec>(d.scenario.x_side);
      std::vector<double> key;
      for (const auto& m : x.marginals) key.push_back(t == TheoremTag::thm1 ? m.lambda : 1.0 / m.alpha);
      if (!in_cone(cone_membership(key), Cone::increasing)) continue;
      std::swap(d.scenario.n1, d.scenario.n2);
      ++checked;
      CAPTURE(d.description);
      CHECK(run_comparison(d.scenario).dominance_holds());
    }
  }
}
