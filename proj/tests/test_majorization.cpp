#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ordstat/majorization.hpp"

using namespace ordstat;

using V = std::vector<double>;

TEST_CASE("majorization") {
  CHECK(majorize_check(V{2, 1}, V{1.5, 1.5}).holds);
  CHECK(majorize_check(V{4, 3, 2, 1}, V{3, 3, 2, 2}).holds);
  CHECK(majorize_check(V{1, 2, 3}, V{1, 2, 3}).holds);
  const auto r = majorize_check(V{1.5, 1.5}, V{2, 1});
  CHECK_FALSE(r.holds);
  CHECK(r.first_violated_index == 1u);
  // unequal totals fail at index n
  const auto t = majorize_check(V{1, 1}, V{1, 2});
  CHECK_FALSE(t.holds);
  CHECK(t.first_violated_index == 2u);
  CHECK_THROWS_AS(majorize_check(V{1, 2}, V{1}), std::invalid_argument);
  CHECK_THROWS_AS(majorize_check(V{}, V{}), std::invalid_argument);
}

TEST_CASE("weak supermajorization") {
  CHECK(weak_supermajorize_check(V{0.2, 0.4, 0.8, 1.3}, V{0.3, 0.3, 1.5, 1.6}).holds);
  CHECK(weak_supermajorize_check(V{3, 3, 5, 8}, V{5, 6, 7, 9}).holds);
  CHECK(weak_supermajorize_check(V{1, 5}, V{1, 5}).holds);
  CHECK_FALSE(weak_supermajorize_check(V{0.3, 0.3, 1.5, 1.6}, V{0.2, 0.4, 0.8, 1.3}).holds);
}

TEST_CASE("weak submajorization") {
  CHECK(weak_submajorize_check(V{1, 8}, V{3, 4}).holds);
  CHECK(weak_submajorize_check(V{2, 7}, V{2, 7}).holds);
  const auto r = weak_submajorize_check(V{1, 1}, V{5, 5});
  CHECK_FALSE(r.holds);
  CHECK(r.margin == doctest::Approx(-8.0));
}

TEST_CASE("cone membership") {
  CHECK(cone_membership(V{3, 2, 1}) == Cone::decreasing);
  CHECK(cone_membership(V{1, 2, 3}) == Cone::increasing);
  CHECK(cone_membership(V{1, 3, 2}) == Cone::neither);
  CHECK(cone_membership(V{2, 2}) == Cone::both);
  CHECK(cone_membership(V{-1, -2}) == Cone::neither);
  CHECK(in_cone(Cone::both, Cone::increasing));
  CHECK_FALSE(in_cone(Cone::decreasing, Cone::increasing));
  CHECK(to_string(Cone::decreasing) == "D+");
}

TEST_CASE("discrete stochastic order on sample-size laws") {
  const SampleSizeLaw n1({0.05, 0.2, 0.3, 0.45});
  const SampleSizeLaw n2({0.05, 0.2, 0.35, 0.4});
  CHECK(st_order_discrete(n1, n2).holds);
  CHECK(st_order_discrete(n1, n1).holds);
  const auto swapped = st_order_discrete(n2, n1);
  CHECK_FALSE(swapped.holds);
  CHECK(swapped.first_violated_index == 3u);
  CHECK(swapped.margin == doctest::Approx(-0.05));

  // reflexive and transitive on random triples
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto law = [&] {
    V p(4);
    double s = 0;
    for (auto& v : p) s += (v = u(rng));
    for (auto& v : p) v /= s;
    p[3] = 1.0 - p[0] - p[1] - p[2];
    return SampleSizeLaw(p);
  };
  int chains = 0;
  for (int t = 0; t < 2000; ++t) {
    const auto a = law(), b = law(), c = law();
    CHECK(st_order_discrete(a, a).holds);
    if (st_order_discrete(a, b).holds && st_order_discrete(b, c).holds) {
      ++chains;
      CHECK(st_order_discrete(a, c).holds);
    }
  }
  CHECK(chains > 0);
}

TEST_CASE("generated pairs pass their checker, zero transfers give equal vectors") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10000; ++t) {
    const auto [x, y] = generate_majorized_pair(MajorizationKind::majorization, 4, rng);
    REQUIRE(majorize_check(x, y).holds);
    const auto [xs, ys] = generate_majorized_pair(MajorizationKind::weak_super, 4, rng);
    REQUIRE(weak_supermajorize_check(xs, ys).holds);
    const auto [xb, yb] = generate_majorized_pair(MajorizationKind::weak_sub, 4, rng);
    REQUIRE(weak_submajorize_check(xb, yb).holds);
  }
  const auto [x0, y0] = generate_majorized_pair(MajorizationKind::majorization, 5, rng, 0);
  CHECK(x0 == y0);
  CHECK_THROWS_AS(generate_majorized_pair(MajorizationKind::majorization, 1, rng), std::invalid_argument);
}

TEST_CASE("majorization implies both weak orders; checkers are permutation invariant") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10000; ++t) {
    auto [x, y] = generate_majorized_pair(MajorizationKind::majorization, 2 + t % 5, rng);
    REQUIRE(majorize_check(x, y).holds);
    CHECK(weak_supermajorize_check(x, y).holds);
    CHECK(weak_submajorize_check(x, y).holds);
    const auto before = weak_submajorize_check(y, x).holds;
    std::shuffle(x.begin(), x.end(), rng);
    std::shuffle(y.begin(), y.end(), rng);
    CHECK(majorize_check(x, y).holds);
    CHECK(weak_submajorize_check(y, x).holds == before);
  }
}

TEST_CASE("schur condition checks") {
  auto sum = [](std::span<const double> z) {
    double s = 0;
    for (double v : z) s += v;
    return s;
  };
  const std::vector<V> pts{{1, 2, 3}, {0.5, 0.5, 4}, {2, 2, 2}};
  CHECK(schur_condition_check(sum, SchurPattern::increasing_in_k, Cone::increasing, pts).holds);
  CHECK(schur_condition_check(sum, SchurPattern::decreasing_in_k, Cone::increasing, pts).holds);

  // sum of squares is Schur-convex: partials increase along I+, and decrease along D+ ordering
  auto sq = [](std::span<const double> z) {
    double s = 0;
    for (double v : z) s += v * v;
    return s;
  };
  CHECK(schur_condition_check(sq, SchurPattern::increasing_in_k, Cone::increasing, pts).holds);
  CHECK_FALSE(schur_condition_check(sq, SchurPattern::decreasing_in_k, Cone::increasing, pts).holds);

  const std::vector<V> outside{{3, 1, 2}};
  const auto r = schur_condition_check(sum, SchurPattern::increasing_in_k, Cone::increasing, outside);
  CHECK(r.points_outside_cone == 1);
  CHECK_FALSE(r.holds);
}

TEST_CASE("squared tilt ratio function") {
  CHECK(tilt_square_ratio(0.5, 0.0) == 0.0);
  CHECK(tilt_square_ratio(1.0, 0.0) == 0.0);
  for (double p : {0.1, 0.5, 0.9, 1.0}) CHECK(tilt_square_ratio(p, 1.0) == doctest::Approx(1.0));
  // at p = 1 the function is the constant 1 on (0, 1]
  CHECK(tilt_square_ratio(1.0, 0.3) == doctest::Approx(1.0));
  V grid;
  for (int k = 0; k < 100; ++k) grid.push_back(k / 99.0);
  CHECK(tilt_square_ratio_monotone(0.5, grid));
  CHECK(tilt_square_ratio_monotone(1.0, grid));
  CHECK(tilt_square_ratio_monotone(0.01, grid));
  CHECK_THROWS_AS(tilt_square_ratio_monotone(0.0, grid), std::invalid_argument);
  CHECK_THROWS_AS(tilt_square_ratio_monotone(1.5, grid), std::invalid_argument);
  CHECK_THROWS_AS(tilt_square_ratio_monotone(0.5, V{0.2, 1.3}), std::invalid_argument);
}
