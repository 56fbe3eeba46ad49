#pragma once

// Random scenario generators for the theorem property suites. Each draw is
// rejected until the theorem's validator passes, so every returned scenario
// satisfies the gating hypotheses.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ordstat/stochorder.hpp"

namespace ordstat::testing {

struct RandomDraw {
  Scenario scenario;
  /// Draws rejected by the validator before this one.
  int rejected = 0;
  std::string description;
};

/// One validator-passing scenario for the given theorem (thm1..thm5).
RandomDraw draw_passing_scenario(TheoremTag theorem, std::mt19937_64& rng);

struct PropertyFailure {
  std::string description;
  DominanceReport report;
};

struct PropertySuiteResult {
  TheoremTag theorem = TheoremTag::none;
  int scenarios = 0;
  int failures = 0;
  int rejected = 0;
  /// hr-theorem scenarios where the implied st check also held.
  int st_implied_checked = 0;
  int st_implied_failures = 0;
  std::vector<PropertyFailure> failure_samples;
};

/// Runs `count` validator-passing scenarios through the theorem's conclusion.
PropertySuiteResult run_property_suite(TheoremTag theorem, int count, std::uint64_t seed);

}  // namespace ordstat::testing
