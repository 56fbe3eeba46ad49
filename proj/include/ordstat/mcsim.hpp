#pragma once

// Monte Carlo cross-checks for independent MPHR samples: inverse-transform
// sampling, empirical second-order survival curves and their standardized
// deviation from the closed form.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ordstat/stochorder.hpp"

namespace ordstat {

/// Seedable, splittable uniform source. Sub-streams for worker k are seeded
/// from splitmix64 applied to (seed, k), so a run is reproducible for a fixed
/// seed and worker count regardless of thread scheduling.
class RandomStream {
public:
  static constexpr const char* kAlgorithm = "mt19937_64/splitmix64-split";

  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for worker `index` of a run seeded with `seed`.
  static RandomStream split(std::uint64_t seed, std::uint64_t index);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct SimConfig {
  std::size_t replications = 100000;
  std::uint64_t seed = 1;
  std::vector<MphrMarginal> marginals;
  Grid grid = Grid::uniform();
  unsigned workers = 4;
};

/// One lifetime per marginal by inversion of its cdf.
std::vector<double> sample_independent_vector(std::span<const MphrMarginal> marginals, RandomStream& rng);

/// Fraction of samples whose second-smallest component exceeds each grid x,
/// in grid order. Throws std::invalid_argument when a sample has fewer than
/// two components.
std::vector<double> empirical_second_order_sf(const std::vector<std::vector<double>>& samples,
                                              const Grid& grid);

/// Second-smallest component of each of `config.replications` independent
/// sample vectors, computed across config.workers threads.
std::vector<double> simulate_second_order(const SimConfig& config);

struct McReport {
  std::string algorithm = RandomStream::kAlgorithm;
  std::uint64_t seed = 0;
  std::size_t replications = 0;
  std::vector<double> empirical;
  std::vector<double> analytic;
  /// max |empirical - analytic| / sqrt(p(1-p)/R) with p the analytic value;
  /// the denominator is floored at 1/R.
  double max_standardized_deviation = 0.0;
  double witness_x = 0.0;
  bool pass = false;
};

inline constexpr double kMcPassThreshold = 4.0;

/// Standardized deviation of an empirical curve from an analytic one.
McReport compare_to_analytic(const std::vector<double>& empirical, const std::vector<double>& analytic,
                             const Grid& grid, std::size_t replications);

/// Simulates config and compares against second_order_sf_independent.
McReport mc_vs_analytic_report(const SimConfig& config);
/// Same, against a caller-supplied analytic curve.
McReport mc_vs_analytic_report(const SimConfig& config, const std::function<double(double)>& analytic);

/// Kolmogorov-Smirnov distance between a sample and a continuous cdf.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
/// Asymptotic 1% critical value 1.628/sqrt(n).
double ks_critical_value_1pct(std::size_t n);

}  // namespace ordstat
