#pragma once

// Survival and hazard functions of the second-order statistic X_{2:n}, the
// lifetime of an (n-1)-out-of-n (fail-safe) system.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ordstat/copula.hpp"
#include "ordstat/marginals.hpp"

namespace ordstat {

/// n MPHR observations coupled by an Archimedean survival copula.
struct DependentSampleSpec {
  std::vector<MphrMarginal> marginals;
  GeneratorPtr generator;

  std::size_t size() const { return marginals.size(); }
  /// Non-empty, every marginal valid, generator present and n within its
  /// dimension limit. Throws std::invalid_argument.
  void validate() const;
  /// Spec restricted to the first m marginals.
  DependentSampleSpec prefix(std::size_t m) const;
};

/// Law of a random sample size N on {1, ..., n}; pmf()[m-1] = P(N = m).
class SampleSizeLaw {
public:
  /// Throws std::invalid_argument for negative mass or a total differing from
  /// one by more than 1e-12.
  explicit SampleSizeLaw(std::vector<double> pmf);

  static SampleSizeLaw degenerate(int m);

  int max_size() const { return static_cast<int>(pmf_.size()); }
  double probability(int m) const;
  /// P(N > m).
  double exceedance(int m) const;
  const std::vector<double>& pmf() const { return pmf_; }

private:
  std::vector<double> pmf_;
};

/// p "outlier" observations with PHR parameter lambda_out and q "main"
/// observations with lambda_main, all independent with common tilt alpha.
struct MultipleOutlierSpec {
  double alpha = 1.0;
  double lambda_out = 1.0;
  double lambda_main = 1.0;
  int p = 1;
  int q = 1;
  BaselinePtr baseline;

  int n() const { return p + q; }
  void validate() const;
  std::vector<MphrMarginal> marginals() const;
};

/// Σ_i ψ(Σ_{j≠i} φ(Ḡ_j(x))) - (n-1)·ψ(Σ_i φ(Ḡ_i(x))). Equals 1 for n = 1.
double second_order_sf_dependent(const DependentSampleSpec& spec, double x);

/// Σ_i Π_{j≠i} Ḡ_j(x) - (n-1)·Π_i Ḡ_i(x) for independent observations.
double second_order_sf_independent(std::span<const MphrMarginal> marginals, double x);

/// Mixture over N of the dependent survival of the first m observations.
/// Throws std::invalid_argument when the law's support exceeds n.
double second_order_sf_random_n(const DependentSampleSpec& spec, const SampleSizeLaw& law,
                                double x);

/// Density of X_{2:n} under the copula model, from the chain rule through φ.
double second_order_density_dependent(const DependentSampleSpec& spec, double x);
double second_order_hazard_dependent(const DependentSampleSpec& spec, double x);
double second_order_hazard_random_n(const DependentSampleSpec& spec, const SampleSizeLaw& law,
                                    double x);

/// Closed-form hazard for independent observations sharing λ and the
/// baseline (heterogeneous tilts only). Evaluated in a form that stays finite
/// when F̄^λ underflows. +inf where the baseline hazard is infinite.
double second_order_hazard_independent(std::span<const MphrMarginal> marginals, double x);

/// t = -log F̄(x), the time scale in which the multiple-outlier formulas live.
double transformed_time(const BaselineModel& baseline, double x);

/// Survival of X_{2:n} for the multiple-outlier model as a function of t.
double multiple_outlier_sf_t(const MultipleOutlierSpec& spec, double t);
/// Hazard -d/dt log S(t) of X_{2:n} in the t scale.
double multiple_outlier_second_order_hazard(const MultipleOutlierSpec& spec, double t);
/// The same hazard in the original scale: hazard_t(t(x)) · r_F(x).
double multiple_outlier_hazard_x(const MultipleOutlierSpec& spec, double x);

/// P(exactly k of the n observations exceed x), k = 0..n, by inclusion-
/// exclusion over all 2^n joint exceedance probabilities. n <= 20.
std::vector<double> exceedance_count_distribution(const DependentSampleSpec& spec, double x);

struct OracleSuiteConfig {
  int n_min = 2;
  int n_max = 6;
  int trials = 200;
  std::uint64_t seed = 1;
  std::vector<std::string> generators{"independence", "example1", "example2"};
  /// Points u = (k + 1/2)/grid_points, x = -ln u.
  int grid_points = 20;
};

struct OracleSuiteResult {
  double max_deviation = 0.0;
  int evaluations = 0;
  std::string worst_case;
};

/// Random dependent specs (tilts in (0, 1], PHR parameters in (0, 3], random
/// Weibull baselines) compared against the exceedance-count oracle:
/// |second_order_sf_dependent - P(count >= n-1)| over all trials and points.
OracleSuiteResult run_oracle_suite(const OracleSuiteConfig& config);

}  // namespace ordstat
