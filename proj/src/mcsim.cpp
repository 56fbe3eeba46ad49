#include "ordstat/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ordstat {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream RandomStream::split(std::uint64_t seed, std::uint64_t index) {
  return RandomStream(splitmix64(splitmix64(seed) ^ splitmix64(index + 1)));
}

double RandomStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::vector<double> sample_independent_vector(std::span<const MphrMarginal> marginals, RandomStream& rng) {
  std::vector<double> out;
  out.reserve(marginals.size());
  for (const auto& m : marginals) out.push_back(mphr_quantile(m, rng.uniform()));
  return out;
}

namespace {

double second_smallest(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + 1, v.end());
  return v[1];
}

// P(T > x) for each grid x from sorted draws of T.
std::vector<double> exceedance_curve(const std::vector<double>& sorted, const Grid& grid) {
  std::vector<double> curve;
  curve.reserve(grid.size());
  const double total = static_cast<double>(sorted.size());
  for (double x : grid.x()) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
    curve.push_back(static_cast<double>(above) / total);
  }
  return curve;
}

}  // namespace

std::vector<double> empirical_second_order_sf(const std::vector<std::vector<double>>& samples,
                                              const Grid& grid) {
  if (samples.empty()) throw std::invalid_argument("empirical curve needs at least one sample");
  std::vector<double> t;
  t.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.size() < 2) throw std::invalid_argument("second-order statistic needs n >= 2");
    t.push_back(second_smallest(s));
  }
  std::sort(t.begin(), t.end());
  return exceedance_curve(t, grid);
}

std::vector<double> simulate_second_order(const SimConfig& config) {
  if (config.marginals.size() < 2) throw std::invalid_argument("second-order statistic needs n >= 2");
  if (config.replications == 0) throw std::invalid_argument("replications must be positive");
  for (const auto& m : config.marginals) m.validate();
  const unsigned workers = std::max(1u, config.workers);

  std::vector<std::vector<double>> parts(workers);
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = config.replications * w / workers;
    const std::size_t end = config.replications * (w + 1) / workers;
    threads.emplace_back([&config, &parts, w, begin, end] {
      RandomStream rng = RandomStream::split(config.seed, w);
      auto& out = parts[w];
      out.reserve(end - begin);
      for (std::size_t r = begin; r < end; ++r) {
        out.push_back(second_smallest(sample_independent_vector(config.marginals, rng)));
      }
    });
  }
  for (auto& t : threads) t.join();

  std::vector<double> all;
  all.reserve(config.replications);
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

McReport compare_to_analytic(const std::vector<double>& empirical, const std::vector<double>& analytic,
                             const Grid& grid, std::size_t replications) {
  if (empirical.size() != grid.size() || analytic.size() != grid.size()) {
    throw std::invalid_argument("curves must have one value per grid point");
  }
  McReport r;
  r.replications = replications;
  r.empirical = empirical;
  r.analytic = analytic;
  const double reps = static_cast<double>(replications);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double p = analytic[k];
    const double sigma = std::max(std::sqrt(std::max(0.0, p * (1.0 - p)) / reps), 1.0 / reps);
    const double z = std::abs(empirical[k] - p) / sigma;
    if (z > r.max_standardized_deviation) {
      r.max_standardized_deviation = z;
      r.witness_x = grid.x()[k];
    }
  }
  r.pass = r.max_standardized_deviation < kMcPassThreshold;
  return r;
}

McReport mc_vs_analytic_report(const SimConfig& config, const std::function<double(double)>& analytic) {
  auto draws = simulate_second_order(config);
  std::sort(draws.begin(), draws.end());
  std::vector<double> exact;
  exact.reserve(config.grid.size());
  for (double x : config.grid.x()) exact.push_back(analytic(x));
  McReport r = compare_to_analytic(exceedance_curve(draws, config.grid), exact, config.grid, config.replications);
  r.seed = config.seed;
  return r;
}

McReport mc_vs_analytic_report(const SimConfig& config) {
  const auto& ms = config.marginals;
  return mc_vs_analytic_report(config, [&ms](double x) { return second_order_sf_independent(ms, x); });
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("KS statistic needs a non-empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_value_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

}  // namespace ordstat
