#include "ordstat/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ordstat {

namespace {

std::vector<double> sorted_ascending(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  return s;
}

void require_comparable(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw std::invalid_argument("order checks need non-empty vectors");
  if (x.size() != y.size()) {
    throw std::invalid_argument("order checks need vectors of equal length");
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("order checks need finite components");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument("order checks need finite components");
  }
}

// Accumulates slacks in order; the first one below tolerance is the witness.
struct SlackTracker {
  OrderVerdict verdict{true, std::nullopt, std::numeric_limits<double>::infinity()};

  void add(std::size_t index, double slack) {
    verdict.margin = std::min(verdict.margin, slack);
    if (slack < -kPartialSumTolerance && !verdict.first_violated_index) {
      verdict.first_violated_index = index;
    }
  }

  OrderVerdict finish() {
    verdict.holds = verdict.margin >= -kPartialSumTolerance;
    return verdict;
  }
};

}  // namespace

OrderVerdict majorize_check(std::span<const double> x, std::span<const double> y) {
  require_comparable(x, y);
  const auto xs = sorted_ascending(x);
  const auto ys = sorted_ascending(y);
  SlackTracker t;
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    sx += xs[j];
    sy += ys[j];
    if (j + 1 < xs.size()) t.add(j + 1, sy - sx);
  }
  t.add(xs.size(), -std::abs(sx - sy));
  return t.finish();
}

OrderVerdict weak_supermajorize_check(std::span<const double> x, std::span<const double> y) {
  require_comparable(x, y);
  const auto xs = sorted_ascending(x);
  const auto ys = sorted_ascending(y);
  SlackTracker t;
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    sx += xs[j];
    sy += ys[j];
    t.add(j + 1, sy - sx);
  }
  return t.finish();
}

OrderVerdict weak_submajorize_check(std::span<const double> x, std::span<const double> y) {
  require_comparable(x, y);
  const auto xs = sorted_ascending(x);
  const auto ys = sorted_ascending(y);
  SlackTracker t;
  double sx = 0.0;
  double sy = 0.0;
  // j runs n, n-1, ..., 1 over the tails Σ_{i>=j}
  for (std::size_t k = xs.size(); k-- > 0;) {
    sx += xs[k];
    sy += ys[k];
    t.add(k + 1, sx - sy);
  }
  return t.finish();
}

std::string to_string(Cone cone) {
  switch (cone) {
    case Cone::decreasing: return "D+";
    case Cone::increasing: return "I+";
    case Cone::both: return "both";
    case Cone::neither: return "neither";
  }
  return "neither";
}

Cone cone_membership(std::span<const double> x) {
  bool non_increasing = true;
  bool non_decreasing = true;
  for (double v : x) {
    if (!(v >= 0.0)) return Cone::neither;
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] > x[i - 1]) non_increasing = false;
    if (x[i] < x[i - 1]) non_decreasing = false;
  }
  if (non_increasing && non_decreasing) return Cone::both;
  if (non_increasing) return Cone::decreasing;
  if (non_decreasing) return Cone::increasing;
  return Cone::neither;
}

bool in_cone(Cone cone, Cone target) {
  if (target == Cone::neither) return false;
  return cone == target || cone == Cone::both;
}

OrderVerdict st_order_discrete(const SampleSizeLaw& n1, const SampleSizeLaw& n2) {
  SlackTracker t;
  const int top = std::max(n1.max_size(), n2.max_size());
  for (int m = 0; m <= top; ++m) {
    t.add(static_cast<std::size_t>(m), n1.exceedance(m) - n2.exceedance(m));
  }
  return t.finish();
}

std::pair<std::vector<double>, std::vector<double>> generate_majorized_pair(
    MajorizationKind kind, std::size_t dimension, std::mt19937_64& rng, int transfers) {
  if (dimension < 2) throw std::invalid_argument("majorized pairs need dimension >= 2");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> index(0, dimension - 1);

  std::vector<double> x(dimension);
  for (auto& v : x) v = 0.05 + 2.0 * unit(rng);

  if (transfers < 0) {
    transfers = std::uniform_int_distribution<int>(1, static_cast<int>(4 * dimension))(rng);
  }
  std::vector<double> y = x;
  for (int t = 0; t < transfers; ++t) {
    const std::size_t i = index(rng);
    const std::size_t j = index(rng);
    if (y[i] == y[j]) continue;
    const std::size_t rich = y[i] > y[j] ? i : j;
    const std::size_t poor = rich == i ? j : i;
    const double amount = unit(rng) * 0.5 * (y[rich] - y[poor]);
    y[rich] -= amount;
    y[poor] += amount;
  }

  if (kind == MajorizationKind::weak_super) {
    for (auto& v : x) v -= 0.5 * unit(rng) * v;
  } else if (kind == MajorizationKind::weak_sub) {
    for (auto& v : y) v -= 0.5 * unit(rng) * v;
  }
  return {std::move(x), std::move(y)};
}

SchurReport schur_condition_check(const VectorFunction& f, SchurPattern pattern, Cone cone,
                                  const std::vector<std::vector<double>>& points,
                                  double tolerance) {
  SchurReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const auto& z = points[idx];
    if (!in_cone(cone_membership(z), cone)) {
      ++report.points_outside_cone;
      continue;
    }
    ++report.points_checked;
    std::vector<double> partials(z.size());
    std::vector<double> probe = z;
    for (std::size_t k = 0; k < z.size(); ++k) {
      const double h = 1e-5 * std::max(1.0, std::abs(z[k]));
      probe[k] = z[k] + h;
      const double up = f(probe);
      probe[k] = z[k] - h;
      const double down = f(probe);
      probe[k] = z[k];
      partials[k] = (up - down) / (2.0 * h);
    }

    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < partials.size(); ++k) {
      const double step = partials[k] - partials[k + 1];
      switch (pattern) {
        case SchurPattern::weak_super_decreasing:
        case SchurPattern::weak_sub_decreasing:
        case SchurPattern::decreasing_in_k:
          margin = std::min(margin, step);
          break;
        case SchurPattern::increasing_in_k:
          margin = std::min(margin, -step);
          break;
      }
    }
    if (pattern == SchurPattern::weak_super_decreasing) margin = std::min(margin, -partials.front());
    if (pattern == SchurPattern::weak_sub_decreasing) margin = std::min(margin, partials.back());

    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.witness_point = idx;
      report.witness_partials = partials;
    }
  }
  if (report.points_checked == 0) report.worst_margin = 0.0;
  report.holds = report.points_checked > 0 && report.worst_margin >= -tolerance;
  return report;
}

double tilt_square_ratio(double p, double x) {
  // T(0) = 0 for every p, including p = 1 where the formula reads 0/0.
  if (x == 0.0) return 0.0;
  const double d = 1.0 - p + p * x;
  return x * x / (d * d);
}

bool tilt_square_ratio_monotone(double p, std::span<const double> grid) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("tilt_square_ratio: p must lie in (0, 1]");
  for (double x : grid) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("tilt_square_ratio: grid must lie in [0, 1]");
  }
  std::vector<double> xs(grid.begin(), grid.end());
  std::sort(xs.begin(), xs.end());
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const double prev = tilt_square_ratio(p, xs[k - 1]);
    if (tilt_square_ratio(p, xs[k]) < prev - 1e-15 * std::max(1.0, prev)) return false;
  }
  return true;
}

}  // namespace ordstat
