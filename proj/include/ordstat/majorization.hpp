#pragma once

// Majorization pre-orders on real vectors, the discrete usual stochastic order
// on sample-size laws, and numerical Schur-condition certification.

#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ordstat/orderstats.hpp"

namespace ordstat {

/// Outcome of a partial-sum order check.
struct OrderVerdict {
  bool holds = false;
  /// 1-based j of the first defining inequality that fails (n for the
  /// equal-total condition of majorization).
  std::optional<std::size_t> first_violated_index;
  /// Smallest slack over all defining inequalities; holds <=> margin >= -1e-12.
  double margin = 0.0;
};

inline constexpr double kPartialSumTolerance = 1e-12;

/// x ⪰ᵐ y: Σ_{i<=j} x_(i) <= Σ_{i<=j} y_(i) for j < n (increasing
/// arrangements) and equal totals. Throws std::invalid_argument on a length
/// mismatch or empty input.
OrderVerdict majorize_check(std::span<const double> x, std::span<const double> y);

/// x ⪰ʷ y (weak supermajorization): Σ_{i<=j} x_(i) <= Σ_{i<=j} y_(i) for all j.
OrderVerdict weak_supermajorize_check(std::span<const double> x, std::span<const double> y);

/// x weakly submajorizes y, written y ⪯_w x: Σ_{i>=j} x_(i) >= Σ_{i>=j} y_(i)
/// for all j, i.e. the sums of the largest components dominate.
OrderVerdict weak_submajorize_check(std::span<const double> x, std::span<const double> y);

enum class Cone { decreasing, increasing, both, neither };

std::string to_string(Cone cone);

/// D+ (non-increasing, non-negative), I+ (non-decreasing, non-negative),
/// both (constant) or neither.
Cone cone_membership(std::span<const double> x);

/// True when `cone` is `target` or both.
bool in_cone(Cone cone, Cone target);

/// N1 >=st N2: P(N1 > m) >= P(N2 > m) for every m.
OrderVerdict st_order_discrete(const SampleSizeLaw& n1, const SampleSizeLaw& n2);

enum class MajorizationKind { majorization, weak_super, weak_sub };

/// Random pair (x, y) with x above y in the requested order.
///
/// Starts from a random positive x and applies `transfers` Robin-Hood
/// transfers (richer to poorer, at most half the gap) to obtain y, which keeps
/// the total and can only reduce spread. For weak_super the majorizing side x
/// is then lowered by non-negative noise; for weak_sub the other side y is.
/// A negative `transfers` draws a count in [1, 4·dimension].
std::pair<std::vector<double>, std::vector<double>> generate_majorized_pair(
    MajorizationKind kind, std::size_t dimension, std::mt19937_64& rng, int transfers = -1);

enum class SchurPattern {
  /// 0 >= f_(1) >= ... >= f_(n); the ⪯ʷ criterion on D.
  weak_super_decreasing,
  /// f_(1) >= ... >= f_(n) >= 0; the ⪯_w criterion on D.
  weak_sub_decreasing,
  /// f_(k) non-decreasing in k (Schur-convex on I+).
  increasing_in_k,
  /// f_(k) non-increasing in k (Schur-concave on I+).
  decreasing_in_k,
};

struct SchurReport {
  bool holds = false;
  double worst_margin = 0.0;
  std::size_t witness_point = 0;
  std::vector<double> witness_partials;
  std::size_t points_checked = 0;
  std::size_t points_outside_cone = 0;
};

using VectorFunction = std::function<double(std::span<const double>)>;

/// Estimates the partials of f by central differences (step
/// 1e-5·max(1, |z_k|)) at every sample point lying in `cone` and checks the
/// requested sign/ordering pattern. Points outside the cone are counted and
/// skipped. Report-only: never throws for evaluable f.
SchurReport schur_condition_check(const VectorFunction& f, SchurPattern pattern, Cone cone,
                                  const std::vector<std::vector<double>>& points,
                                  double tolerance = 1e-8);

/// T(x) = x² / (1 - p + p·x)², with T(0) = 0.
double tilt_square_ratio(double p, double x);

/// Whether T is non-decreasing along the grid. Throws std::invalid_argument
/// for p outside (0, 1] or grid values outside [0, 1].
bool tilt_square_ratio_monotone(double p, std::span<const double> grid);

}  // namespace ordstat
