#pragma once

// Grid-based stochastic-order dominance checks and the theorem hypothesis
// validators that gate each comparison.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ordstat/majorization.hpp"
#include "ordstat/orderstats.hpp"

namespace ordstat {

/// Evaluation points u in (0, 1], strictly increasing, with x = -ln u.
/// Curves are reported in ascending u, i.e. descending x.
class Grid {
public:
  static constexpr std::size_t kMinPoints = 50;

  /// Throws std::invalid_argument unless u is strictly increasing within
  /// (0, 1] and has at least kMinPoints entries.
  explicit Grid(std::vector<double> u);

  /// `points` evenly spaced u values from u_min to u_max inclusive.
  static Grid uniform(double u_min = 1e-3, double u_max = 1.0, std::size_t points = 1000);

  std::size_t size() const { return u_.size(); }
  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& x() const { return x_; }

private:
  std::vector<double> u_;
  std::vector<double> x_;
};

enum class StochasticOrder { st, hr, rh };

std::string to_string(StochasticOrder order);

struct CurvePoint {
  double u = 0.0;
  double x = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

inline constexpr double kStTolerance = 1e-12;
inline constexpr double kHrTolerance = 1e-10;
inline constexpr double kRatioStepTolerance = 1e-9;

struct DominanceReport {
  StochasticOrder order = StochasticOrder::st;
  bool holds = false;
  /// st: min(sf_X - sf_Y); hr: min(hr_Y - hr_X); rh: worst ratio step.
  double min_margin = 0.0;
  double witness_x = 0.0;
  std::size_t points_checked = 0;
  /// Paired evaluations (sf for st, hazards for hr, cdfs for rh) in grid order.
  std::vector<CurvePoint> curves;

  // hazard-rate order only: the survival-ratio route and its agreement.
  bool hazard_check_holds = false;
  bool ratio_monotone = false;
  double ratio_min_step = 0.0;
  double ratio_witness_x = 0.0;
  bool numerically_unstable = false;
};

using CurveFunction = std::function<double(double)>;

/// X >=st Y on the grid: sf_X(x) >= sf_Y(x) - 1e-12 everywhere.
/// Evaluation errors are rethrown as std::runtime_error naming the x.
DominanceReport check_st(const CurveFunction& sf_x, const CurveFunction& sf_y, const Grid& grid);

/// X >=hr Y on the grid excluding x = 0, by two routes: hr_X <= hr_Y + 1e-10
/// pointwise, and sf_X/sf_Y non-decreasing in x (per-step slack
/// 1e-9·max(1, ratio)). Holds only when both routes agree that it does; a
/// disagreement sets numerically_unstable.
DominanceReport check_hr(const CurveFunction& hr_x, const CurveFunction& hr_y,
                         const CurveFunction& sf_x, const CurveFunction& sf_y, const Grid& grid);

/// X <=rh Y on the grid: cdf_Y/cdf_X non-decreasing in x, using only points
/// where both cdfs are at least 1e-12.
DominanceReport check_rh(const CurveFunction& cdf_x, const CurveFunction& cdf_y, const Grid& grid);

enum class TheoremTag { none, thm1, thm2, thm3, thm4, thm5 };

std::string to_string(TheoremTag tag);
/// Parses "none", "thm1".."thm5"; std::nullopt otherwise.
std::optional<TheoremTag> parse_theorem_tag(const std::string& text);

using SampleSide = std::variant<DependentSampleSpec, MultipleOutlierSpec>;

/// Two model specifications to compare, X against Y.
struct Scenario {
  SampleSide x_side;
  SampleSide y_side;
  std::optional<SampleSizeLaw> n1;
  std::optional<SampleSizeLaw> n2;
  Grid grid = Grid::uniform();
  TheoremTag theorem = TheoremTag::none;
  /// Orders to check; empty means the theorem's conclusion (st when untagged).
  std::vector<StochasticOrder> orders;
};

struct HypothesisCheck {
  std::string name;
  bool passed = false;
  /// Non-gating checks are reported but do not affect passed().
  bool gating = true;
  std::string detail;
};

struct HypothesisReport {
  TheoremTag theorem = TheoremTag::none;
  std::vector<HypothesisCheck> checks;

  bool passed() const;
  const HypothesisCheck* find(const std::string& name) const;
};

/// Checks exactly the hypotheses of the tagged theorem, one entry per
/// condition. Never throws for a well-formed scenario; an untagged scenario
/// yields an empty, passing report.
HypothesisReport validate_theorem(const Scenario& scenario);

/// Orders implied by the scenario (explicit list or the theorem's conclusion).
std::vector<StochasticOrder> requested_orders(const Scenario& scenario);

/// Survival, hazard and cdf of the second-order statistic of one side,
/// mixing over the sample-size law when one is given.
double side_sf(const SampleSide& side, const std::optional<SampleSizeLaw>& law, double x);
double side_hazard(const SampleSide& side, const std::optional<SampleSizeLaw>& law, double x);
double side_cdf(const SampleSide& side, const std::optional<SampleSizeLaw>& law, double x);

struct ComparisonResult {
  HypothesisReport hypotheses;
  std::vector<DominanceReport> dominance;

  bool dominance_holds() const;
};

/// Validates (when tagged) and runs every requested order check.
ComparisonResult run_comparison(const Scenario& scenario);

}  // namespace ordstat
