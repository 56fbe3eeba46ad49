#include "ordstat/stochorder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ordstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double evaluate_at(const CurveFunction& f, double x, const char* what) {
  try {
    return f(x);
  } catch (const std::exception& e) {
    std::ostringstream os;
    os.precision(17);
    os << what << " failed at x = " << x << ": " << e.what();
    throw std::runtime_error(os.str());
  }
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string format_vector(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(6);
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

bool is_independence(const GeneratorPtr& g) { return g && g->name() == "independence"; }

bool same_generator(const GeneratorPtr& a, const GeneratorPtr& b) {
  if (a == b) return true;
  return a && b && a->name() == b->name() && a->params() == b->params();
}

std::vector<double> alphas(const DependentSampleSpec& s) {
  std::vector<double> v;
  for (const auto& m : s.marginals) v.push_back(m.alpha);
  return v;
}

std::vector<double> lambdas(const DependentSampleSpec& s) {
  std::vector<double> v;
  for (const auto& m : s.marginals) v.push_back(m.lambda);
  return v;
}

std::vector<double> reciprocals(std::vector<double> v) {
  for (auto& e : v) e = 1.0 / e;
  return v;
}

bool all_equal(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
}

bool all_in_unit_interval(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double e) { return e > 0.0 && e <= 1.0; });
}

HypothesisCheck make_check(std::string name, bool passed, std::string detail, bool gating = true) {
  return HypothesisCheck{std::move(name), passed, gating, std::move(detail)};
}

HypothesisCheck common_cone_check(const std::string& name, const std::vector<double>& a,
                                  const std::vector<double>& b) {
  const Cone ca = cone_membership(a);
  const Cone cb = cone_membership(b);
  std::string which;
  if (in_cone(ca, Cone::decreasing) && in_cone(cb, Cone::decreasing)) which = "D+";
  else if (in_cone(ca, Cone::increasing) && in_cone(cb, Cone::increasing)) which = "I+";
  const std::string detail = format_vector(a) + " is " + to_string(ca) + ", " + format_vector(b) +
                             " is " + to_string(cb) +
                             (which.empty() ? "; no common cone" : "; common cone " + which);
  return make_check(name, !which.empty(), detail);
}

HypothesisCheck order_check(const std::string& name, const OrderVerdict& v, const std::string& what) {
  return make_check(name, v.holds, what + ", margin " + format_number(v.margin));
}

HypothesisCheck common_baseline_check(const std::vector<const MphrMarginal*>& all) {
  bool ok = true;
  for (const auto* m : all) ok = ok && same_baseline(m->baseline, all.front()->baseline);
  return make_check("common_baseline", ok, ok ? "all observations share the baseline"
                                              : "observations use different baselines");
}

HypothesisCheck sample_size_check(const Scenario& s, std::size_t n) {
  const SampleSizeLaw n1 = s.n1.value_or(SampleSizeLaw::degenerate(static_cast<int>(n)));
  const SampleSizeLaw n2 = s.n2.value_or(SampleSizeLaw::degenerate(static_cast<int>(n)));
  return order_check("n1_st_n2", st_order_discrete(n1, n2), "N1 >=st N2");
}

HypothesisCheck log_concave_check(const ArchimedeanGenerator& g) {
  const auto grid = default_generator_grid(g);
  const auto lc = check_log_concavity(g, grid);
  return make_check("psi_log_concave", lc.holds,
                    "worst (log psi)' step " + format_number(lc.worst_margin) + " at x = " +
                        format_number(lc.witness_x));
}

HypothesisCheck generator_dimension_check(const ArchimedeanGenerator& g, std::size_t n) {
  const auto grid = default_generator_grid(g);
  const auto diag = validate_generator(g, static_cast<int>(n), grid);
  return make_check("generator_n_monotone", diag.psi_conditions_hold,
                    "alternating derivative signs hold through order " +
                        std::to_string(diag.d_monotone_up_to) + " of " + std::to_string(n),
                    /*gating=*/false);
}

void validate_dependent_theorem(const Scenario& s, HypothesisReport& r) {
  const auto* xs = std::get_if<DependentSampleSpec>(&s.x_side);
  const auto* ys = std::get_if<DependentSampleSpec>(&s.y_side);
  if (!xs || !ys) {
    r.checks.push_back(make_check("dependent_sides", false, "both sides must be MPHR samples"));
    return;
  }
  const bool same_n = xs->size() == ys->size() && xs->size() > 0;
  r.checks.push_back(make_check("equal_sample_sizes", same_n,
                                std::to_string(xs->size()) + " vs " + std::to_string(ys->size())));
  if (!same_n) return;

  std::vector<const MphrMarginal*> all;
  for (const auto& m : xs->marginals) all.push_back(&m);
  for (const auto& m : ys->marginals) all.push_back(&m);
  r.checks.push_back(common_baseline_check(all));

  if (r.theorem == TheoremTag::thm3) {
    const bool indep = is_independence(xs->generator) && is_independence(ys->generator);
    r.checks.push_back(make_check("independent_observations", indep,
                                  "generators " + xs->generator->name() + " / " +
                                      ys->generator->name()));
    r.checks.push_back(make_check("fixed_sample_size", !s.n1 && !s.n2,
                                  (!s.n1 && !s.n2) ? "no sample-size laws"
                                                   : "random sample sizes are not covered"));
  } else {
    r.checks.push_back(make_check("common_generator", same_generator(xs->generator, ys->generator),
                                  xs->generator->name() + " / " + ys->generator->name()));
  }

  if (r.theorem == TheoremTag::thm1) {
    auto a = alphas(*xs);
    const auto b = alphas(*ys);
    a.insert(a.end(), b.begin(), b.end());
    const bool common_alpha = all_equal(a) && all_in_unit_interval(a);
    r.checks.push_back(make_check("common_alpha_in_unit_interval", common_alpha,
                                  "tilts " + format_vector(a)));
    const auto lx = lambdas(*xs);
    const auto ly = lambdas(*ys);
    r.checks.push_back(common_cone_check("lambda_mu_common_cone", lx, ly));
    r.checks.push_back(order_check("lambda_weakly_supermajorizes_mu",
                                   weak_supermajorize_check(lx, ly),
                                   format_vector(lx) + " >=w " + format_vector(ly)));
  } else {
    auto l = lambdas(*xs);
    const auto lb = lambdas(*ys);
    l.insert(l.end(), lb.begin(), lb.end());
    r.checks.push_back(make_check("common_lambda", all_equal(l), "PHR parameters " + format_vector(l)));
    const auto ax = alphas(*xs);
    const auto ay = alphas(*ys);
    r.checks.push_back(make_check("alpha_beta_in_unit_interval",
                                  all_in_unit_interval(ax) && all_in_unit_interval(ay),
                                  format_vector(ax) + ", " + format_vector(ay)));
    r.checks.push_back(common_cone_check("alpha_beta_common_cone", ax, ay));
    if (!all_in_unit_interval(ax) || !all_in_unit_interval(ay)) return;
    const auto inv_x = reciprocals(ax);
    const auto inv_y = reciprocals(ay);
    if (r.theorem == TheoremTag::thm2) {
      r.checks.push_back(order_check("inverse_alpha_weakly_supermajorizes",
                                     weak_supermajorize_check(inv_x, inv_y),
                                     format_vector(inv_x) + " >=w " + format_vector(inv_y)));
    } else {
      r.checks.push_back(order_check("inverse_alpha_majorizes", majorize_check(inv_x, inv_y),
                                     format_vector(inv_x) + " >=m " + format_vector(inv_y)));
    }
  }

  if (r.theorem == TheoremTag::thm1 || r.theorem == TheoremTag::thm2) {
    r.checks.push_back(sample_size_check(s, xs->size()));
    r.checks.push_back(log_concave_check(*xs->generator));
    r.checks.push_back(generator_dimension_check(*xs->generator, xs->size()));
  }
}

void validate_outlier_theorem(const Scenario& s, HypothesisReport& r) {
  const auto* xs = std::get_if<MultipleOutlierSpec>(&s.x_side);
  const auto* ys = std::get_if<MultipleOutlierSpec>(&s.y_side);
  if (!xs || !ys) {
    r.checks.push_back(make_check("multiple_outlier_sides", false,
                                  "both sides must be multiple-outlier samples"));
    return;
  }
  r.checks.push_back(make_check("common_alpha_in_unit_interval",
                                xs->alpha == ys->alpha && xs->alpha > 0.0 && xs->alpha <= 1.0,
                                format_number(xs->alpha) + " / " + format_number(ys->alpha)));
  r.checks.push_back(make_check("common_baseline", same_baseline(xs->baseline, ys->baseline),
                                "baseline " + (xs->baseline ? xs->baseline->family() : "?")));
  r.checks.push_back(make_check("fixed_sample_size", !s.n1 && !s.n2,
                                (!s.n1 && !s.n2) ? "no sample-size laws"
                                                 : "random sample sizes are not covered"));

  if (r.theorem == TheoremTag::thm4) {
    r.checks.push_back(make_check("same_block_sizes", xs->p == ys->p && xs->q == ys->q,
                                  "(" + std::to_string(xs->p) + "," + std::to_string(xs->q) + ") vs (" +
                                      std::to_string(ys->p) + "," + std::to_string(ys->q) + ")"));
    r.checks.push_back(make_check("common_main_lambda", xs->lambda_main == ys->lambda_main,
                                  format_number(xs->lambda_main) + " / " +
                                      format_number(ys->lambda_main)));
    const double lambda = xs->lambda_main;
    const double l1 = xs->lambda_out;
    const double l2 = ys->lambda_out;
    r.checks.push_back(make_check("lambda_chain", lambda >= l2 && l2 >= l1,
                                  "lambda " + format_number(lambda) + " >= lambda2 " +
                                      format_number(l2) + " >= lambda1 " + format_number(l1)));
    return;
  }

  // thm5
  r.checks.push_back(make_check("common_lambdas",
                                xs->lambda_out == ys->lambda_out && xs->lambda_main == ys->lambda_main,
                                "(" + format_number(xs->lambda_out) + "," +
                                    format_number(xs->lambda_main) + ") vs (" +
                                    format_number(ys->lambda_out) + "," +
                                    format_number(ys->lambda_main) + ")"));
  r.checks.push_back(make_check("lambda1_le_lambda2", xs->lambda_out <= xs->lambda_main,
                                format_number(xs->lambda_out) + " <= " +
                                    format_number(xs->lambda_main)));
  const bool chain = ys->p <= xs->p && xs->p <= xs->q && xs->q <= ys->q;
  r.checks.push_back(make_check("block_size_chain", chain,
                                "p* " + std::to_string(ys->p) + " <= p " + std::to_string(xs->p) +
                                    " <= q " + std::to_string(xs->q) + " <= q* " +
                                    std::to_string(ys->q)));
  const std::vector<double> pq{static_cast<double>(xs->p), static_cast<double>(xs->q)};
  const std::vector<double> pq_star{static_cast<double>(ys->p), static_cast<double>(ys->q)};
  r.checks.push_back(order_check("pq_weakly_submajorized", weak_submajorize_check(pq_star, pq),
                                 "(p,q) <=_w (p*,q*)"));
}

bool shares_lambda_and_baseline(const DependentSampleSpec& s) {
  const auto& f = s.marginals.front();
  return std::all_of(s.marginals.begin(), s.marginals.end(), [&](const MphrMarginal& m) {
    return m.lambda == f.lambda && same_baseline(m.baseline, f.baseline);
  });
}

}  // namespace

Grid::Grid(std::vector<double> u) : u_(std::move(u)) {
  if (u_.size() < kMinPoints) {
    throw std::invalid_argument("grid needs at least " + std::to_string(kMinPoints) + " points");
  }
  for (std::size_t k = 0; k < u_.size(); ++k) {
    if (!(u_[k] > 0.0 && u_[k] <= 1.0)) throw std::invalid_argument("grid u values must lie in (0, 1]");
    if (k > 0 && !(u_[k] > u_[k - 1])) throw std::invalid_argument("grid u values must increase strictly");
  }
  x_.reserve(u_.size());
  for (double v : u_) x_.push_back(v == 1.0 ? 0.0 : -std::log(v));
}

Grid Grid::uniform(double u_min, double u_max, std::size_t points) {
  if (!(u_min > 0.0 && u_min < u_max && u_max <= 1.0)) {
    throw std::invalid_argument("grid needs 0 < u_min < u_max <= 1");
  }
  if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
  std::vector<double> u(points);
  const double step = (u_max - u_min) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) u[k] = u_min + step * static_cast<double>(k);
  u.back() = u_max;
  return Grid(std::move(u));
}

std::string to_string(StochasticOrder order) {
  switch (order) {
    case StochasticOrder::st: return "st";
    case StochasticOrder::hr: return "hr";
    case StochasticOrder::rh: return "rh";
  }
  return "st";
}

DominanceReport check_st(const CurveFunction& sf_x, const CurveFunction& sf_y, const Grid& grid) {
  DominanceReport r;
  r.order = StochasticOrder::st;
  r.min_margin = kInf;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double x = grid.x()[k];
    const double a = evaluate_at(sf_x, x, "survival of X");
    const double b = evaluate_at(sf_y, x, "survival of Y");
    r.curves.push_back({grid.u()[k], x, a, b});
    ++r.points_checked;
    if (a - b < r.min_margin) {
      r.min_margin = a - b;
      r.witness_x = x;
    }
  }
  r.holds = r.min_margin >= -kStTolerance;
  return r;
}

DominanceReport check_hr(const CurveFunction& hr_x, const CurveFunction& hr_y,
                         const CurveFunction& sf_x, const CurveFunction& sf_y, const Grid& grid) {
  DominanceReport r;
  r.order = StochasticOrder::hr;
  r.min_margin = kInf;
  r.ratio_min_step = kInf;

  // Ratio monotonicity runs in ascending x, i.e. descending grid index.
  double prev_ratio = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = grid.size(); k-- > 0;) {
    const double x = grid.x()[k];
    if (x <= 0.0) continue;
    const double a = evaluate_at(hr_x, x, "hazard of X");
    const double b = evaluate_at(hr_y, x, "hazard of Y");
    r.curves.push_back({grid.u()[k], x, a, b});
    ++r.points_checked;
    const double margin = b - a;
    if (margin < r.min_margin) {
      r.min_margin = margin;
      r.witness_x = x;
    }
    const double sa = evaluate_at(sf_x, x, "survival of X");
    const double sb = evaluate_at(sf_y, x, "survival of Y");
    if (sb <= ArchimedeanGenerator::kZeroSurvival) continue;
    const double ratio = sa / sb;
    if (!std::isnan(prev_ratio)) {
      const double step = (ratio - prev_ratio) / std::max(1.0, std::abs(prev_ratio));
      if (step < r.ratio_min_step) {
        r.ratio_min_step = step;
        r.ratio_witness_x = x;
      }
    }
    prev_ratio = ratio;
  }
  std::reverse(r.curves.begin(), r.curves.end());
  if (r.points_checked == 0) r.min_margin = 0.0;
  if (r.ratio_min_step == kInf) r.ratio_min_step = 0.0;
  r.hazard_check_holds = r.min_margin >= -kHrTolerance;
  r.ratio_monotone = r.ratio_min_step >= -kRatioStepTolerance;
  r.numerically_unstable = r.hazard_check_holds != r.ratio_monotone;
  r.holds = r.hazard_check_holds && r.ratio_monotone;
  return r;
}

DominanceReport check_rh(const CurveFunction& cdf_x, const CurveFunction& cdf_y, const Grid& grid) {
  DominanceReport r;
  r.order = StochasticOrder::rh;
  r.min_margin = kInf;
  double prev_ratio = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = grid.size(); k-- > 0;) {
    const double x = grid.x()[k];
    const double a = evaluate_at(cdf_x, x, "cdf of X");
    const double b = evaluate_at(cdf_y, x, "cdf of Y");
    if (a < 1e-12 || b < 1e-12) continue;
    r.curves.push_back({grid.u()[k], x, a, b});
    ++r.points_checked;
    const double ratio = b / a;
    if (!std::isnan(prev_ratio)) {
      const double step = (ratio - prev_ratio) / std::max(1.0, std::abs(prev_ratio));
      if (step < r.min_margin) {
        r.min_margin = step;
        r.witness_x = x;
      }
    }
    prev_ratio = ratio;
  }
  std::reverse(r.curves.begin(), r.curves.end());
  if (r.min_margin == kInf) r.min_margin = 0.0;
  r.holds = r.min_margin >= -kRatioStepTolerance;
  return r;
}

std::string to_string(TheoremTag tag) {
  switch (tag) {
    case TheoremTag::none: return "none";
    case TheoremTag::thm1: return "thm1";
    case TheoremTag::thm2: return "thm2";
    case TheoremTag::thm3: return "thm3";
    case TheoremTag::thm4: return "thm4";
    case TheoremTag::thm5: return "thm5";
  }
  return "none";
}

std::optional<TheoremTag> parse_theorem_tag(const std::string& text) {
  for (auto tag : {TheoremTag::none, TheoremTag::thm1, TheoremTag::thm2, TheoremTag::thm3,
                   TheoremTag::thm4, TheoremTag::thm5}) {
    if (to_string(tag) == text) return tag;
  }
  return std::nullopt;
}

bool HypothesisReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const HypothesisCheck& c) { return c.passed || !c.gating; });
}

const HypothesisCheck* HypothesisReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

HypothesisReport validate_theorem(const Scenario& scenario) {
  HypothesisReport r;
  r.theorem = scenario.theorem;
  switch (scenario.theorem) {
    case TheoremTag::none:
      break;
    case TheoremTag::thm1:
    case TheoremTag::thm2:
    case TheoremTag::thm3:
      validate_dependent_theorem(scenario, r);
      break;
    case TheoremTag::thm4:
    case TheoremTag::thm5:
      validate_outlier_theorem(scenario, r);
      break;
  }
  return r;
}

std::vector<StochasticOrder> requested_orders(const Scenario& scenario) {
  if (!scenario.orders.empty()) return scenario.orders;
  switch (scenario.theorem) {
    case TheoremTag::thm3:
    case TheoremTag::thm4:
    case TheoremTag::thm5:
      return {StochasticOrder::hr};
    default:
      return {StochasticOrder::st};
  }
}

double side_sf(const SampleSide& side, const std::optional<SampleSizeLaw>& law, double x) {
  if (const auto* mo = std::get_if<MultipleOutlierSpec>(&side)) {
    if (law) throw std::invalid_argument("sample-size laws apply only to MPHR sample sides");
    return multiple_outlier_sf_t(*mo, transformed_time(*mo->baseline, x));
  }
  const auto& dep = std::get<DependentSampleSpec>(side);
  if (law) return second_order_sf_random_n(dep, *law, x);
  if (is_independence(dep.generator)) return second_order_sf_independent(dep.marginals, x);
  return second_order_sf_dependent(dep, x);
}

double side_hazard(const SampleSide& side, const std::optional<SampleSizeLaw>& law, double x) {
  if (const auto* mo = std::get_if<MultipleOutlierSpec>(&side)) {
    if (law) throw std::invalid_argument("sample-size laws apply only to MPHR sample sides");
    return multiple_outlier_hazard_x(*mo, x);
  }
  const auto& dep = std::get<DependentSampleSpec>(side);
  if (law) return second_order_hazard_random_n(dep, *law, x);
  if (is_independence(dep.generator) && shares_lambda_and_baseline(dep)) {
    return second_order_hazard_independent(dep.marginals, x);
  }
  return second_order_hazard_dependent(dep, x);
}

double side_cdf(const SampleSide& side, const std::optional<SampleSizeLaw>& law, double x) {
  return 1.0 - side_sf(side, law, x);
}

bool ComparisonResult::dominance_holds() const {
  return std::all_of(dominance.begin(), dominance.end(),
                     [](const DominanceReport& d) { return d.holds; });
}

ComparisonResult run_comparison(const Scenario& s) {
  ComparisonResult result;
  result.hypotheses = validate_theorem(s);
  auto sf_x = [&s](double x) { return side_sf(s.x_side, s.n1, x); };
  auto sf_y = [&s](double x) { return side_sf(s.y_side, s.n2, x); };
  for (auto order : requested_orders(s)) {
    switch (order) {
      case StochasticOrder::st:
        result.dominance.push_back(check_st(sf_x, sf_y, s.grid));
        break;
      case StochasticOrder::hr:
        result.dominance.push_back(check_hr([&s](double x) { return side_hazard(s.x_side, s.n1, x); },
                                            [&s](double x) { return side_hazard(s.y_side, s.n2, x); },
                                            sf_x, sf_y, s.grid));
        break;
      case StochasticOrder::rh:
        result.dominance.push_back(check_rh([&s](double x) { return side_cdf(s.x_side, s.n1, x); },
                                            [&s](double x) { return side_cdf(s.y_side, s.n2, x); },
                                            s.grid));
        break;
    }
  }
  return result;
}

}  // namespace ordstat
