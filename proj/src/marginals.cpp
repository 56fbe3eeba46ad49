#include "ordstat/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ordstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void require_time(double x, const char* where) {
  if (!(x >= 0.0)) {
    throw std::domain_error(std::string(where) + ": time must be >= 0, got " + std::to_string(x));
  }
}

// v = F̄^λ(x) and 1 - v, both without cancellation.
struct PowerSurvival {
  double v;
  double one_minus_v;
};

PowerSurvival power_survival(const MphrMarginal& m, double x) {
  const double log_v = m.lambda * m.baseline->log_survival(x);
  return {std::exp(log_v), -std::expm1(log_v)};
}

}  // namespace

double BaselineModel::survival(double x) const { return std::exp(log_survival(x)); }

double BaselineModel::cdf(double x) const { return -std::expm1(log_survival(x)); }

double BaselineModel::density(double x) const {
  const double s = survival(x);
  if (s == 0.0) return 0.0;
  return hazard(x) * s;
}

double BaselineModel::quantile_survival(double v) const {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("quantile_survival: survival level must lie in [0, 1]");
  }
  if (v == 0.0) return kInf;
  return time_at_log_survival(std::log(v));
}

WeibullBaseline::WeibullBaseline(double a, double b) : a_(a), b_(b) {
  if (!positive_finite(a) || !positive_finite(b)) {
    throw std::invalid_argument("weibull baseline needs a > 0 and b > 0");
  }
}

double WeibullBaseline::log_survival(double x) const {
  require_time(x, "weibull log_survival");
  if (x == kInf) return -kInf;
  return -std::pow(a_ * x, b_);
}

double WeibullBaseline::hazard(double x) const {
  require_time(x, "weibull hazard");
  if (x == 0.0) {
    if (b_ < 1.0) return kInf;
    return b_ == 1.0 ? a_ : 0.0;
  }
  return b_ * a_ * std::pow(a_ * x, b_ - 1.0);
}

double WeibullBaseline::time_at_log_survival(double log_s) const {
  if (!(log_s <= 0.0)) throw std::domain_error("weibull inverse: log survival must be <= 0");
  return std::pow(-log_s, 1.0 / b_) / a_;
}

ExponentialBaseline::ExponentialBaseline(double rate) : rate_(rate) {
  if (!positive_finite(rate)) throw std::invalid_argument("exponential baseline needs rate > 0");
}

double ExponentialBaseline::log_survival(double x) const {
  require_time(x, "exponential log_survival");
  return -rate_ * x;
}

double ExponentialBaseline::hazard(double x) const {
  require_time(x, "exponential hazard");
  return rate_;
}

double ExponentialBaseline::time_at_log_survival(double log_s) const {
  if (!(log_s <= 0.0)) throw std::domain_error("exponential inverse: log survival must be <= 0");
  return -log_s / rate_;
}

BaselinePtr make_weibull(double a, double b) { return std::make_shared<WeibullBaseline>(a, b); }

BaselinePtr make_exponential(double rate) { return std::make_shared<ExponentialBaseline>(rate); }

bool same_baseline(const BaselinePtr& lhs, const BaselinePtr& rhs) {
  if (lhs == rhs) return true;
  if (!lhs || !rhs) return false;
  return lhs->family() == rhs->family() && lhs->parameters() == rhs->parameters();
}

MphrMarginal::MphrMarginal(double alpha_, double lambda_, BaselinePtr baseline_)
    : alpha(alpha_), lambda(lambda_), baseline(std::move(baseline_)) {
  validate();
}

void MphrMarginal::validate() const {
  if (!positive_finite(alpha)) throw std::invalid_argument("MPHR tilt alpha must be > 0");
  if (!positive_finite(lambda)) throw std::invalid_argument("MPHR parameter lambda must be > 0");
  if (!baseline) throw std::invalid_argument("MPHR marginal has no baseline");
}

double tilted_survival(double alpha, double v) {
  if (v == 0.0) return 0.0;
  // 1 - ᾱv rewritten as α + ᾱ(1 - v) so that v = 1 gives exactly 1.
  return std::min(1.0, alpha * v / (alpha + (1.0 - alpha) * (1.0 - v)));
}

double mphr_cdf(const MphrMarginal& m, double x) {
  m.validate();
  require_time(x, "mphr_cdf");
  const auto [v, one_minus_v] = power_survival(m, x);
  return one_minus_v / (m.alpha + (1.0 - m.alpha) * one_minus_v);
}

double mphr_sf(const MphrMarginal& m, double x) {
  m.validate();
  require_time(x, "mphr_sf");
  return tilted_survival(m.alpha, power_survival(m, x).v);
}

double mphr_hazard(const MphrMarginal& m, double x) {
  m.validate();
  require_time(x, "mphr_hazard");
  const double r = m.baseline->hazard(x);
  const double one_minus_v = power_survival(m, x).one_minus_v;
  return m.lambda * r / (m.alpha + (1.0 - m.alpha) * one_minus_v);
}

double mphr_density(const MphrMarginal& m, double x) {
  const double s = mphr_sf(m, x);
  if (s == 0.0) return 0.0;
  return mphr_hazard(m, x) * s;
}

double mphr_quantile(const MphrMarginal& m, double u) {
  m.validate();
  if (!(u >= 0.0 && u < 1.0)) throw std::domain_error("mphr_quantile: probability must lie in [0, 1)");
  if (u == 0.0) return 0.0;
  // Survival level s = (1-u)/(1-(1-alpha)u) solves the tilt; then F̄^λ = s.
  const double log_s = std::log1p(-u) - std::log1p(-(1.0 - m.alpha) * u);
  return m.baseline->time_at_log_survival(std::min(0.0, log_s / m.lambda));
}

double distortion_h(double u, double alpha, double lambda) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("distortion_h: u must lie in [0, 1]");
  if (!positive_finite(alpha) || !positive_finite(lambda)) {
    throw std::invalid_argument("distortion_h: alpha and lambda must be > 0");
  }
  if (u == 0.0) return 1.0;
  const double log_v = lambda * std::log(u);
  return -std::expm1(log_v) / (1.0 - (1.0 - alpha) * std::exp(log_v));
}

double tilt_family1_cdf(double v, double alpha) {
  return (1.0 - v) / (1.0 - (1.0 - alpha) * v);
}

double tilt_family2_cdf(double v, double alpha) {
  const double f = 1.0 - v;
  return alpha * f / (1.0 - (1.0 - alpha) * f);
}

}  // namespace ordstat
