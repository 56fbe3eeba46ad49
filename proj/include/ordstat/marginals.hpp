#pragma once

// Modified proportional hazard rate (MPHR) lifetimes: a PHR model F̄^λ pushed
// through the Marshall-Olkin tilt transform.

#include <memory>
#include <string>
#include <vector>

namespace ordstat {

/// Lifetime distribution on [0, ∞) used as the common baseline F̄.
///
/// Implementations work in log-survival space so that F̄^λ can be formed as
/// exp(λ·log F̄) without underflowing intermediate values.
class BaselineModel {
public:
  virtual ~BaselineModel() = default;

  virtual std::string family() const = 0;
  virtual std::vector<double> parameters() const = 0;

  /// log F̄(x) = -(cumulative hazard). Must be 0 at x = 0 and non-increasing.
  virtual double log_survival(double x) const = 0;

  /// r_F(x). May be +inf at x = 0 for shapes below one.
  virtual double hazard(double x) const = 0;

  /// Inverse of log_survival: the x with log F̄(x) = log_s, for log_s <= 0.
  virtual double time_at_log_survival(double log_s) const = 0;

  double survival(double x) const;
  double cdf(double x) const;
  double density(double x) const;
  /// x with F̄(x) = v for v in (0, 1]; v = 0 maps to +inf.
  double quantile_survival(double v) const;
};

using BaselinePtr = std::shared_ptr<const BaselineModel>;

/// F̄(x) = exp(-(a·x)^b), a = inverse scale, b = shape.
class WeibullBaseline final : public BaselineModel {
public:
  WeibullBaseline(double a, double b);

  std::string family() const override { return "weibull"; }
  std::vector<double> parameters() const override { return {a_, b_}; }
  double log_survival(double x) const override;
  double hazard(double x) const override;
  double time_at_log_survival(double log_s) const override;

  double a() const { return a_; }
  double b() const { return b_; }

private:
  double a_;
  double b_;
};

/// Weibull with shape one; F̄(x) = exp(-rate·x).
class ExponentialBaseline final : public BaselineModel {
public:
  explicit ExponentialBaseline(double rate);

  std::string family() const override { return "exponential"; }
  std::vector<double> parameters() const override { return {rate_}; }
  double log_survival(double x) const override;
  double hazard(double x) const override;
  double time_at_log_survival(double log_s) const override;

  double rate() const { return rate_; }

private:
  double rate_;
};

BaselinePtr make_weibull(double a, double b);
/// Same family and parameters (or the same object).
bool same_baseline(const BaselinePtr& lhs, const BaselinePtr& rhs);
BaselinePtr make_exponential(double rate);

/// One observation X ~ MPHR(alpha, lambda; F̄).
///
/// alpha > 1 is representable (the tilt family is defined on all of R+), but
/// the ordering theorems only cover alpha in (0, 1]; that restriction is left
/// to the theorem validators.
struct MphrMarginal {
  double alpha = 1.0;
  double lambda = 1.0;
  BaselinePtr baseline;

  MphrMarginal() = default;
  MphrMarginal(double alpha, double lambda, BaselinePtr baseline);

  /// Throws std::invalid_argument when alpha or lambda is not a positive
  /// finite number or the baseline is missing.
  void validate() const;
};

double mphr_cdf(const MphrMarginal& m, double x);
double mphr_sf(const MphrMarginal& m, double x);
double mphr_density(const MphrMarginal& m, double x);
double mphr_hazard(const MphrMarginal& m, double x);
/// Inverse of mphr_cdf on [0, 1).
double mphr_quantile(const MphrMarginal& m, double u);

/// Survival written in terms of v = F̄^λ(x): alpha·v / (1 - (1-alpha)·v).
double tilted_survival(double alpha, double v);

/// h(u; alpha, lambda) = (1 - u^λ) / (1 - (1-alpha)·u^λ) with u = F̄(x); the
/// MPHR cdf is h applied to the baseline survival.
double distortion_h(double u, double alpha, double lambda);

/// G(x; alpha) = F(x) / (1 - (1-alpha)·F̄(x)) expressed through F̄(x) = v.
double tilt_family1_cdf(double v, double alpha);
/// H(x; alpha) = alpha·F(x) / (1 - (1-alpha)·F(x)) expressed through F̄(x) = v.
double tilt_family2_cdf(double v, double alpha);

}  // namespace ordstat
