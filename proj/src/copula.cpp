#include "ordstat/copula.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ordstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dimension claimed for the two exotic generators. Their actual d-monotonicity
// depends on θ and is audited by validate_generator.
constexpr int kExampleGeneratorDimension = 20;

double binomial(int n, int k) {
  double c = 1.0;
  for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
  return c;
}

// (-1)^k Δ_h^k f(x) with forward differences; sign-exact for k-monotone f.
double signed_forward_difference(const std::function<double(double)>& f, double x, double h,
                                 int k) {
  double acc = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binomial(k, j) * f(x + j * h);
  }
  return (k % 2 == 0) ? acc : -acc;
}

}  // namespace

ArchimedeanGenerator::ArchimedeanGenerator(std::string name, std::vector<double> params,
                                           Function psi, Function phi, Function psi_prime,
                                           int max_dimension)
    : name_(std::move(name)),
      params_(std::move(params)),
      psi_(std::move(psi)),
      phi_(std::move(phi)),
      psi_prime_(std::move(psi_prime)),
      max_dimension_(max_dimension) {
  if (!psi_) throw std::invalid_argument("generator '" + name_ + "' has no psi");
  if (max_dimension_ < 1) throw std::invalid_argument("generator dimension must be >= 1");
}

double ArchimedeanGenerator::psi(double x) const {
  if (x == kInf) return 0.0;
  if (!(x >= 0.0)) throw std::domain_error("psi: argument must be >= 0");
  return psi_(x);
}

double ArchimedeanGenerator::phi(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("phi: argument must lie in [0, 1]");
  if (u <= kZeroSurvival) return kInf;
  if (u == 1.0) return 0.0;
  return phi_ ? phi_(u) : phi_by_bisection(u);
}

double ArchimedeanGenerator::psi_prime(double x) const {
  if (x == kInf) return 0.0;
  if (!(x >= 0.0)) throw std::domain_error("psi_prime: argument must be >= 0");
  if (psi_prime_) return psi_prime_(x);
  const double h = std::max(1e-6, 1e-6 * x);
  if (x < h) {
    // second-order one-sided difference; ψ need not extend below 0
    return (-3.0 * psi_(x) + 4.0 * psi_(x + h) - psi_(x + 2.0 * h)) / (2.0 * h);
  }
  return (psi_(x + h) - psi_(x - h)) / (2.0 * h);
}

double ArchimedeanGenerator::phi_by_bisection(double u) const {
  double lo = 0.0;
  double hi = 1.0;
  while (psi_(hi) > u) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return kInf;
  }
  for (int it = 0; it < 4000 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (psi_(mid) > u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

GeneratorPtr independence_generator() {
  return std::make_shared<ArchimedeanGenerator>(
      "independence", std::vector<double>{}, [](double x) { return std::exp(-x); },
      [](double u) { return -std::log(u); }, [](double x) { return -std::exp(-x); },
      ArchimedeanGenerator::kUnboundedDimension);
}

GeneratorPtr builtin_generator(const std::string& name, const std::vector<double>& params) {
  auto theta_param = [&](const char* range_note) {
    if (params.size() != 1) {
      throw std::invalid_argument("generator '" + name + "' takes exactly one parameter theta");
    }
    const double theta = params[0];
    if (!std::isfinite(theta)) throw std::invalid_argument(std::string("theta ") + range_note);
    return theta;
  };

  if (name == "independence") {
    if (!params.empty()) throw std::invalid_argument("independence generator takes no parameters");
    return independence_generator();
  }
  if (name == "example1") {
    const double theta = theta_param("must satisfy 0 < theta <= 1");
    if (!(theta > 0.0 && theta <= 1.0)) {
      throw std::invalid_argument("example1 generator needs 0 < theta <= 1");
    }
    auto psi = [theta](double x) { return std::exp(-std::expm1(x) / theta); };
    return std::make_shared<ArchimedeanGenerator>(
        name, params, psi, [theta](double u) { return std::log1p(-theta * std::log(u)); },
        [theta, psi](double x) {
          const double p = psi(x);
          return p == 0.0 ? 0.0 : -std::exp(x) / theta * p;
        },
        kExampleGeneratorDimension);
  }
  if (name == "example2") {
    const double theta = theta_param("must be > 0");
    if (!(theta > 0.0)) throw std::invalid_argument("example2 generator needs theta > 0");
    auto psi = [theta](double x) { return std::exp(1.0 - std::pow(1.0 + x, theta)); };
    return std::make_shared<ArchimedeanGenerator>(
        name, params, psi,
        [theta](double u) { return std::expm1(std::log1p(-std::log(u)) / theta); },
        [theta, psi](double x) {
          const double p = psi(x);
          return p == 0.0 ? 0.0 : -theta * std::pow(1.0 + x, theta - 1.0) * p;
        },
        kExampleGeneratorDimension);
  }
  if (name == "clayton") {
    const double theta = theta_param("must be > 0");
    if (!(theta > 0.0)) throw std::invalid_argument("clayton generator needs theta > 0");
    return std::make_shared<ArchimedeanGenerator>(
        name, params, [theta](double x) { return std::exp(-std::log1p(x) / theta); },
        [theta](double u) { return std::expm1(-theta * std::log(u)); },
        [theta](double x) { return -std::exp(-(1.0 / theta + 1.0) * std::log1p(x)) / theta; },
        ArchimedeanGenerator::kUnboundedDimension);
  }
  throw std::invalid_argument("unknown generator '" + name + "'");
}

std::vector<double> default_generator_grid(const ArchimedeanGenerator& g, int points) {
  if (points < 2) throw std::invalid_argument("generator grid needs at least 2 points");
  double x_max = g.phi(1e-6);
  if (!std::isfinite(x_max) || x_max <= 0.0) x_max = 1.0;
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) grid[k] = x_max * (k + 1) / points;
  return grid;
}

LogConcavityResult check_log_concavity(const ArchimedeanGenerator& g, std::span<const double> grid) {
  LogConcavityResult result;
  result.worst_margin = kInf;
  double prev = 0.0;
  bool have_prev = false;
  for (double x : grid) {
    const double p = g.psi(x);
    if (p <= 0.0) break;
    const double slope = g.psi_prime(x) / p;
    if (have_prev) {
      const double margin = prev - slope;
      if (margin < result.worst_margin) {
        result.worst_margin = margin;
        result.witness_x = x;
      }
    }
    prev = slope;
    have_prev = true;
  }
  if (result.worst_margin == kInf) result.worst_margin = 0.0;
  result.holds = result.worst_margin >= -1e-9;
  return result;
}

GeneratorDiagnostics validate_generator(const ArchimedeanGenerator& g, int dimension,
                                        std::span<const double> grid) {
  GeneratorDiagnostics d;
  d.dimension = dimension;
  d.grid.assign(grid.begin(), grid.end());
  if (grid.size() < 2) return d;

  const double spacing = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  const double h = 0.5 * std::max(spacing, 1e-8);
  const auto psi = [&g](double x) { return g.psi(x); };

  // Orders 1 and 2 are structural and checked tightly; higher orders only
  // loosely because repeated differencing amplifies rounding.
  auto tolerance_for = [](int k) { return k <= 2 ? 1e-9 : 1e-4; };

  const int max_order = std::max(2, dimension);
  int highest_ok = -1;
  bool chain_intact = true;
  for (int k = 0; k <= max_order; ++k) {
    std::vector<double> values;
    values.reserve(grid.size());
    double scale = 0.0;
    for (double x : grid) {
      values.push_back(signed_forward_difference(psi, x, h, k));
      scale = std::max(scale, std::abs(values.back()));
    }
    double worst = 0.0;
    if (scale > 0.0) {
      worst = kInf;
      for (double v : values) worst = std::min(worst, v / scale);
    }
    d.worst_margins["psi_order_" + std::to_string(k)] = worst;
    const bool ok = worst >= -tolerance_for(k);
    if (k == 1) d.is_decreasing = ok;
    if (k == 2) d.is_convex = ok;
    if (chain_intact && ok && k <= dimension) highest_ok = k;
    if (!ok) chain_intact = false;
  }
  d.d_monotone_up_to = std::max(0, highest_ok);
  d.psi_conditions_hold = highest_ok >= dimension;

  // Literal reading on φ: (-1)^k φ^(k) >= 0 for k <= n-2, and (-1)^{n-2} φ^(n-2)
  // decreasing and convex, i.e. the same alternating pattern through order n.
  const auto phi = [&g](double u) { return g.phi(u); };
  bool phi_ok = true;
  for (int k = 0; k <= max_order; ++k) {
    double worst = kInf;
    double scale = 0.0;
    std::vector<double> values;
    for (double u = 1e-6; u * (1.0 + 0.01 * k) <= 1.0; u *= 1.05) {
      values.push_back(signed_forward_difference(phi, u, 0.01 * u, k));
      scale = std::max(scale, std::abs(values.back()));
    }
    if (scale == 0.0) {
      worst = 0.0;
    } else {
      for (double v : values) worst = std::min(worst, v / scale);
    }
    d.worst_margins["phi_order_" + std::to_string(k)] = worst;
    if (worst < -tolerance_for(k)) phi_ok = false;
  }
  d.phi_conditions_hold = phi_ok;

  const auto lc = check_log_concavity(g, grid);
  d.is_log_concave = lc.holds;
  d.worst_margins["log_concavity"] = lc.worst_margin;
  return d;
}

double survival_copula_eval(const ArchimedeanGenerator& g, std::span<const double> u) {
  if (u.size() > static_cast<std::size_t>(g.max_dimension())) {
    throw std::invalid_argument("survival copula: dimension " + std::to_string(u.size()) +
                                " exceeds generator limit " + std::to_string(g.max_dimension()));
  }
  double total = 0.0;
  bool zero = false;
  for (double ui : u) {
    if (!(ui >= 0.0 && ui <= 1.0)) {
      throw std::domain_error("survival copula: component outside [0, 1]");
    }
    if (ui <= ArchimedeanGenerator::kZeroSurvival) zero = true;
    else total += g.phi(ui);
  }
  if (zero) return 0.0;
  return g.psi(total);
}

}  // namespace ordstat
