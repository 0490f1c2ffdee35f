#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <memory>
#include <span>
#include <string>

#include "ccnlab/core/dataset.hpp"
#include "ccnlab/core/error.hpp"
#include "ccnlab/core/rng.hpp"

namespace ccnlab {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
inline double logistic_fn(double v) { return 1.0 / (1.0 + std::exp(-v)); }

/// Closed-form ground truth of a synthetic scenario. Covariate vectors may be
/// longer than base_dim(); trailing (noise) coordinates are ignored.
class ScenarioOracle {
 public:
  virtual ~ScenarioOracle() = default;

  virtual std::string name() const = 0;
  virtual int base_dim() const = 0;
  /// Pr(Y(arm) < y | x)
  virtual double true_cdf(int arm, std::span<const double> x, double y) const = 0;
  virtual double true_mean(int arm, std::span<const double> x) const = 0;
  virtual double sample(int arm, std::span<const double> x, Rng& rng) const = 0;
  /// Linear index of the assignment model before propensity scaling.
  virtual double propensity_index(std::span<const double> x) const = 0;
  virtual nlohmann::json params() const = 0;
  virtual std::unique_ptr<ScenarioOracle> clone() const = 0;

  virtual double true_propensity(std::span<const double> x) const {
    return logistic_fn(propensity_scale * propensity_index(x));
  }

  /// Bisection on true_cdf after bracketing outward from the mean.
  virtual double true_quantile(int arm, std::span<const double> x, double q) const {
    require(q > 0.0 && q < 1.0, "quantile level must lie in (0, 1)");
    const double m = true_mean(arm, x);
    double step = 1.0;
    double lo = m - step, hi = m + step;
    while (true_cdf(arm, x, lo) > q) lo -= (step *= 2.0);
    step = 1.0;
    while (true_cdf(arm, x, hi) < q) hi += (step *= 2.0);
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (true_cdf(arm, x, mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  double true_cate(std::span<const double> x) const { return true_mean(1, x) - true_mean(0, x); }

  double propensity_scale = 1.0;

 protected:
  void check_dim(std::span<const double> x) const {
    if (static_cast<int>(x.size()) < base_dim()) {
      throw Error(name() + " oracle: covariate vector has " + std::to_string(x.size()) +
                  " entries, needs at least " + std::to_string(base_dim()));
    }
  }
};

/// Row i of an n x p covariate matrix as a contiguous vector.
inline std::vector<double> covariate_row(const Matrix& x, std::size_t i) {
  std::vector<double> r(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) r[static_cast<std::size_t>(j)] = x(static_cast<Eigen::Index>(i), j);
  return r;
}

/// Mean over both arms and all rows of log Pr(Y(t) in (y - eps, y + eps) | x)
/// under the generating model.
inline double true_ll_reference(const ScenarioOracle& oracle, const Dataset& data, double eps) {
  require(eps > 0.0, "neighborhood radius must be positive");
  require(data.potential.has_value(), "reference LL needs both potential outcomes");
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = covariate_row(data.covariates, i);
    for (int arm = 0; arm < 2; ++arm) {
      const double y = data.potential_outcome(arm, i);
      const double p = oracle.true_cdf(arm, x, y + eps) - oracle.true_cdf(arm, x, y - eps);
      total += std::log(std::max(p, 1e-12));
    }
  }
  return total / (2.0 * static_cast<double>(data.size()));
}

}  // namespace ccnlab
