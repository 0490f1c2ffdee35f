#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <span>
#include <vector>

#include "ccnlab/ccn/inference.hpp"
#include "ccnlab/core/dataset.hpp"
#include "ccnlab/core/error.hpp"
#include "ccnlab/core/log.hpp"
#include "ccnlab/scenarios/oracle.hpp"

namespace ccnlab {

/// Root mean squared CATE error.
inline double pehe(std::span<const double> tau_hat, std::span<const double> tau_true) {
  require(!tau_hat.empty(), "pehe needs at least one point");
  require_dims(static_cast<long>(tau_true.size()), static_cast<long>(tau_hat.size()), "pehe inputs");
  double s = 0.0;
  for (std::size_t i = 0; i < tau_hat.size(); ++i) s += (tau_hat[i] - tau_true[i]) * (tau_hat[i] - tau_true[i]);
  return std::sqrt(s / static_cast<double>(tau_hat.size()));
}

/// Mann-Whitney AUC of contrast_hat against labels 1{contrast_true > 0};
/// tied pairs get half credit.
inline double decision_auc(std::span<const double> contrast_hat, std::span<const double> contrast_true) {
  require_dims(static_cast<long>(contrast_true.size()), static_cast<long>(contrast_hat.size()), "decision_auc inputs");
  const auto n = contrast_hat.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return contrast_hat[a] < contrast_hat[b]; });
  // midranks over tie groups
  double pos = 0.0, rank_sum = 0.0;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start;
    while (end < n && contrast_hat[order[end]] == contrast_hat[order[start]]) ++end;
    const double mid = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t k = start; k < end; ++k) {
      if (contrast_true[order[k]] > 0.0) {
        pos += 1.0;
        rank_sum += mid;
      }
    }
    start = end;
  }
  const double neg = static_cast<double>(n) - pos;
  if (pos == 0.0 || neg == 0.0) throw Error("AUC undefined: labels contain a single class");
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

/// Anything exposing Pr(Y(arm) < y | x) for a single covariate vector.
template <class S>
concept CdfSource = requires(const S& s, int arm, std::span<const double> x, double y) {
  { s.cdf(arm, x, y) } -> std::convertible_to<double>;
};

/// Treats a scenario oracle as a fitted model.
struct OracleModel {
  const ScenarioOracle* oracle;
  double cdf(int arm, std::span<const double> x, double y) const { return oracle->true_cdf(arm, x, y); }
};

namespace detail {

template <CdfSource S>
std::vector<double> source_neighborhood(const S& source, const Matrix& x_rows, int arm, std::span<const double> y,
                                        double eps) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto x = covariate_row(x_rows, i);
    out[i] = std::max(source.cdf(arm, x, y[i] + eps) - source.cdf(arm, x, y[i] - eps), kProbabilityFloor);
  }
  return out;
}

inline std::vector<double> source_neighborhood(const CdfModel& model, const Matrix& x_rows, int arm,
                                               std::span<const double> y, double eps) {
  return neighborhood_probs(model, x_rows, arm, y, eps);
}

}  // namespace detail

/// Mean over both arms and all rows of log Pr(Y(t) within eps of y_i(t) | x_i).
template <class S>
double approx_ll(const S& source, const Dataset& test, double eps) {
  require(eps > 0.0, "neighborhood radius must be positive");
  require(test.potential.has_value(), "approx_ll needs both potential outcomes");
  require(test.size() > 0, "approx_ll needs a non-empty test set");
  double total = 0.0;
  for (int arm = 0; arm < 2; ++arm) {
    const auto& y = arm == 0 ? test.potential->y0 : test.potential->y1;
    for (double p : detail::source_neighborhood(source, test.covariates, arm, y, eps)) total += std::log(p);
  }
  return total / (2.0 * static_cast<double>(test.size()));
}

/// Observed-data variant: only the factual arm of each row is scored. Not
/// comparable with approx_ll.
template <class S>
double factual_ll(const S& source, const Dataset& test, double eps) {
  require(eps > 0.0, "neighborhood radius must be positive");
  require(test.size() > 0, "factual_ll needs a non-empty test set");
  double total = 0.0;
  for (int arm = 0; arm < 2; ++arm) {
    const auto rows = test.arm_indices(arm);
    if (rows.empty()) continue;
    std::vector<double> y;
    for (auto i : rows) y.push_back(test.outcome[i]);
    const Matrix x = test.subset(rows).covariates;
    for (double p : detail::source_neighborhood(source, x, arm, y, eps)) total += std::log(p);
  }
  return total / static_cast<double>(test.size());
}

/// Width between the (1 - coverage)/2 and (1 + coverage)/2 quantiles of the
/// curve. Sets *extrapolated when either end fell outside the curve's range.
inline double curve_interval_width(const CdfCurve& curve, double coverage, bool* extrapolated = nullptr) {
  require(coverage > 0.0 && coverage < 1.0, "coverage must lie in (0, 1)");
  const auto hi = curve_quantile(curve, 0.5 * (1.0 + coverage));
  const auto lo = curve_quantile(curve, 0.5 * (1.0 - coverage));
  if (extrapolated) *extrapolated = hi.extrapolated || lo.extrapolated;
  return std::max(hi.value - lo.value, 0.0);
}

/// Central interval width at the given coverage.
inline double interval_width(const CdfModel& model, std::span<const double> x, int arm, double coverage,
                             int grid_size = kDefaultGridSize) {
  bool extrapolated = false;
  const double w = curve_interval_width(estimate_cdf(model, x, arm, grid_size), coverage, &extrapolated);
  if (extrapolated) log_warning("interval_width: quantile extrapolated beyond the CDF grid");
  return w;
}

}  // namespace ccnlab
