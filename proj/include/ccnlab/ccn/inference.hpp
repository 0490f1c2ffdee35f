#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "ccnlab/ccn/model.hpp"
#include "ccnlab/core/error.hpp"
#include "ccnlab/core/rng.hpp"

namespace ccnlab {

inline constexpr int kDefaultGridSize = 512;

/// CDF sketch on an increasing grid.
struct CdfCurve {
  std::vector<double> z_grid;
  std::vector<double> probs;

  /// Piecewise-linear interpolation, clamped to the end values outside the grid.
  double at(double z) const {
    if (z <= z_grid.front()) return probs.front();
    if (z >= z_grid.back()) return probs.back();
    const auto it = std::upper_bound(z_grid.begin(), z_grid.end(), z);
    const auto hi = static_cast<std::size_t>(it - z_grid.begin());
    const auto lo = hi - 1;
    const double w = (z - z_grid[lo]) / (z_grid[hi] - z_grid[lo]);
    return probs[lo] + w * (probs[hi] - probs[lo]);
  }
};

struct QuantileResult {
  double value = 0.0;
  bool extrapolated = false;
};

/// Least-squares projection onto non-decreasing sequences (pool adjacent violators).
inline std::vector<double> isotonic_regression(std::span<const double> values) {
  std::vector<double> level;
  std::vector<std::size_t> count;
  level.reserve(values.size());
  count.reserve(values.size());
  for (double v : values) {
    level.push_back(v);
    count.push_back(1);
    while (level.size() > 1 && level[level.size() - 2] > level.back()) {
      const auto n1 = count[count.size() - 2], n2 = count.back();
      const double merged = (level[level.size() - 2] * static_cast<double>(n1) + level.back() * static_cast<double>(n2)) /
                            static_cast<double>(n1 + n2);
      level.pop_back();
      count.pop_back();
      level.back() = merged;
      count.back() = n1 + n2;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t b = 0; b < level.size(); ++b) out.insert(out.end(), count[b], level[b]);
  return out;
}

inline std::vector<double> even_grid(double lo, double hi, int size) {
  require(size >= 2, "grid needs at least two points");
  std::vector<double> g(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (size - 1);
  return g;
}

inline std::vector<double> model_grid(const CdfModel& model, int grid_size) {
  return even_grid(model.sampler.lower(), model.sampler.upper(), grid_size);
}

/// Isotonic CDF sketches for every row of `x_rows` (n x p).
inline std::vector<CdfCurve> estimate_cdfs(const CdfModel& model, const Matrix& x_rows, int arm,
                                           int grid_size = kDefaultGridSize) {
  require_dims(model.covariate_dim(), x_rows.cols(), "estimate_cdfs covariates");
  const auto grid = model_grid(model, grid_size);
  const nn::Matrix feats = model.features(x_rows.transpose());
  const nn::Matrix raw = model.cdf_grid(arm, feats, grid);
  std::vector<CdfCurve> curves(static_cast<std::size_t>(x_rows.rows()));
  std::vector<double> row(grid.size());
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) row[j] = raw(i, static_cast<Eigen::Index>(j));
    curves[static_cast<std::size_t>(i)] = {grid, isotonic_regression(row)};
  }
  return curves;
}

inline CdfCurve estimate_cdf(const CdfModel& model, std::span<const double> x, int arm,
                             int grid_size = kDefaultGridSize) {
  require_dims(model.covariate_dim(), static_cast<long>(x.size()), "estimate_cdf covariates");
  Matrix row = Eigen::Map<const Matrix>(x.data(), 1, model.covariate_dim());
  return estimate_cdfs(model, row, arm, grid_size).front();
}

/// Bisection on the interpolated curve to 1e-6 of the grid width.
inline QuantileResult curve_quantile(const CdfCurve& curve, double q) {
  require(q > 0.0 && q < 1.0, "quantile level must lie in (0, 1)");
  if (q < curve.probs.front()) return {curve.z_grid.front(), true};
  if (q > curve.probs.back()) return {curve.z_grid.back(), true};
  double lo = curve.z_grid.front();
  double hi = curve.z_grid.back();
  const double tol = 1e-6 * (hi - lo);
  if (curve.at(lo) >= q) return {lo, false};
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (curve.at(mid) < q) lo = mid;
    else hi = mid;
  }
  return {0.5 * (lo + hi), false};
}

inline QuantileResult quantile(const CdfModel& model, std::span<const double> x, int arm, double q,
                               int grid_size = kDefaultGridSize) {
  return curve_quantile(estimate_cdf(model, x, arm, grid_size), q);
}

/// Mean of the distribution that inverse-transform sampling from `curve`
/// realizes: end masses at the grid ends, uniform density within each cell.
inline double curve_mean(const CdfCurve& curve) {
  const auto& z = curve.z_grid;
  const auto& p = curve.probs;
  double mean = p.front() * z.front() + (1.0 - p.back()) * z.back();
  for (std::size_t i = 0; i + 1 < z.size(); ++i) mean += (p[i + 1] - p[i]) * 0.5 * (z[i] + z[i + 1]);
  return mean;
}

inline std::vector<double> sample_curve(const CdfCurve& curve, int n_samples, Rng& rng) {
  require(n_samples >= 1, "need at least one sample");
  std::vector<double> out(static_cast<std::size_t>(n_samples));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& v : out) {
    double q = u(rng);
    while (q <= 0.0) q = u(rng);
    v = curve_quantile(curve, q).value;
  }
  return out;
}

inline std::vector<double> sample_outcomes(const CdfModel& model, std::span<const double> x, int arm,
                                           int n_samples, std::uint64_t seed, int grid_size = kDefaultGridSize) {
  Rng rng(derive_seed(seed, streams::kSampling, static_cast<std::uint64_t>(arm)));
  return sample_curve(estimate_cdf(model, x, arm, grid_size), n_samples, rng);
}

inline constexpr double kProbabilityFloor = 1e-12;

/// Pr[Y(arm) in (y - eps, y + eps) | x] for every row of `x_rows`.
inline std::vector<double> neighborhood_probs(const CdfModel& model, const Matrix& x_rows, int arm,
                                              std::span<const double> y, double eps) {
  require(eps > 0.0, "neighborhood radius must be positive");
  require_dims(x_rows.rows(), static_cast<long>(y.size()), "neighborhood outcomes");
  const nn::Matrix feats = model.features(x_rows.transpose());
  std::vector<double> up(y.size()), down(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    up[i] = y[i] + eps;
    down[i] = y[i] - eps;
  }
  const nn::RowVector hi = model.cdf_features(arm, feats, up);
  const nn::RowVector lo = model.cdf_features(arm, feats, down);
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    out[i] = std::max(hi(static_cast<Eigen::Index>(i)) - lo(static_cast<Eigen::Index>(i)), kProbabilityFloor);
  return out;
}

inline double neighborhood_prob(const CdfModel& model, std::span<const double> x, int arm, double y, double eps) {
  require_dims(model.covariate_dim(), static_cast<long>(x.size()), "neighborhood_prob covariates");
  Matrix row = Eigen::Map<const Matrix>(x.data(), 1, model.covariate_dim());
  const double ys[1] = {y};
  return neighborhood_probs(model, row, arm, ys, eps).front();
}

/// E[Y(arm) | x] for every row, from the isotonic sketches.
inline std::vector<double> model_means(const CdfModel& model, const Matrix& x_rows, int arm,
                                       int grid_size = kDefaultGridSize) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(x_rows.rows()));
  for (const auto& c : estimate_cdfs(model, x_rows, arm, grid_size)) out.push_back(curve_mean(c));
  return out;
}

}  // namespace ccnlab
