#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ccnlab/core/dataset.hpp"
#include "ccnlab/core/error.hpp"
#include "ccnlab/core/rng.hpp"
#include "ccnlab/fccn/heads.hpp"
#include "ccnlab/nn/adam.hpp"
#include "ccnlab/nn/dense_net.hpp"
#include "ccnlab/nn/monotone_net.hpp"

namespace ccnlab {

enum class Architecture { plain, monotone };

inline std::string to_string(Architecture a) { return a == Architecture::plain ? "plain" : "monotone"; }

inline Architecture architecture_from_string(const std::string& s) {
  if (s == "plain") return Architecture::plain;
  if (s == "monotone") return Architecture::monotone;
  throw Error("unknown architecture '" + s + "'");
}

/// A conditional-CDF network g(features, z): either a plain DenseNet on
/// [features; z] with sigmoid output, or a MonotoneNet.
class CdfNet {
 public:
  CdfNet() = default;

  static CdfNet plain(int feature_dim, int hidden_width, nn::Activation hidden = nn::Activation::relu) {
    CdfNet n;
    n.impl_ = nn::DenseNet({feature_dim + 1, hidden_width, 1}, hidden, nn::Activation::sigmoid);
    return n;
  }

  static CdfNet monotone(int feature_dim, int components, int hidden_width,
                         nn::Activation hidden = nn::Activation::relu) {
    CdfNet n;
    n.impl_ = nn::MonotoneNet(feature_dim, components, hidden_width, hidden);
    return n;
  }

  static CdfNet from_plain(nn::DenseNet net) {
    require(net.output_dim() == 1 && net.output_activation() == nn::Activation::sigmoid,
            "a plain CDF network needs a single sigmoid output");
    CdfNet n;
    n.impl_ = std::move(net);
    return n;
  }

  static CdfNet from_monotone(nn::MonotoneNet net) {
    CdfNet n;
    n.impl_ = std::move(net);
    return n;
  }

  Architecture architecture() const {
    return std::holds_alternative<nn::DenseNet>(impl_) ? Architecture::plain : Architecture::monotone;
  }

  int feature_dim() const {
    if (const auto* d = std::get_if<nn::DenseNet>(&impl_)) return d->input_dim() - 1;
    return std::get<nn::MonotoneNet>(impl_).input_dim();
  }

  nn::DenseNet& as_plain() { return std::get<nn::DenseNet>(impl_); }
  const nn::DenseNet& as_plain() const { return std::get<nn::DenseNet>(impl_); }
  nn::MonotoneNet& as_monotone() { return std::get<nn::MonotoneNet>(impl_); }
  const nn::MonotoneNet& as_monotone() const { return std::get<nn::MonotoneNet>(impl_); }

  template <typename F>
  void for_each_part(F&& f) {
    if (auto* d = std::get_if<nn::DenseNet>(&impl_)) f(*d);
    else std::get<nn::MonotoneNet>(impl_).for_each_part(f);
  }
  template <typename F>
  void for_each_part(F&& f) const {
    if (const auto* d = std::get_if<nn::DenseNet>(&impl_)) f(*d);
    else std::get<nn::MonotoneNet>(impl_).for_each_part(f);
  }

  void init_glorot(Rng& rng) {
    for_each_part([&](nn::DenseNet& n) { n.init_glorot(rng); });
  }

  /// features: d x B; z: 1 x (B * draws), already normalized.
  const nn::Matrix& forward(const nn::Matrix& features, const nn::Matrix& z, int draws) {
    if (auto* d = std::get_if<nn::DenseNet>(&impl_)) return d->forward_shared(features, z, draws);
    return std::get<nn::MonotoneNet>(impl_).forward_shared(features, z, draws);
  }

  nn::Matrix evaluate(const nn::Matrix& features, const nn::Matrix& z, int draws) const {
    if (const auto* d = std::get_if<nn::DenseNet>(&impl_)) return d->evaluate_shared(features, z, draws);
    return std::get<nn::MonotoneNet>(impl_).evaluate_shared(features, z, draws);
  }

  /// Returns d(loss)/d(features), d x B, summed over draws.
  nn::Matrix backward(const nn::Matrix& upstream) {
    if (auto* d = std::get_if<nn::DenseNet>(&impl_)) return d->backward_shared(upstream).shared;
    return std::get<nn::MonotoneNet>(impl_).backward_shared(upstream).shared;
  }

 private:
  std::variant<nn::DenseNet, nn::MonotoneNet> impl_;
};

/// Uniform search distribution for z over the padded observed-outcome range.
struct ZSampler {
  double low = 0.0;
  double high = 1.0;
  double padding_fraction = 0.1;

  ZSampler() = default;
  ZSampler(double lo, double hi, double padding) : low(lo), high(hi), padding_fraction(padding) {
    require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "z range must be finite with low < high");
    require(padding >= 0.0, "padding fraction must be non-negative");
  }

  static ZSampler from_outcomes(std::span<const double> y, double padding) {
    require(!y.empty(), "cannot build a z sampler from no outcomes");
    auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    double l = *lo, h = *hi;
    if (!(l < h)) {
      // all outcomes identical; open a unit window around the point mass
      l -= 0.5;
      h += 0.5;
    }
    return ZSampler(l, h, padding);
  }

  double pad() const { return padding_fraction * (high - low); }
  double lower() const { return low - pad(); }
  double upper() const { return high + pad(); }
  double draw(Rng& rng) const { return std::uniform_real_distribution<double>(lower(), upper())(rng); }

  /// Maps the padded range onto [-1, 1] for the network input.
  double normalize(double z) const {
    const double center = 0.5 * (lower() + upper());
    const double half = 0.5 * (upper() - lower());
    return (z - center) / half;
  }
};

/// Per-covariate affine standardization fitted on training rows.
struct Standardizer {
  nn::Vector mean;
  nn::Vector scale;

  static Standardizer identity(int dim) {
    return {nn::Vector::Zero(dim), nn::Vector::Ones(dim)};
  }

  static Standardizer fit(const Matrix& x_rows, std::span<const std::size_t> rows) {
    const auto p = x_rows.cols();
    Standardizer s{nn::Vector::Zero(p), nn::Vector::Ones(p)};
    if (rows.empty()) return s;
    for (auto r : rows) s.mean += x_rows.row(static_cast<Eigen::Index>(r)).transpose();
    s.mean /= static_cast<double>(rows.size());
    nn::Vector var = nn::Vector::Zero(p);
    for (auto r : rows)
      var += (x_rows.row(static_cast<Eigen::Index>(r)).transpose() - s.mean).cwiseAbs2();
    var /= static_cast<double>(rows.size());
    for (Eigen::Index j = 0; j < p; ++j) s.scale(j) = var(j) > 1e-12 ? std::sqrt(var(j)) : 1.0;
    return s;
  }

  /// x: p x B columns.
  nn::Matrix apply(const nn::Matrix& x) const {
    require_dims(mean.size(), x.rows(), "covariate dimension");
    return ((x.colwise() - mean).array().colwise() / scale.array()).matrix();
  }
};

/// Trained pair (g0, g1) plus everything needed to evaluate it on raw x.
struct CdfModel {
  CdfNet g0;
  CdfNet g1;
  ZSampler sampler;
  Standardizer x_norm;
  std::optional<FccnHeads> representation;
  bool use_ps = false;

  Architecture architecture_tag() const { return g0.architecture(); }
  int covariate_dim() const { return static_cast<int>(x_norm.mean.size()); }
  std::pair<double, double> z_range() const { return {sampler.low, sampler.high}; }

  const CdfNet& net(int arm) const {
    require(arm == 0 || arm == 1, "arm must be 0 or 1");
    return arm == 0 ? g0 : g1;
  }

  /// Input features of g for raw covariate columns (p x B).
  nn::Matrix features(const nn::Matrix& x_cols) const {
    nn::Matrix x = x_norm.apply(x_cols);
    if (!representation) return x;
    nn::Matrix s = representation->representation(x);
    if (use_ps) return s;
    return s.topRows(s.rows() - 1);
  }

  /// g_arm at one z per column: features d x B, z of length B (raw scale).
  nn::RowVector cdf_features(int arm, const nn::Matrix& feats, std::span<const double> z) const {
    require_dims(feats.cols(), static_cast<long>(z.size()), "cdf evaluation points");
    nn::Matrix zn(1, feats.cols());
    for (Eigen::Index i = 0; i < feats.cols(); ++i) zn(0, i) = sampler.normalize(z[static_cast<std::size_t>(i)]);
    return net(arm).evaluate(feats, zn, 1);
  }

  /// g_arm on a shared z grid for every column: returns B x grid.
  nn::Matrix cdf_grid(int arm, const nn::Matrix& feats, std::span<const double> grid) const {
    const auto k = static_cast<int>(grid.size());
    const Eigen::Index samples = feats.cols();
    nn::Matrix out(samples, k);
    constexpr Eigen::Index kChunk = 64;
    for (Eigen::Index start = 0; start < samples; start += kChunk) {
      const Eigen::Index len = std::min(kChunk, samples - start);
      nn::Matrix zn(1, len * k);
      for (Eigen::Index b = 0; b < len; ++b)
        for (int j = 0; j < k; ++j) zn(0, b * k + j) = sampler.normalize(grid[static_cast<std::size_t>(j)]);
      nn::Matrix probs = net(arm).evaluate(feats.middleCols(start, len), zn, k);
      out.middleRows(start, len) = Eigen::Map<nn::Matrix>(probs.data(), k, len).transpose();
    }
    return out;
  }

  double cdf(int arm, std::span<const double> x, double z) const {
    require_dims(covariate_dim(), static_cast<long>(x.size()), "covariate vector");
    nn::Matrix col = Eigen::Map<const nn::Matrix>(x.data(), covariate_dim(), 1);
    const double zz[1] = {z};
    return cdf_features(arm, features(col), zz)(0);
  }
};

}  // namespace ccnlab
