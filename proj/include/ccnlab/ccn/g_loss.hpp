#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "ccnlab/ccn/model.hpp"
#include "ccnlab/core/error.hpp"

namespace ccnlab {

inline constexpr double kBceClamp = 1e-7;

struct BceResult {
  double loss = 0.0;
  nn::Matrix upstream;  // d(mean loss)/d(prob), same shape as the probabilities
};

/// Mean binary cross-entropy with probabilities clamped to [1e-7, 1 - 1e-7].
inline BceResult binary_cross_entropy(const nn::Matrix& probs, const nn::Matrix& targets) {
  require(probs.size() > 0, "binary cross-entropy of an empty batch");
  require(probs.rows() == targets.rows() && probs.cols() == targets.cols(), "BCE shape mismatch");
  const double n = static_cast<double>(probs.size());
  BceResult r;
  r.upstream.resize(probs.rows(), probs.cols());
  double total = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs(i), kBceClamp, 1.0 - kBceClamp);
    const double t = targets(i);
    total -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
    r.upstream(i) = (-t / p + (1.0 - t) / (1.0 - p)) / n;
  }
  r.loss = total / n;
  return r;
}

struct GLossResult {
  double loss = 0.0;
  nn::Matrix feature_grad;  // d x B
};

/// One g-loss evaluation on a batch: mean over pairs and draws of
/// BCE(1{y < z}, g(z, x)). Gradients accumulate into `g`; the gradient with
/// respect to the features is returned for an upstream representation.
///
/// `z` holds raw-scale draws laid out as column b * draws + j.
inline GLossResult g_loss_batch(CdfNet& g, const ZSampler& sampler, const nn::Matrix& features,
                                std::span<const double> y, const nn::Matrix& z, int draws) {
  require(!y.empty(), "g-loss needs at least one (x, y) pair");
  require(draws >= 1, "g-loss needs at least one z draw per pair");
  require_dims(features.cols(), static_cast<long>(y.size()), "g-loss outcomes");
  require_dims(static_cast<long>(y.size()) * draws, z.cols(), "g-loss z draws");
  nn::Matrix zn(1, z.cols());
  nn::Matrix targets(1, z.cols());
  for (std::size_t b = 0; b < y.size(); ++b) {
    require(std::isfinite(y[b]), "g-loss outcome is not finite");
    for (int j = 0; j < draws; ++j) {
      const auto c = static_cast<Eigen::Index>(b) * draws + j;
      zn(0, c) = sampler.normalize(z(0, c));
      targets(0, c) = y[b] < z(0, c) ? 1.0 : 0.0;
    }
  }
  const nn::Matrix& probs = g.forward(features, zn, draws);
  BceResult bce = binary_cross_entropy(probs, targets);
  return {bce.loss, g.backward(bce.upstream)};
}

}  // namespace ccnlab
