#pragma once

#include <algorithm>
#include <span>

#include "ccnlab/ccn/g_loss.hpp"
#include "ccnlab/core/log.hpp"
#include "ccnlab/fccn/heads.hpp"
#include "ccnlab/nn/adam.hpp"

namespace ccnlab {

/// mean D(rep1) - mean D(rep0), unnormalized.
inline double critic_gap(const nn::DenseNet& critic, const nn::Matrix& rep0, const nn::Matrix& rep1) {
  return critic.evaluate(rep1).mean() - critic.evaluate(rep0).mean();
}

/// Shift and scale that map the pooled critic inputs into the unit ball.
///
/// With |bias| <= clip_bound a ReLU unit can only keep a large slope if its
/// kink sits near the origin, so a clipped critic is forced to bend inside a
/// wide support and its gap undershoots W1 (by ~35% for N(0,1) vs N(2,1)).
/// W1 is shift invariant and scales linearly, so the critic works in this
/// frame and the estimate is scaled back.
struct CriticFrame {
  nn::Vector centre;
  double scale = 0.0;  // 0: all inputs coincide

  static CriticFrame of(const nn::Matrix& rep0, const nn::Matrix& rep1) {
    CriticFrame f;
    const double n = static_cast<double>(rep0.cols() + rep1.cols());
    f.centre = (rep0.rowwise().sum() + rep1.rowwise().sum()) / n;
    for (const nn::Matrix* r : {&rep0, &rep1})
      for (Eigen::Index c = 0; c < r->cols(); ++c) f.scale = std::max(f.scale, (r->col(c) - f.centre).norm());
    return f;
  }

  nn::Matrix apply(const nn::Matrix& rep) const { return (rep.colwise() - centre) / scale; }
};

/// Largest input-gradient norm of the critic over the columns of `pts`. The
/// critic is piecewise linear, so this is its Lipschitz constant on the
/// support; lipschitz_bound() overshoots it by 2x or more at the clip bound.
inline double critic_slope(nn::DenseNet& critic, const nn::Matrix& pts) {
  critic.forward(pts);
  const nn::Matrix g = critic.backward(nn::Matrix::Ones(1, pts.cols()));
  critic.zero_grad();
  return g.colwise().norm().maxCoeff();
}

/// Critic gap over the critic's slope, in representation units. Once the
/// critic is trained this estimates W1(rep1, rep0).
inline double wass_estimate(nn::DenseNet& critic, const nn::Matrix& rep0, const nn::Matrix& rep1) {
  if (rep0.cols() == 0 || rep1.cols() == 0) return 0.0;
  const CriticFrame f = CriticFrame::of(rep0, rep1);
  if (!(f.scale > 0.0)) return 0.0;
  const nn::Matrix a0 = f.apply(rep0), a1 = f.apply(rep1);
  nn::Matrix both(a0.rows(), a0.cols() + a1.cols());
  both << a0, a1;
  const double lip = critic_slope(critic, both);
  if (!(lip > 0.0)) return 0.0;
  return f.scale * critic_gap(critic, a0, a1) / lip;
}

/// `steps` gradient-ascent steps on the critic gap in the batch frame,
/// clipping after each.
inline void train_critic(nn::DenseNet& critic, nn::AdamState& state, const nn::Matrix& rep0,
                         const nn::Matrix& rep1, int steps, double clip_bound) {
  const CriticFrame f = CriticFrame::of(rep0, rep1);
  if (!(f.scale > 0.0)) return;
  nn::Matrix both(rep0.rows(), rep0.cols() + rep1.cols());
  both << f.apply(rep0), f.apply(rep1);
  nn::Matrix up(1, both.cols());
  up.leftCols(rep0.cols()).setConstant(1.0 / static_cast<double>(rep0.cols()));
  up.rightCols(rep1.cols()).setConstant(-1.0 / static_cast<double>(rep1.cols()));
  for (int s = 0; s < steps; ++s) {
    critic.forward(both);
    critic.backward(up);
    nn::adam_step(critic, state);
    nn::clip_weights(critic, clip_bound);
  }
}

/// Wass-loss on raw covariate batches (columns are units): clips the critic,
/// runs cfg.critic_steps ascent steps, and returns the normalized estimate.
inline double wass_loss(FccnHeads& heads, nn::AdamState& critic_state, const nn::Matrix& x0,
                        const nn::Matrix& x1, const FccnConfig& cfg) {
  if (x0.cols() == 0 || x1.cols() == 0) {
    log_warning("wass_loss: empty treatment-arm batch, term skipped");
    return 0.0;
  }
  nn::clip_weights(heads.critic, cfg.clip_bound);
  const nn::Matrix rep0 = heads.phi_w.evaluate(x0);
  const nn::Matrix rep1 = heads.phi_w.evaluate(x1);
  train_critic(heads.critic, critic_state, rep0, rep1, cfg.critic_steps, cfg.clip_bound);
  return wass_estimate(heads.critic, rep0, rep1);
}

/// Treatment-label cross-entropy of e(phi_A(x)). Gradients accumulate into
/// e_head and phi_a.
inline double assign_loss(FccnHeads& heads, const nn::Matrix& x, std::span<const int> t) {
  require(x.cols() > 0, "assign_loss needs a non-empty batch");
  require_dims(x.cols(), static_cast<long>(t.size()), "assign_loss labels");
  const nn::Matrix& a = heads.phi_a.forward(x);
  const nn::Matrix& e = heads.e_head.forward(a);
  nn::Matrix labels(1, x.cols());
  for (std::size_t i = 0; i < t.size(); ++i) labels(0, static_cast<Eigen::Index>(i)) = t[i];
  BceResult bce = binary_cross_entropy(e, labels);
  heads.phi_a.backward(heads.e_head.backward(bce.upstream));
  return bce.loss;
}

}  // namespace ccnlab
