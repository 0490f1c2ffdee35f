#pragma once

// 1-D Wasserstein critic setups shared by the unit tests and the acceptance
// runner.

#include <functional>
#include <random>

#include "ccnlab/fccn/losses.hpp"

namespace critic_fixture {

using ccnlab::FccnConfig;
using ccnlab::FccnHeads;
using ccnlab::Rng;
using ccnlab::nn::Matrix;

// phi_W(x) = relu(x) - relu(-x) = x on one input
inline FccnHeads identity_heads(FccnConfig cfg) {
  cfg.q_w = 1;
  cfg.head_hidden = 2;
  FccnHeads h(1, cfg);
  h.phi_w.weight(0) << 1.0, -1.0;
  h.phi_w.weight(1) << 1.0, -1.0;
  return h;
}

inline Matrix uniform_row(int n, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(1, n);
  for (int i = 0; i < n; ++i) m(0, i) = u(rng);
  return m;
}

inline Matrix normal_row(int n, double mu, Rng& rng) {
  std::normal_distribution<double> d(mu, 1.0);
  Matrix m(1, n);
  for (int i = 0; i < n; ++i) m(0, i) = d(rng);
  return m;
}

/// Fresh critic, then `outer` wass_loss calls on new batches; returns the last
/// estimate.
inline double critic_estimate(FccnHeads& h, const FccnConfig& cfg, const std::function<Matrix(Rng&)>& draw0,
                              const std::function<Matrix(Rng&)>& draw1, int outer) {
  Rng rng(12);
  h.critic.init_glorot(rng);
  ccnlab::nn::AdamHyper ah;
  ah.learning_rate = cfg.critic_learning_rate;
  ccnlab::nn::AdamState state(h.critic.params().size(), ah);
  double est = 0.0;
  for (int s = 0; s < outer; ++s) est = ccnlab::wass_loss(h, state, draw0(rng), draw1(rng), cfg);
  return est;
}

}  // namespace critic_fixture
