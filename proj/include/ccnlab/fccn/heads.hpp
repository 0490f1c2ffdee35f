#pragma once

#include <string>
#include <vector>

#include "ccnlab/core/error.hpp"
#include "ccnlab/core/rng.hpp"
#include "ccnlab/nn/dense_net.hpp"

namespace ccnlab {

/// Candidate values for the Wasserstein and assignment weights.
inline const std::vector<double>& regularization_grid() {
  static const std::vector<double> grid{5e-3, 1e-3, 5e-4, 1e-4, 5e-5, 1e-5};
  return grid;
}

enum class Representation { raw, learned };

struct FccnConfig {
  double alpha = 1e-5;  // Wass-loss weight
  double beta = 5e-3;   // Assign-loss weight
  bool wass = true;
  bool assign = true;
  bool ps = true;  // append e(phi_A(x)) to the feature space
  Representation representation = Representation::learned;
  int critic_steps = 5;
  double clip_bound = 0.01;
  double critic_learning_rate = 1e-3;
  int q_w = 25;
  int q_a = 25;
  int head_hidden = 100;
  std::vector<int> critic_hidden{100, 60};

  bool wass_active() const { return representation == Representation::learned && wass && alpha > 0.0; }
  bool assign_active() const { return representation == Representation::learned && assign && beta > 0.0; }
  bool ps_active() const { return representation == Representation::learned && ps; }
  // e is trained whenever its output is used somewhere
  bool propensity_trained() const { return assign_active() || ps_active(); }

  /// All adjustments off and features are the raw covariates: plain CCN.
  static FccnConfig disabled() {
    FccnConfig c;
    c.alpha = 0.0;
    c.beta = 0.0;
    c.wass = c.assign = c.ps = false;
    c.representation = Representation::raw;
    return c;
  }

  void validate() const {
    require(alpha >= 0.0 && beta >= 0.0, "alpha and beta must be non-negative");
    require(critic_steps >= 1, "critic_steps must be at least 1");
    require(clip_bound > 0.0, "clip_bound must be positive");
    require(critic_learning_rate > 0.0, "critic learning rate must be positive");
    require(q_w >= 1 && q_a >= 1 && head_hidden >= 1, "latent and hidden widths must be positive");
    if (representation == Representation::raw) {
      require(!(wass && alpha > 0.0) && !(assign && beta > 0.0) && !ps,
              "raw representation cannot carry Wass, Assign or PS adjustments");
    }
  }
};

/// phi_W (domain-invariant), phi_A (domain-specific), propensity head e and
/// Wasserstein critic D.
struct FccnHeads {
  nn::DenseNet phi_w;
  nn::DenseNet phi_a;
  nn::DenseNet e_head;
  nn::DenseNet critic;

  FccnHeads() = default;

  FccnHeads(int input_dim, const FccnConfig& cfg)
      : phi_w({input_dim, cfg.head_hidden, cfg.q_w}, nn::Activation::relu, nn::Activation::identity),
        phi_a({input_dim, cfg.head_hidden, cfg.q_a}, nn::Activation::relu, nn::Activation::identity),
        e_head({cfg.q_a, 1}, nn::Activation::relu, nn::Activation::sigmoid),
        critic(critic_widths(cfg), nn::Activation::relu, nn::Activation::identity) {}

  int q_w() const { return phi_w.output_dim(); }
  int q_a() const { return phi_a.output_dim(); }
  int input_dim() const { return phi_w.input_dim(); }

  void init_glorot(Rng& rng) {
    phi_w.init_glorot(rng);
    phi_a.init_glorot(rng);
    e_head.init_glorot(rng);
    critic.init_glorot(rng);
  }

  /// [phi_W(x); phi_A(x); e(phi_A(x))] for every column of x.
  nn::Matrix representation(const nn::Matrix& x) const {
    const nn::Matrix w = phi_w.evaluate(x);
    const nn::Matrix a = phi_a.evaluate(x);
    const nn::Matrix e = e_head.evaluate(a);
    nn::Matrix out(w.rows() + a.rows() + 1, x.cols());
    out << w, a, e;
    return out;
  }

 private:
  static std::vector<int> critic_widths(const FccnConfig& cfg) {
    std::vector<int> w{cfg.q_w};
    w.insert(w.end(), cfg.critic_hidden.begin(), cfg.critic_hidden.end());
    w.push_back(1);
    return w;
  }
};

/// Single-point representation S(x), length q_W + q_A + 1.
inline std::vector<double> build_representation(const FccnHeads& heads, std::span<const double> x) {
  require_dims(heads.input_dim(), static_cast<long>(x.size()), "build_representation input");
  nn::Matrix col = Eigen::Map<const nn::Matrix>(x.data(), heads.input_dim(), 1);
  nn::Matrix s = heads.representation(col);
  return {s.data(), s.data() + s.size()};
}

}  // namespace ccnlab
