#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "ccnlab/core/error.hpp"
#include "ccnlab/nn/dense_net.hpp"

namespace ccnlab::nn {

struct AdamHyper {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;  // decoupled, scaled by the learning rate
};

struct AdamState {
  Vector first_moment;
  Vector second_moment;
  long step_count = 0;
  AdamHyper hyper;

  AdamState() = default;
  AdamState(Eigen::Index size, AdamHyper h)
      : first_moment(Vector::Zero(size)), second_moment(Vector::Zero(size)), hyper(h) {}
};

/// One bias-corrected Adam update of `params` from `grads`; grads are zeroed.
inline void adam_update(Vector& params, Vector& grads, AdamState& state) {
  require(state.first_moment.size() == params.size(), "Adam state does not match parameter count");
  if (!grads.allFinite()) {
    throw Error("non-finite gradient at Adam step " + std::to_string(state.step_count + 1) +
                ": training diverged");
  }
  const auto& h = state.hyper;
  ++state.step_count;
  state.first_moment = h.beta1 * state.first_moment + (1.0 - h.beta1) * grads;
  state.second_moment =
      h.beta2 * state.second_moment + (1.0 - h.beta2) * grads.cwiseProduct(grads);
  const double c1 = 1.0 - std::pow(h.beta1, static_cast<double>(state.step_count));
  const double c2 = 1.0 - std::pow(h.beta2, static_cast<double>(state.step_count));
  if (h.weight_decay > 0.0) params *= 1.0 - h.learning_rate * h.weight_decay;
  params.array() -= h.learning_rate * (state.first_moment.array() / c1) /
                    ((state.second_moment.array() / c2).sqrt() + h.epsilon);
  grads.setZero();
}

inline void adam_step(DenseNet& net, AdamState& state) {
  adam_update(net.params(), net.grads(), state);
  net.invalidate();
}

/// Adam over a fixed set of DenseNets, each with its own moments.
class AdamGroup {
 public:
  explicit AdamGroup(AdamHyper hyper = {}) : hyper_(hyper) {}

  void attach(DenseNet& net) {
    nets_.push_back(&net);
    states_.emplace_back(net.params().size(), hyper_);
  }

  void step() {
    for (std::size_t i = 0; i < nets_.size(); ++i) adam_step(*nets_[i], states_[i]);
  }

  void zero_grad() {
    for (auto* n : nets_) n->zero_grad();
  }

  const std::vector<AdamState>& states() const { return states_; }

 private:
  AdamHyper hyper_;
  std::vector<DenseNet*> nets_;
  std::vector<AdamState> states_;
};

}  // namespace ccnlab::nn
