#pragma once

// Hand-built CdfModels with known answers, so inference and metric code can
// be checked without depending on training quality.

#include <cmath>
#include <functional>

#include "ccnlab/ccn/model.hpp"
#include "ccnlab/nn/adam.hpp"
#include "ccnlab/scenarios/oracle.hpp"

namespace refmodels {

using ccnlab::nn::DenseNet;
using ccnlab::nn::Matrix;
using ccnlab::nn::MonotoneNet;

/// Monotone CDF net that ignores its single covariate and matches `target`
/// on [lo, hi] (least squares on a dense grid). Only the output biases move,
/// so the hidden layers stay at zero and x has no effect.
inline ccnlab::CdfNet fit_cdf_net(const std::function<double(double)>& target, const ccnlab::ZSampler& sampler,
                                  int components = 12, int steps = 6000) {
  MonotoneNet net(1, components, 1);
  auto& w = net.weights_net();
  auto& b = net.offsets_net();
  auto& a = net.log_slopes_net();
  // start from sigmoids spread evenly across the range
  for (int j = 0; j < components; ++j) {
    const double c = -1.0 + 2.0 * (j + 0.5) / components;
    a.bias(1)(j) = std::log(8.0);
    b.bias(1)(j) = -8.0 * c;
  }
  const int k = 400;
  Matrix x = Matrix::Zero(1, 1);
  Matrix z(1, k), t(1, k);
  for (int i = 0; i < k; ++i) {
    const double raw = sampler.lower() + (sampler.upper() - sampler.lower()) * i / (k - 1);
    z(0, i) = sampler.normalize(raw);
    t(0, i) = target(raw);
  }
  ccnlab::nn::AdamHyper h;
  h.learning_rate = 0.02;
  std::vector<ccnlab::nn::AdamState> states;
  std::vector<DenseNet*> parts{&w, &b, &a};
  for (auto* p : parts) states.emplace_back(p->params().size(), h);
  for (int s = 0; s < steps; ++s) {
    if (s == steps / 2) for (auto& st : states) st.hyper.learning_rate = 0.003;
    const Matrix g = net.forward_shared(x, z, k);
    net.backward_shared(2.0 * (g - t) / k);
    for (std::size_t p = 0; p < parts.size(); ++p) {
      auto& d = *parts[p];
      const auto out_bias = d.params().size() - d.output_dim();
      d.grads().head(out_bias).setZero();
      ccnlab::nn::adam_step(d, states[p]);
    }
    net.invalidate();
  }
  return ccnlab::CdfNet::from_monotone(std::move(net));
}

inline ccnlab::CdfModel model_from(ccnlab::CdfNet g0, ccnlab::CdfNet g1, ccnlab::ZSampler sampler) {
  ccnlab::CdfModel m;
  m.g0 = std::move(g0);
  m.g1 = std::move(g1);
  m.sampler = sampler;
  m.x_norm = ccnlab::Standardizer::identity(1);
  return m;
}

/// Arms N(mu0, 1) and N(mu1, 1) on the z range [lo, hi].
inline ccnlab::CdfModel normal_model(double mu0 = 0.0, double mu1 = 0.0, double lo = -6.0, double hi = 6.0) {
  const ccnlab::ZSampler sampler(lo, hi, 0.0);
  return model_from(fit_cdf_net([mu0](double z) { return ccnlab::normal_cdf(z - mu0); }, sampler),
                    fit_cdf_net([mu1](double z) { return ccnlab::normal_cdf(z - mu1); }, sampler), sampler);
}

/// Nearly a unit step at c: one steep sigmoid component.
inline ccnlab::CdfNet step_net(double c, const ccnlab::ZSampler& sampler) {
  MonotoneNet net(1, 1, 1);
  const double slope = 1e5;
  net.log_slopes_net().bias(1)(0) = std::log(slope);
  net.offsets_net().bias(1)(0) = -slope * sampler.normalize(c);
  return ccnlab::CdfNet::from_monotone(std::move(net));
}

/// Point masses at c0 and c1.
inline ccnlab::CdfModel step_model(double c0, double c1, double lo, double hi) {
  const ccnlab::ZSampler sampler(lo, hi, 0.0);
  return model_from(step_net(c0, sampler), step_net(c1, sampler), sampler);
}

}  // namespace refmodels
