#pragma once

// Central finite differences against analytic gradients. Shared by the unit
// tests and the acceptance runner.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <type_traits>
#include <vector>

#include "ccnlab/ccn/model.hpp"
#include "ccnlab/nn/dense_net.hpp"
#include "ccnlab/nn/monotone_net.hpp"

namespace gradcheck {

using ccnlab::nn::Matrix;
using ccnlab::nn::Vector;

inline constexpr double kStep = 1e-6;
// below this magnitude both values are treated as zero-ish and compared absolutely
inline constexpr double kFloor = 1e-6;

inline double rel_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), kFloor});
}

/// Worst relative error over every coordinate of `x`; `loss` is re-evaluated
/// after each perturbation.
inline double worst_error(Eigen::Ref<Vector> x, const Vector& analytic, const std::function<double()>& loss) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double saved = x(i);
    x(i) = saved + kStep;
    const double up = loss();
    x(i) = saved - kStep;
    const double down = loss();
    x(i) = saved;
    worst = std::max(worst, rel_error(analytic(i), (up - down) / (2.0 * kStep)));
  }
  return worst;
}

inline Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> n(0.0, sd);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = n(rng);
  return m;
}

struct Errors {
  double params = 0.0;
  double inputs = 0.0;
  double worst() const { return std::max(params, inputs); }
};

/// loss = sum(out .* upstream) for a plain forward pass on `in`.
inline Errors check_dense(ccnlab::nn::DenseNet& net, Matrix in, std::mt19937_64& rng) {
  const Matrix up = random_matrix(net.output_dim(), in.cols(), rng);
  net.zero_grad();
  net.forward(in);
  const Matrix d_in = net.backward(up);
  const Vector analytic = net.grads();
  auto loss = [&] { return net.evaluate(in).cwiseProduct(up).sum(); };
  Errors e;
  e.params = worst_error(net.params(), analytic, loss);
  Eigen::Map<Vector> in_flat(in.data(), in.size());
  e.inputs = worst_error(in_flat, Eigen::Map<const Vector>(d_in.data(), d_in.size()), loss);
  return e;
}

/// Same check through the shared-input pass; input error covers both blocks.
template <class Net>
Errors check_shared(Net& net, Matrix shared, Matrix per_draw, int draws, std::mt19937_64& rng) {
  const Matrix up = random_matrix(1, per_draw.cols(), rng);
  Vector analytic_params;
  ccnlab::nn::SharedGrad g;
  std::function<Vector()> flat_params, flat_grads;
  std::vector<ccnlab::nn::DenseNet*> parts;
  if constexpr (std::is_same_v<Net, ccnlab::nn::DenseNet>) {
    parts.push_back(&net);
  } else {
    net.for_each_part([&](ccnlab::nn::DenseNet& p) { parts.push_back(&p); });
  }
  for (auto* p : parts) p->zero_grad();
  net.forward_shared(shared, per_draw, draws);
  g = net.backward_shared(up);
  auto loss = [&] { return net.evaluate_shared(shared, per_draw, draws).cwiseProduct(up).sum(); };
  Errors e;
  for (auto* p : parts) {
    const Vector analytic = p->grads();
    e.params = std::max(e.params, worst_error(p->params(), analytic, loss));
  }
  Eigen::Map<Vector> s_flat(shared.data(), shared.size());
  e.inputs = worst_error(s_flat, Eigen::Map<const Vector>(g.shared.data(), g.shared.size()), loss);
  Eigen::Map<Vector> z_flat(per_draw.data(), per_draw.size());
  e.inputs = std::max(e.inputs, worst_error(z_flat, Eigen::Map<const Vector>(g.per_draw.data(), g.per_draw.size()), loss));
  return e;
}

/// Random small DenseNet: 1-3 weight layers, widths 1-5, random activations.
inline ccnlab::nn::DenseNet random_dense(std::mt19937_64& rng) {
  using ccnlab::nn::Activation;
  std::uniform_int_distribution<int> layers(1, 3), width(1, 5), act(0, 3);
  std::vector<int> w{width(rng)};
  const int l = layers(rng);
  for (int i = 0; i < l; ++i) w.push_back(width(rng));
  const Activation acts[] = {Activation::relu, Activation::tanh, Activation::sigmoid, Activation::identity};
  ccnlab::nn::DenseNet net(w, acts[act(rng)], acts[act(rng)]);
  net.params() = random_matrix(net.params().size(), 1, rng, 0.7);
  return net;
}

}  // namespace gradcheck
