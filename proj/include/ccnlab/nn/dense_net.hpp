#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ccnlab/core/error.hpp"
#include "ccnlab/core/rng.hpp"
#include "ccnlab/nn/activation.hpp"

namespace ccnlab::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Gradients of a shared-input pass: one column per sample for the shared
/// block (summed over its draws), one column per draw for the per-draw block.
struct SharedGrad {
  Matrix shared;
  Matrix per_draw;
};

/// Fully connected feedforward network with a flat parameter vector.
///
/// Batched calls take one sample per column. Layer l stores its weight matrix
/// (out x in, column-major) followed by its bias in `params()`.
///
/// Besides the ordinary forward pass there is a shared-input mode used by the
/// CDF networks: the input of sample b is [shared(:, b); per_draw(:, b*k + j)]
/// for j < k, so the shared block enters the first layer once per sample
/// instead of once per draw.
class DenseNet {
 public:
  DenseNet() = default;

  explicit DenseNet(std::vector<int> widths, Activation hidden = Activation::relu,
                    Activation output = Activation::sigmoid)
      : widths_(std::move(widths)), hidden_(hidden), output_(output) {
    require(widths_.size() >= 2, "DenseNet needs at least an input and an output width");
    for (int w : widths_) require(w > 0, "DenseNet layer widths must be positive");
    offsets_.push_back(0);
    for (std::size_t l = 0; l + 1 < widths_.size(); ++l)
      offsets_.push_back(offsets_.back() + static_cast<Eigen::Index>(widths_[l]) * widths_[l + 1] +
                         widths_[l + 1]);
    params_ = Vector::Zero(offsets_.back());
    grads_ = Vector::Zero(offsets_.back());
  }

  static std::size_t param_count(const std::vector<int>& widths) {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l)
      n += static_cast<std::size_t>(widths[l]) * widths[l + 1] + widths[l + 1];
    return n;
  }

  /// Glorot-uniform weights, zero biases.
  void init_glorot(Rng& rng) {
    for (int l = 0; l < layers(); ++l) {
      const double limit = std::sqrt(6.0 / (widths_[l] + widths_[l + 1]));
      std::uniform_real_distribution<double> dist(-limit, limit);
      auto w = weight(l);
      for (Eigen::Index c = 0; c < w.cols(); ++c)
        for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = dist(rng);
      bias(l).setZero();
    }
    invalidate();
  }

  int layers() const { return static_cast<int>(widths_.size()) - 1; }
  int input_dim() const { return widths_.front(); }
  int output_dim() const { return widths_.back(); }
  const std::vector<int>& widths() const { return widths_; }
  Activation hidden_activation() const { return hidden_; }
  Activation output_activation() const { return output_; }

  Vector& params() { return params_; }
  const Vector& params() const { return params_; }
  Vector& grads() { return grads_; }
  const Vector& grads() const { return grads_; }
  void zero_grad() { grads_.setZero(); }

  Eigen::Map<Matrix> weight(int l) {
    return {params_.data() + offsets_[l], widths_[l + 1], widths_[l]};
  }
  Eigen::Map<const Matrix> weight(int l) const {
    return {params_.data() + offsets_[l], widths_[l + 1], widths_[l]};
  }
  Eigen::Map<Vector> bias(int l) {
    return {params_.data() + offsets_[l] + widths_[l] * widths_[l + 1], widths_[l + 1]};
  }
  Eigen::Map<const Vector> bias(int l) const {
    return {params_.data() + offsets_[l] + widths_[l] * widths_[l + 1], widths_[l + 1]};
  }

  /// Drops the cached activations; call after mutating params directly.
  void invalidate() { mode_ = Mode::none; }

  const Matrix& forward(const Matrix& in) {
    require_dims(input_dim(), in.rows(), "DenseNet::forward input");
    acts_.resize(static_cast<std::size_t>(layers()) + 1);
    acts_[0] = in;
    for (int l = 0; l < layers(); ++l) {
      Matrix z = weight(l) * acts_[l];
      z.colwise() += bias(l);
      apply_activation(activation_of(l), z);
      acts_[l + 1] = std::move(z);
    }
    mode_ = Mode::full;
    return acts_.back();
  }

  Matrix evaluate(const Matrix& in) const {
    require_dims(input_dim(), in.rows(), "DenseNet::evaluate input");
    Matrix a = in;
    for (int l = 0; l < layers(); ++l) {
      Matrix z = weight(l) * a;
      z.colwise() += bias(l);
      apply_activation(activation_of(l), z);
      a = std::move(z);
    }
    return a;
  }

  std::vector<double> forward(std::span<const double> in) {
    require_dims(input_dim(), static_cast<long>(in.size()), "DenseNet::forward input");
    Matrix m = Eigen::Map<const Matrix>(in.data(), input_dim(), 1);
    const Matrix& out = forward(m);
    return {out.data(), out.data() + out.size()};
  }

  const Matrix& forward_shared(const Matrix& shared, const Matrix& per_draw, int draws) {
    acts_.resize(static_cast<std::size_t>(layers()) + 1);
    acts_[1] = first_layer_shared(shared, per_draw, draws);
    for (int l = 1; l < layers(); ++l) {
      Matrix z = weight(l) * acts_[l];
      z.colwise() += bias(l);
      apply_activation(activation_of(l), z);
      acts_[l + 1] = std::move(z);
    }
    shared_in_ = shared;
    per_draw_in_ = per_draw;
    draws_ = draws;
    mode_ = Mode::shared;
    return acts_.back();
  }

  Matrix evaluate_shared(const Matrix& shared, const Matrix& per_draw, int draws) const {
    Matrix a = first_layer_shared(shared, per_draw, draws);
    for (int l = 1; l < layers(); ++l) {
      Matrix z = weight(l) * a;
      z.colwise() += bias(l);
      apply_activation(activation_of(l), z);
      a = std::move(z);
    }
    return a;
  }

  /// Accumulates d(output . upstream)/d(params) into grads() and returns the
  /// gradient with respect to the input of the last full forward pass.
  Matrix backward(const Matrix& upstream) {
    require(mode_ == Mode::full, "DenseNet::backward called without a matching forward pass");
    Matrix delta = backprop_to_first(upstream);
    grad_weight(0) += delta * acts_[0].transpose();
    grad_bias(0) += delta.rowwise().sum();
    return weight(0).transpose() * delta;
  }

  std::vector<double> backward(std::span<const double> upstream) {
    require_dims(output_dim(), static_cast<long>(upstream.size()), "DenseNet::backward upstream");
    Matrix u = Eigen::Map<const Matrix>(upstream.data(), output_dim(), 1);
    Matrix g = backward(u);
    return {g.data(), g.data() + g.size()};
  }

  SharedGrad backward_shared(const Matrix& upstream) {
    require(mode_ == Mode::shared, "DenseNet::backward_shared called without a matching forward pass");
    const Eigen::Index width = widths_[1];
    const Eigen::Index d = shared_in_.rows();
    const Eigen::Index samples = shared_in_.cols();
    Matrix delta = backprop_to_first(upstream);
    Matrix summed = Matrix::Zero(width, samples);
    Eigen::Map<const Matrix> blocks(delta.data(), width * draws_, samples);
    for (int j = 0; j < draws_; ++j) summed += blocks.middleRows(width * j, width);

    auto gw = grad_weight(0);
    gw.leftCols(d) += summed * shared_in_.transpose();
    gw.rightCols(per_draw_in_.rows()) += delta * per_draw_in_.transpose();
    grad_bias(0) += summed.rowwise().sum();

    const auto w = weight(0);
    return {w.leftCols(d).transpose() * summed, w.rightCols(per_draw_in_.rows()).transpose() * delta};
  }

 private:
  enum class Mode { none, full, shared };

  Activation activation_of(int l) const { return l + 1 == layers() ? output_ : hidden_; }

  Eigen::Map<Matrix> grad_weight(int l) {
    return {grads_.data() + offsets_[l], widths_[l + 1], widths_[l]};
  }
  Eigen::Map<Vector> grad_bias(int l) {
    return {grads_.data() + offsets_[l] + widths_[l] * widths_[l + 1], widths_[l + 1]};
  }

  Matrix first_layer_shared(const Matrix& shared, const Matrix& per_draw, int draws) const {
    require(draws >= 1, "DenseNet shared pass needs at least one draw per sample");
    require_dims(input_dim(), shared.rows() + per_draw.rows(), "DenseNet shared input");
    require_dims(shared.cols() * draws, per_draw.cols(), "DenseNet per-draw columns");
    const Eigen::Index width = widths_[1];
    const auto w = weight(0);
    Matrix base = w.leftCols(shared.rows()) * shared;
    base.colwise() += bias(0);
    Matrix z = w.rightCols(per_draw.rows()) * per_draw;
    Eigen::Map<Matrix> blocks(z.data(), width * draws, shared.cols());
    for (int j = 0; j < draws; ++j) blocks.middleRows(width * j, width) += base;
    apply_activation(activation_of(0), z);
    return z;
  }

  // Returns the pre-activation delta of layer 0 after accumulating grads of
  // layers 1..L-1.
  Matrix backprop_to_first(const Matrix& upstream) {
    require_dims(output_dim(), upstream.rows(), "DenseNet::backward upstream rows");
    require_dims(acts_.back().cols(), upstream.cols(), "DenseNet::backward upstream cols");
    Matrix delta = upstream;
    for (int l = layers() - 1; l >= 1; --l) {
      scale_by_derivative(activation_of(l), delta, acts_[l + 1]);
      grad_weight(l) += delta * acts_[l].transpose();
      grad_bias(l) += delta.rowwise().sum();
      delta = weight(l).transpose() * delta;
    }
    scale_by_derivative(activation_of(0), delta, acts_[1]);
    return delta;
  }

  std::vector<int> widths_;
  Activation hidden_ = Activation::relu;
  Activation output_ = Activation::sigmoid;
  std::vector<Eigen::Index> offsets_;
  Vector params_;
  Vector grads_;

  Mode mode_ = Mode::none;
  std::vector<Matrix> acts_;
  Matrix shared_in_;
  Matrix per_draw_in_;
  int draws_ = 1;
};

/// Clamps every parameter into [-bound, bound].
inline void clip_weights(DenseNet& net, double bound) {
  require(bound > 0.0, "clip bound must be positive");
  net.params() = net.params().cwiseMax(-bound).cwiseMin(bound);
  net.invalidate();
}

/// Upper bound on the Lipschitz constant (Euclidean norms) of a net whose
/// activations are 1-Lipschitz: the product of per-layer spectral norms.
inline double lipschitz_bound(const DenseNet& net) {
  double bound = 1.0;
  for (int l = 0; l < net.layers(); ++l) {
    Eigen::JacobiSVD<Matrix> svd(net.weight(l));
    bound *= svd.singularValues()(0);
  }
  if (net.output_activation() == Activation::sigmoid) bound *= 0.25;
  return bound;
}

}  // namespace ccnlab::nn
