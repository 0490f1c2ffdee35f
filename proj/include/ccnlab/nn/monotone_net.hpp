#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <vector>

#include "ccnlab/core/error.hpp"
#include "ccnlab/nn/dense_net.hpp"

namespace ccnlab::nn {

/// Mixture of J sigmoids in z whose weights, offsets and log-slopes are
/// functions of x:
///
///   g(x, z) = sum_j softmax(w(x))_j * sigmoid(b(x)_j + exp(a(x)_j) * z)
///
/// Every component is increasing in z and the mixture weights are positive,
/// so g is non-decreasing in z for every x by construction.
class MonotoneNet {
 public:
  MonotoneNet() = default;

  MonotoneNet(int input_dim, int components, int hidden_width, Activation hidden = Activation::relu)
      : components_(components),
        weights_net_({input_dim, hidden_width, components}, hidden, Activation::identity),
        offsets_net_({input_dim, hidden_width, components}, hidden, Activation::identity),
        log_slopes_net_({input_dim, hidden_width, components}, hidden, Activation::identity) {
    require(components >= 1, "MonotoneNet needs at least one component");
  }

  int components() const { return components_; }
  int input_dim() const { return weights_net_.input_dim(); }

  DenseNet& weights_net() { return weights_net_; }
  DenseNet& offsets_net() { return offsets_net_; }
  DenseNet& log_slopes_net() { return log_slopes_net_; }
  const DenseNet& weights_net() const { return weights_net_; }
  const DenseNet& offsets_net() const { return offsets_net_; }
  const DenseNet& log_slopes_net() const { return log_slopes_net_; }

  template <typename F>
  void for_each_part(F&& f) {
    f(weights_net_);
    f(offsets_net_);
    f(log_slopes_net_);
  }
  template <typename F>
  void for_each_part(F&& f) const {
    f(weights_net_);
    f(offsets_net_);
    f(log_slopes_net_);
  }

  void init_glorot(Rng& rng) {
    for_each_part([&](DenseNet& n) { n.init_glorot(rng); });
  }

  void zero_grad() {
    for_each_part([](DenseNet& n) { n.zero_grad(); });
  }

  /// x is d x B, z is 1 x (B * draws); returns 1 x (B * draws).
  const Matrix& forward_shared(const Matrix& x, const Matrix& z, int draws) {
    check_shapes(x, z, draws);
    mix_ = softmax(weights_net_.forward(x));
    offsets_ = offsets_net_.forward(x);
    slopes_ = log_slopes_net_.forward(x).array().exp().matrix();
    z_ = z;
    draws_ = draws;
    sig_.resize(components_, z.cols());
    out_.resize(1, z.cols());
    mix_components(mix_, offsets_, slopes_, z, draws, sig_, out_);
    cached_ = true;
    return out_;
  }

  Matrix evaluate_shared(const Matrix& x, const Matrix& z, int draws) const {
    check_shapes(x, z, draws);
    const Matrix mix = softmax(weights_net_.evaluate(x));
    const Matrix offs = offsets_net_.evaluate(x);
    const Matrix slopes = log_slopes_net_.evaluate(x).array().exp().matrix();
    Matrix sig(components_, z.cols());
    Matrix out(1, z.cols());
    mix_components(mix, offs, slopes, z, draws, sig, out);
    return out;
  }

  /// Single point; `in` is [x; z].
  double forward(std::span<const double> in) {
    require_dims(input_dim() + 1, static_cast<long>(in.size()), "MonotoneNet::forward input");
    Matrix x = Eigen::Map<const Matrix>(in.data(), input_dim(), 1);
    Matrix z(1, 1);
    z(0, 0) = in.back();
    return forward_shared(x, z, 1)(0, 0);
  }

  SharedGrad backward_shared(const Matrix& upstream) {
    require(cached_, "MonotoneNet::backward_shared called without a matching forward pass");
    require_dims(out_.cols(), upstream.cols(), "MonotoneNet::backward upstream");
    const Eigen::Index samples = mix_.cols();
    Matrix d_mix = Matrix::Zero(components_, samples);
    Matrix d_offs = Matrix::Zero(components_, samples);
    Matrix d_slope = Matrix::Zero(components_, samples);
    Matrix d_z(1, z_.cols());
    for (Eigen::Index b = 0; b < samples; ++b) {
      for (int j = 0; j < draws_; ++j) {
        const Eigen::Index c = b * draws_ + j;
        const double up = upstream(0, c);
        const auto s = sig_.col(c).array();
        const Eigen::ArrayXd ds = mix_.col(b).array() * s * (1.0 - s) * up;
        d_mix.col(b).array() += s * up;
        d_offs.col(b).array() += ds;
        d_slope.col(b).array() += ds * z_(0, c);
        d_z(0, c) = (ds * slopes_.col(b).array()).sum();
      }
    }
    // softmax jacobian, then chain through exp for the slopes
    Matrix d_logits(components_, samples);
    for (Eigen::Index b = 0; b < samples; ++b) {
      const double mean = mix_.col(b).dot(d_mix.col(b));
      d_logits.col(b) = (mix_.col(b).array() * (d_mix.col(b).array() - mean)).matrix();
    }
    const Matrix d_log_slopes = (d_slope.array() * slopes_.array()).matrix();

    Matrix dx = weights_net_.backward(d_logits);
    dx += offsets_net_.backward(d_offs);
    dx += log_slopes_net_.backward(d_log_slopes);
    return {std::move(dx), std::move(d_z)};
  }

  void invalidate() {
    cached_ = false;
    for_each_part([](DenseNet& n) { n.invalidate(); });
  }

 private:
  void check_shapes(const Matrix& x, const Matrix& z, int draws) const {
    require(draws >= 1, "MonotoneNet needs at least one draw per sample");
    require_dims(input_dim(), x.rows(), "MonotoneNet covariate input");
    require_dims(1, z.rows(), "MonotoneNet z rows");
    require_dims(x.cols() * draws, z.cols(), "MonotoneNet z columns");
  }

  static Matrix softmax(const Matrix& logits) {
    Matrix out = logits;
    for (Eigen::Index b = 0; b < out.cols(); ++b) {
      out.col(b).array() = (out.col(b).array() - out.col(b).maxCoeff()).exp();
      out.col(b) /= out.col(b).sum();
    }
    return out;
  }

  static void mix_components(const Matrix& mix, const Matrix& offs, const Matrix& slopes,
                             const Matrix& z, int draws, Matrix& sig, Matrix& out) {
    for (Eigen::Index b = 0; b < mix.cols(); ++b) {
      for (int j = 0; j < draws; ++j) {
        const Eigen::Index c = b * draws + j;
        sig.col(c).array() =
            1.0 / (1.0 + (-(offs.col(b).array() + slopes.col(b).array() * z(0, c))).exp());
        out(0, c) = mix.col(b).dot(sig.col(c));
      }
    }
  }

  int components_ = 0;
  DenseNet weights_net_;
  DenseNet offsets_net_;
  DenseNet log_slopes_net_;

  bool cached_ = false;
  Matrix mix_, offsets_, slopes_, z_, sig_, out_;
  int draws_ = 1;
};

}  // namespace ccnlab::nn
