#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>

#include "ccnlab/core/error.hpp"

namespace ccnlab::nn {

enum class Activation { relu, tanh, sigmoid, identity };

inline std::string to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
    case Activation::identity: return "identity";
  }
  return "?";
}

inline Activation activation_from_string(std::string_view s) {
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "identity") return Activation::identity;
  throw Error("unknown activation '" + std::string(s) + "'");
}

inline double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

template <typename Derived>
void apply_activation(Activation a, Eigen::MatrixBase<Derived>& m) {
  switch (a) {
    case Activation::relu: m = m.cwiseMax(0.0); break;
    case Activation::tanh: m = m.array().tanh().matrix(); break;
    case Activation::sigmoid: m = (1.0 / (1.0 + (-m.array()).exp())).matrix(); break;
    case Activation::identity: break;
  }
}

/// Multiplies `delta` in place by the activation derivative, expressed through
/// the activation's output.
template <typename Derived, typename OutDerived>
void scale_by_derivative(Activation a, Eigen::MatrixBase<Derived>& delta,
                         const Eigen::MatrixBase<OutDerived>& out) {
  switch (a) {
    case Activation::relu: delta = (out.array() > 0.0).select(delta.array(), 0.0).matrix(); break;
    case Activation::tanh: delta = (delta.array() * (1.0 - out.array().square())).matrix(); break;
    case Activation::sigmoid: delta = (delta.array() * out.array() * (1.0 - out.array())).matrix(); break;
    case Activation::identity: break;
  }
}

}  // namespace ccnlab::nn
