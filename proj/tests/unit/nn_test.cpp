#include <gtest/gtest.h>

#include <sstream>

#include "ccnlab/nn/adam.hpp"
#include "ccnlab/nn/dense_net.hpp"
#include "ccnlab/nn/monotone_net.hpp"
#include "ccnlab/nn/serialize.hpp"
#include "gradcheck.hpp"

using namespace ccnlab;
using namespace ccnlab::nn;

TEST(DenseNet, ZeroWeightsGiveHalfEverywhere) {
  DenseNet net({3, 4, 2});
  const Matrix out = net.evaluate(Matrix::Random(3, 5));
  EXPECT_TRUE(out.isConstant(0.5));
}

TEST(DenseNet, IdentityLayerPassesInputThrough) {
  DenseNet net({3, 3}, Activation::relu, Activation::identity);
  net.weight(0).setIdentity();
  const std::vector<double> v{0.3, -1.2, 4.0};
  EXPECT_EQ(net.forward(v), v);
}

TEST(DenseNet, ParameterCountMatchesLayout) {
  EXPECT_EQ(DenseNet::param_count({2, 3, 1}), 2u * 3 + 3 + 3 * 1 + 1);
  DenseNet net({2, 3, 1});
  EXPECT_EQ(static_cast<std::size_t>(net.params().size()), DenseNet::param_count({2, 3, 1}));
}

TEST(DenseNet, ZeroUpstreamLeavesGradsUnchanged) {
  Rng rng(1);
  DenseNet net({2, 3, 1});
  net.init_glorot(rng);
  net.grads().setConstant(0.25);
  net.forward(Matrix::Random(2, 4));
  net.backward(Matrix::Zero(1, 4));
  EXPECT_TRUE(net.grads().isConstant(0.25));
}

TEST(DenseNet, SigmoidSlopeAtZero) {
  // f(p) = sigmoid(p * x), p = 0, x = 1
  DenseNet net({1, 1});
  net.forward(std::vector<double>{1.0});
  net.backward(std::vector<double>{1.0});
  EXPECT_DOUBLE_EQ(net.grads()(0), 0.25);
  EXPECT_DOUBLE_EQ(net.grads()(1), 0.25);  // bias
}

TEST(DenseNet, BackwardWithoutForwardThrows) {
  DenseNet net({2, 1});
  EXPECT_THROW(net.backward(Matrix::Zero(1, 1)), Error);
}

TEST(DenseNet, DimensionMismatchNamesBothSizes) {
  DenseNet net({3, 1});
  try {
    net.evaluate(Matrix::Zero(2, 1));
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find('3'), std::string::npos);
    EXPECT_NE(msg.find('2'), std::string::npos);
  }
}

TEST(DenseNet, AnalyticGradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    DenseNet net = gradcheck::random_dense(rng);
    const auto e = gradcheck::check_dense(net, gradcheck::random_matrix(net.input_dim(), 3, rng), rng);
    EXPECT_LT(e.worst(), 1e-4) << "trial " << trial;
  }
}

TEST(DenseNet, SharedPassEqualsExplicitConcatenation) {
  Rng rng(3);
  DenseNet net({4, 6, 1}, Activation::tanh);
  net.init_glorot(rng);
  const Matrix shared = Matrix::Random(3, 2);
  const Matrix z = Matrix::Random(1, 2 * 5);
  Matrix full(4, 10);
  for (int b = 0; b < 2; ++b)
    for (int j = 0; j < 5; ++j) {
      full.block(0, b * 5 + j, 3, 1) = shared.col(b);
      full(3, b * 5 + j) = z(0, b * 5 + j);
    }
  EXPECT_TRUE(net.evaluate_shared(shared, z, 5).isApprox(net.evaluate(full), 1e-12));
}

TEST(DenseNet, SharedPassGradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    DenseNet net({4, 5, 3, 1}, trial % 2 ? Activation::tanh : Activation::relu, Activation::sigmoid);
    net.params() = gradcheck::random_matrix(net.params().size(), 1, rng, 0.7);
    const auto e = gradcheck::check_shared(net, gradcheck::random_matrix(3, 2, rng), gradcheck::random_matrix(1, 6, rng),
                                           3, rng);
    EXPECT_LT(e.worst(), 1e-4) << "trial " << trial;
  }
}

TEST(MonotoneNet, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    MonotoneNet net(3, 4, 5, trial % 2 ? Activation::tanh : Activation::relu);
    net.for_each_part([&](DenseNet& p) { p.params() = gradcheck::random_matrix(p.params().size(), 1, rng, 0.5); });
    const auto e = gradcheck::check_shared(net, gradcheck::random_matrix(3, 2, rng), gradcheck::random_matrix(1, 8, rng),
                                           4, rng);
    EXPECT_LT(e.worst(), 1e-4) << "trial " << trial;
  }
}

TEST(MonotoneNet, NonDecreasingInZ) {
  Rng rng(9);
  MonotoneNet net(2, 6, 8);
  net.for_each_part([&](DenseNet& p) {
    p.init_glorot(rng);
    p.params() *= 3.0;
  });
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 2000; ++k) {
    Matrix x(2, 1);
    x << u(rng), u(rng);
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    Matrix z(1, 2);
    z << a, b;
    const Matrix g = net.evaluate_shared(x, z, 2);
    ASSERT_LE(g(0, 0), g(0, 1));
    ASSERT_GE(g(0, 0), 0.0);
    ASSERT_LE(g(0, 1), 1.0);
  }
}

TEST(Adam, ZeroGradsLeaveParamsUnchanged) {
  Vector p = Vector::LinSpaced(4, -1.0, 1.0);
  const Vector before = p;
  Vector g = Vector::Zero(4);
  AdamState s(4, {});
  adam_update(p, g, s);
  EXPECT_EQ(p, before);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Vector p(1), g(1);
  p << 2.0;
  g << 1.0;
  AdamHyper h;
  h.learning_rate = 0.1;
  AdamState s(1, h);
  adam_update(p, g, s);
  // m_hat = 1, v_hat = 1 after bias correction
  EXPECT_NEAR(p(0), 2.0 - 0.1 / (1.0 + 1e-8), 1e-12);
  EXPECT_EQ(g(0), 0.0);
}

TEST(Adam, IdenticalInputsGiveIdenticalUpdates) {
  Vector p1 = Vector::LinSpaced(5, 0.0, 1.0), p2 = p1;
  AdamState s1(5, {}), s2(5, {});
  for (int step = 0; step < 10; ++step) {
    Vector g1 = p1.array().sin().matrix(), g2 = p2.array().sin().matrix();
    adam_update(p1, g1, s1);
    adam_update(p2, g2, s2);
  }
  EXPECT_EQ(p1, p2);
}

TEST(Adam, NonFiniteGradientIsAnError) {
  Vector p = Vector::Zero(2), g(2);
  g << 1.0, std::numeric_limits<double>::quiet_NaN();
  AdamState s(2, {});
  EXPECT_THROW(adam_update(p, g, s), Error);
}

TEST(Adam, DecoupledDecayShrinksParams) {
  Vector p(1), g(1);
  p << 1.0;
  g << 0.0;
  AdamHyper h;
  h.learning_rate = 0.1;
  h.weight_decay = 0.5;
  AdamState s(1, h);
  adam_update(p, g, s);
  EXPECT_DOUBLE_EQ(p(0), 0.95);
}

TEST(Clip, ClampsIntoBound) {
  DenseNet net({1, 1}, Activation::relu, Activation::identity);
  net.params() << 0.5, -0.2;
  clip_weights(net, 0.01);
  EXPECT_DOUBLE_EQ(net.params()(0), 0.01);
  EXPECT_DOUBLE_EQ(net.params()(1), -0.01);

  DenseNet three({2, 1}, Activation::relu, Activation::identity);
  three.params() << 0.5, -0.2, 0.005;
  clip_weights(three, 0.01);
  EXPECT_EQ(three.params(), (Vector(3) << 0.01, -0.01, 0.005).finished());
}

TEST(Clip, WithinBoundIsNoOp) {
  DenseNet net({2, 1}, Activation::relu, Activation::identity);
  net.params() << 0.001, -0.004, 0.0;
  const Vector before = net.params();
  clip_weights(net, 0.01);
  EXPECT_EQ(net.params(), before);
}

TEST(Lipschitz, SingleLinearLayerIsSpectralNorm) {
  DenseNet net({2, 1}, Activation::relu, Activation::identity);
  net.params() << 3.0, 4.0, 0.0;
  EXPECT_NEAR(lipschitz_bound(net), 5.0, 1e-12);
}

TEST(Serialize, RoundTripIsBitExact) {
  Rng rng(4);
  DenseNet net({3, 7, 2}, Activation::tanh, Activation::identity);
  net.init_glorot(rng);
  std::stringstream buf;
  save_net(buf, net);
  const DenseNet back = load_net(buf);
  EXPECT_EQ(back.widths(), net.widths());
  EXPECT_EQ(back.hidden_activation(), Activation::tanh);
  EXPECT_EQ(back.output_activation(), Activation::identity);
  EXPECT_EQ(back.params(), net.params());
}

TEST(Serialize, RejectsForeignFiles) {
  std::stringstream buf("hello\n");
  EXPECT_THROW(load_net(buf), Error);
}
