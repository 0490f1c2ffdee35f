#include <gtest/gtest.h>

#include <cmath>

#include "ccnlab/ccn/train.hpp"
#include "ccnlab/metrics/metrics.hpp"
#include "ccnlab/scenarios/generators.hpp"
#include "reference_models.hpp"

using namespace ccnlab;

namespace {

// Pair-count AUC straight from the definition.
double brute_auc(const std::vector<double>& s, const std::vector<double>& truth) {
  double num = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!(truth[i] > 0.0) || truth[j] > 0.0) continue;
      pairs += 1.0;
      num += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  return num / pairs;
}

}  // namespace

TEST(Pehe, Examples) {
  const std::vector<double> a{1.0, 2.0}, zero{0.0, 0.0};
  EXPECT_EQ(pehe(a, a), 0.0);
  EXPECT_NEAR(pehe(a, zero), std::sqrt(2.5), 1e-15);
  EXPECT_THROW(pehe(a, std::vector<double>{1.0}), Error);
}

TEST(Auc, Examples) {
  const std::vector<double> s{0.1, 0.4, 0.35, 0.8}, truth{-1, -1, 1, 1};
  EXPECT_DOUBLE_EQ(decision_auc(s, truth), 0.75);
  const std::vector<double> ordered{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(decision_auc(ordered, truth), 1.0);
  const std::vector<double> reversed{4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(decision_auc(reversed, truth), 0.0);
  const std::vector<double> tied{1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(decision_auc(tied, truth), 0.5);
}

TEST(Auc, SingleClassIsUndefined) {
  const std::vector<double> s{0.1, 0.2}, truth{1.0, 2.0};
  try {
    decision_auc(s, truth);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("AUC undefined"), std::string::npos);
  }
}

TEST(Auc, MatchesPairCountOnRandomTiedInputs) {
  Rng rng(3);
  std::uniform_int_distribution<int> level(0, 3), len(2, 12);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = len(rng);
    std::vector<double> s(static_cast<std::size_t>(n)), truth(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      s[static_cast<std::size_t>(i)] = level(rng);
      truth[static_cast<std::size_t>(i)] = level(rng) - 1.5;
    }
    const bool both = std::any_of(truth.begin(), truth.end(), [](double v) { return v > 0; }) &&
                      std::any_of(truth.begin(), truth.end(), [](double v) { return v <= 0; });
    if (!both) continue;
    EXPECT_DOUBLE_EQ(decision_auc(s, truth), brute_auc(s, truth));
    std::vector<double> t = s;
    for (auto& v : t) v = std::exp(3.0 * v) - 7.0;  // strictly increasing transform
    EXPECT_DOUBLE_EQ(decision_auc(t, truth), decision_auc(s, truth));
  }
}

TEST(ApproxLl, OracleModelReproducesReference) {
  for (const auto& name : scenario_names()) {
    ScenarioConfig c;
    c.n = 300;
    c.seed = 4;
    const auto s = generate_scenario(name, c);
    const OracleModel om{s.oracle.get()};
    EXPECT_NEAR(approx_ll(om, s.data, 0.2), true_ll_reference(*s.oracle, s.data, 0.2), 1e-9) << name;
  }
}

TEST(ApproxLl, FullSupportNeighborhoodGivesZero) {
  ScenarioConfig c;
  c.n = 200;
  const auto s = gen_logistic(c);
  EXPECT_NEAR(approx_ll(OracleModel{s.oracle.get()}, s.data, 1e6), 0.0, 1e-9);
}

TEST(ApproxLl, FlatModelHitsTheFloor) {
  ScenarioConfig c;
  c.n = 50;
  const auto s = gen_gaussian(c);
  // zero-weight plain nets: g = 0.5 everywhere, so every increment is 0
  CdfModel m = refmodels::model_from(CdfNet::plain(1, 4), CdfNet::plain(1, 4), ZSampler(-5, 5, 0.0));
  EXPECT_NEAR(approx_ll(m, s.data, 0.2), std::log(kProbabilityFloor), 1e-9);
}

TEST(ApproxLl, OracleDominatesATrainedModel) {
  ScenarioConfig c;
  c.n = 4000;
  c.seed = 2;
  const auto s = gen_logistic(c);
  std::vector<std::size_t> train, test;
  for (std::size_t i = 0; i < s.data.size(); ++i) (i < 2000 ? train : test).push_back(i);
  TrainConfig tc;
  tc.max_steps = 1000;
  tc.seed = 2;
  const auto model = train_ccn(s.data.subset(train), tc);
  const Dataset held = s.data.subset(test);
  EXPECT_GE(true_ll_reference(*s.oracle, held, 0.2), approx_ll(model, held, 0.2) - 0.05);
}

TEST(FactualLl, ScoresOnlyTheObservedArm) {
  ScenarioConfig c;
  c.n = 200;
  const auto s = gen_logistic(c);
  const OracleModel om{s.oracle.get()};
  double total = 0.0;
  for (std::size_t i = 0; i < s.data.size(); ++i) {
    const auto x = covariate_row(s.data.covariates, i);
    const int t = s.data.treatment[i];
    const double y = s.data.outcome[i];
    total += std::log(s.oracle->true_cdf(t, x, y + 0.2) - s.oracle->true_cdf(t, x, y - 0.2));
  }
  EXPECT_NEAR(factual_ll(om, s.data, 0.2), total / 200.0, 1e-9);
}

TEST(IntervalWidth, PointMassHasZeroWidth) {
  const auto m = refmodels::step_model(1.0, 2.0, -2.0, 4.0);
  EXPECT_NEAR(interval_width(m, std::vector<double>{0.0}, 0, 0.9), 0.0, 6.0 / (kDefaultGridSize - 1));
}

TEST(IntervalWidth, StandardNormalAndNesting) {
  const auto m = refmodels::normal_model();
  const std::vector<double> x{0.0};
  EXPECT_NEAR(interval_width(m, x, 0, 0.9), 3.29, 0.15);
  double prev = 0.0;
  for (double cov = 0.1; cov < 0.99; cov += 0.1) {
    const double w = interval_width(m, x, 1, cov);
    EXPECT_GE(w, prev);
    prev = w;
  }
}
