// Trained-model properties on the Gaussian scenario. Slow (about a minute).
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "ccnlab/ccnlab.hpp"
#include "reference_models.hpp"

using namespace ccnlab;

namespace {

constexpr int kSeeds = 5;

// mean |model - oracle| over both arms, 60 fresh covariates x 25 outcomes around each arm mean
double mean_abs_cdf_error(const CdfModel& m, const ScenarioOracle& oracle, std::uint64_t seed) {
  ScenarioConfig sc;
  sc.n = 60;
  sc.seed = 1000 + seed;
  const Scenario fresh = generate_scenario("gaussian", sc);
  double total = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < fresh.data.size(); ++i) {
    const auto x = covariate_row(fresh.data.covariates, i);
    for (int arm = 0; arm < 2; ++arm) {
      const double mu = oracle.true_mean(arm, x);
      for (int j = 0; j < 25; ++j) {
        const double y = mu - 3.0 + 0.25 * j;
        total += std::abs(m.cdf(arm, x, y) - oracle.true_cdf(arm, x, y));
        ++count;
      }
    }
  }
  return total / count;
}

class GaussianConsistency : public ::testing::Test {
 protected:
  // n -> per-seed error, trained once for the suite
  static const std::map<std::size_t, std::vector<double>>& errors() {
    static const auto table = [] {
      std::map<std::size_t, std::vector<double>> t;
      for (std::size_t n : {500u, 2000u, 8000u}) {
        for (int seed = 1; seed <= kSeeds; ++seed) {
          ScenarioConfig sc;
          sc.n = n;
          sc.seed = static_cast<std::uint64_t>(seed);
          const Scenario s = generate_scenario("gaussian", sc);
          TrainConfig tc;
          tc.seed = static_cast<std::uint64_t>(seed);
          t[n].push_back(mean_abs_cdf_error(train_ccn(s.data, tc), *s.oracle, sc.seed));
        }
      }
      return t;
    }();
    return table;
  }

  static double mean_at(std::size_t n) {
    const auto& v = errors().at(n);
    double s = 0.0;
    for (double e : v) s += e;
    return s / static_cast<double>(v.size());
  }
};

TEST_F(GaussianConsistency, FixedPointAtEightThousand) {
  for (double e : errors().at(8000)) EXPECT_LE(e, 0.05);
}

TEST_F(GaussianConsistency, ErrorShrinksWithSampleSize) {
  EXPECT_LT(mean_at(8000), mean_at(500)) << "n=500 " << mean_at(500) << "  n=2000 " << mean_at(2000);
}

class ReferenceCurve : public ::testing::Test {
 protected:
  static const CdfModel& model() {
    static const CdfModel m = refmodels::normal_model();
    return m;
  }
};

TEST_F(ReferenceCurve, QuantileRoundTrip) {
  const std::vector<double> x{0.3};
  const auto curve = estimate_cdf(model(), x, 1);
  for (double q = 0.02; q < 0.99; q += 0.02) {
    const auto r = curve_quantile(curve, q);
    ASSERT_FALSE(r.extrapolated) << q;
    EXPECT_LE(std::abs(curve.at(r.value) - q), 0.01) << q;
  }
}

TEST_F(ReferenceCurve, SamplesFollowTheCurve) {
  const std::vector<double> x{-0.4};
  const auto curve = estimate_cdf(model(), x, 0);
  auto s = sample_outcomes(model(), x, 0, 100000, 21);
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double g = curve.at(s[i]);
    ks = std::max({ks, std::abs(g - static_cast<double>(i) / n), std::abs(g - static_cast<double>(i + 1) / n)});
  }
  EXPECT_LE(ks, 0.02);
}

}  // namespace
