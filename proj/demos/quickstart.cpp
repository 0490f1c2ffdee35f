// Fit CCN and FCCN on the logistic scenario and compare them with the
// generating model on a held-out split.
#include <cstdio>
#include <vector>

#include "ccnlab/ccnlab.hpp"

int main() {
  using namespace ccnlab;

  ScenarioConfig sc;
  sc.n = 2000;
  sc.seed = 7;
  const Scenario s = gen_logistic(sc);

  std::vector<std::size_t> train_rows, test_rows;
  train_test_split(s.data.size(), 0.2, sc.seed, train_rows, test_rows);
  const Dataset train = s.data.subset(train_rows);
  const Dataset test = s.data.subset(test_rows);

  TrainConfig tc;
  tc.seed = 7;
  tc.max_steps = 1500;

  const CdfModel ccn = train_ccn(train, tc);
  const CdfModel fccn = train_fccn(train, tc, FccnConfig{});

  const double eps = 0.2;
  std::printf("oracle LL  %.4f\n", true_ll_reference(*s.oracle, test, eps));
  std::printf("CCN LL     %.4f\n", approx_ll(ccn, test, eps));
  std::printf("FCCN LL    %.4f\n", approx_ll(fccn, test, eps));

  // one test unit: estimated vs true 90% interval for each arm
  const auto x = covariate_row(test.covariates, 0);
  for (int arm = 0; arm < 2; ++arm) {
    const double truth = s.oracle->true_quantile(arm, x, 0.95) - s.oracle->true_quantile(arm, x, 0.05);
    std::printf("arm %d  90%% width  fccn %.3f  oracle %.3f\n", arm, interval_width(fccn, x, arm, 0.9), truth);
  }
  return 0;
}
