#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ccnlab/harness/config.hpp"
#include "ccnlab/harness/experiment.hpp"
#include "ccnlab/harness/model_io.hpp"
#include "ccnlab/harness/pool.hpp"

using namespace ccnlab;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny(const std::string& scenario = "logistic") {
  ExperimentConfig c;
  c.scenario = scenario;
  c.data.n = 200;
  c.train.max_steps = 30;
  c.train.hidden_width = 12;
  c.fccn.q_w = 3;
  c.fccn.q_a = 3;
  c.fccn.head_hidden = 12;
  c.fccn.critic_hidden = {8};
  c.eval.grid_size = 64;
  c.eval.utility_samples = 100;
  c.seed = 42;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ccnlab_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Config, JsonRoundTrip) {
  ExperimentConfig c = tiny("edu_like");
  c.data.truncation = std::pair{0.3, 0.7};
  c.data.exp_param = ExpParam::mean;
  c.method = Method::ccn;
  c.train.architecture = Architecture::monotone;
  c.train.hidden_activation = nn::Activation::tanh;
  c.fccn.representation = Representation::learned;
  c.eval.utilities = {"edu_personalized", "cate"};
  const ExperimentConfig back = experiment_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Config, UnknownKeyIsAnError) {
  EXPECT_THROW(experiment_from_json(json{{"bogus", 1}}), Error);
  EXPECT_THROW(experiment_from_json(json{{"method", "xgboost"}}), Error);
}

TEST(Config, Overrides) {
  json j = json::object();
  apply_override(j, "train.max_steps=250");
  apply_override(j, "scenario.name=tail_gamma");
  apply_override(j, "eval.utilities=[\"cate\",\"linear\"]");
  apply_override(j, "scenario.truncation=null");
  const auto c = experiment_from_json(j);
  EXPECT_EQ(c.train.max_steps, 250);
  EXPECT_EQ(c.scenario, "tail_gamma");
  EXPECT_EQ(c.eval.utilities, (std::vector<std::string>{"cate", "linear"}));
  EXPECT_FALSE(c.data.truncation.has_value());
  EXPECT_THROW(apply_override(j, "no_equals_sign"), Error);
  EXPECT_THROW(apply_override(j, "a..b=1"), Error);
}

TEST(Config, ValidationCatchesBadValues) {
  auto c = tiny();
  c.scenario = "nope";
  EXPECT_THROW(c.validate(), Error);
  c = tiny();
  c.test_fraction = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c = tiny();
  c.eval.eps = 0.0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Summaries, SingleValueHasNoStandardError) {
  const auto s = summarize({2.5});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_FALSE(s.se.has_value());
  const auto t = summarize({1.0, 3.0});
  EXPECT_DOUBLE_EQ(t.mean, 2.0);
  EXPECT_DOUBLE_EQ(*t.se, 1.0);
}

TEST(Seeds, ReplicationSeedsAreStable) {
  EXPECT_EQ(replication_seed(5, 0), replication_seed(5, 0));
  EXPECT_NE(replication_seed(5, 0), replication_seed(5, 1));
  EXPECT_NE(replication_seed(5, 0), replication_seed(6, 0));
}

TEST(Split, DisjointAndComplete) {
  std::vector<std::size_t> train, test;
  train_test_split(101, 0.2, 9, train, test);
  EXPECT_EQ(test.size(), 21u);
  std::set<std::size_t> all(train.begin(), train.end());
  for (auto t : test) EXPECT_TRUE(all.insert(t).second);
  EXPECT_EQ(all.size(), 101u);
}

TEST(Pool, EveryIndexOnce) {
  std::vector<std::atomic<int>> hits(97);
  parallel_for(hits.size(), 3, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Experiment, SameSeedSameFiles) {
  auto c = tiny();
  c.replications = 2;
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  c.output_dir = a.string();
  run_experiment(c);
  c.output_dir = b.string();
  run_experiment(c);
  for (const char* f : {"replications.csv", "per_point_0.csv", "per_point_1.csv"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const json agg = json::parse(slurp(a / "aggregate.json"));
  EXPECT_FALSE(agg.at("partial").get<bool>());
  EXPECT_TRUE(agg.at("aggregate").contains("pehe"));
}

TEST(Experiment, CsvHeadersAreFixed) {
  auto c = tiny();
  const fs::path dir = scratch("headers");
  c.output_dir = dir.string();
  run_experiment(c);
  EXPECT_EQ(lines_of(slurp(dir / "replications.csv")).front(), kReplicationHeader);
  EXPECT_EQ(lines_of(slurp(dir / "per_point_0.csv")).front(), kPerPointHeader);
}

TEST(Experiment, OneReplicationHasNullStandardError) {
  const auto r = run_experiment(tiny(), false);
  ASSERT_EQ(r.replications.size(), 1u);
  EXPECT_FALSE(r.aggregate.at("ll").se.has_value());
  EXPECT_TRUE(r.to_json()["aggregate"]["ll"]["se"].is_null());
}

TEST(Experiment, CcnEqualsFccnWithEverythingOff) {
  auto c = tiny();
  c.method = Method::ccn;
  const auto ccn = run_experiment(c, false);
  c.method = Method::fccn;
  c.fccn = variant_config(Variant::ccn, c.fccn);
  const auto off = run_experiment(c, false);
  EXPECT_EQ(ccn.replications[0].metrics.scalars(), off.replications[0].metrics.scalars());
}

TEST(Experiment, MetricsUseTestRowsOnly) {
  auto c = tiny();
  const auto r = run_experiment(c, false);
  std::vector<std::size_t> train, test;
  train_test_split(c.data.n, c.test_fraction, r.replications[0].seed, train, test);
  const std::set<std::size_t> train_set(train.begin(), train.end());
  ASSERT_EQ(r.replications[0].metrics.per_point.size(), test.size());
  for (const auto& p : r.replications[0].metrics.per_point) EXPECT_EQ(train_set.count(p.index), 0u);
}

TEST(Experiment, FailedReplicationMarksPartial) {
  auto c = tiny("edu_like");
  c.data.propensity_scale = 0.0;
  c.data.truncation = std::pair{0.3, 0.7};  // removes every row
  const auto r = run_experiment(c, false);
  EXPECT_TRUE(r.partial);
  EXPECT_EQ(r.failures(), 1);
  EXPECT_FALSE(r.replications[0].error.empty());
}

TEST(Ablation, SixRowsOnPairedData) {
  auto c = tiny();
  c.replications = 2;
  const fs::path dir = scratch("ablation");
  c.output_dir = dir.string();
  const auto t = run_ablation(c);
  ASSERT_EQ(t.rows.size(), 6u);
  for (std::size_t r = 0; r < 2; ++r)
    for (const auto& row : t.rows) {
      ASSERT_TRUE(row.replications[r].ok) << row.replications[r].error;
      EXPECT_EQ(row.replications[r].checksum, t.rows[0].replications[r].checksum);
    }
  const auto lines = lines_of(slurp(dir / "ablation.csv"));
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], kAblationHeader);
  EXPECT_EQ(lines[1].substr(0, 4), "CCN,");
  EXPECT_EQ(lines[6].substr(0, 5), "FCCN,");
}

TEST(Sweep, SampleSizeShape) {
  SweepSpec spec;
  spec.base = tiny();
  spec.values = {150, 200, 250};
  const fs::path dir = scratch("sweep");
  spec.base.output_dir = dir.string();
  const auto r = run_sweep(spec);
  for (const char* method : {"ccn", "fccn", "oracle"}) {
    int ll_rows = 0;
    for (const auto& p : r.points) ll_rows += p.method == method && p.metric == "ll";
    EXPECT_EQ(ll_rows, 3) << method;
  }
  EXPECT_EQ(lines_of(slurp(dir / "sweep.csv")).front(), kSweepHeader);
}

TEST(Sweep, AlphaGridHasSixValues) {
  SweepSpec spec;
  spec.base = tiny();
  spec.base.train.max_steps = 5;
  spec.axis = SweepAxis::alpha;
  spec.values = regularization_grid();
  spec.methods = {Method::fccn};
  const auto r = run_sweep(spec, false);
  std::set<double> values;
  for (const auto& p : r.points)
    if (p.method == "fccn" && p.metric == "ll") values.insert(p.value);
  EXPECT_EQ(values.size(), 6u);
  EXPECT_EQ(*values.begin(), 1e-5);
  EXPECT_EQ(*values.rbegin(), 5e-3);
}

TEST(Sweep, EmptyValuesRejected) {
  SweepSpec spec;
  spec.base = tiny();
  EXPECT_THROW(run_sweep(spec, false), Error);
}

class TrainedModel : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    ScenarioConfig sc;
    sc.n = 300;
    sc.seed = 1;
    scenario_ = new Scenario(gen_multimodal(sc));
    TrainConfig tc;
    tc.max_steps = 40;
    tc.hidden_width = 12;
    FccnConfig fc = tiny().fccn;
    plain_ = new CdfModel(train_fccn(scenario_->data, tc, fc));
    tc.architecture = Architecture::monotone;
    monotone_ = new CdfModel(train_ccn(scenario_->data, tc));
  }
  static void TearDownTestSuite() {
    delete scenario_;
    delete plain_;
    delete monotone_;
  }
  static Scenario* scenario_;
  static CdfModel* plain_;
  static CdfModel* monotone_;
};
Scenario* TrainedModel::scenario_ = nullptr;
CdfModel* TrainedModel::plain_ = nullptr;
CdfModel* TrainedModel::monotone_ = nullptr;

TEST_F(TrainedModel, SketchShapeAndRanges) {
  std::ostringstream os;
  const std::vector<std::size_t> idx{0, 5, 9};
  emit_cdf_sketch(os, *plain_, scenario_->data, idx, 2, scenario_->oracle.get());
  const auto lines = lines_of(os.str());
  ASSERT_EQ(lines.size(), 1u + 3 * 2 * 2);
  EXPECT_EQ(lines[0], kSketchHeader);

  std::ostringstream big;
  emit_cdf_sketch(big, *plain_, scenario_->data, idx, 50, scenario_->oracle.get());
  const auto rows = lines_of(big.str());
  double prev_oracle = -1.0;
  std::string prev_key;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    std::istringstream in(rows[k]);
    std::string index, arm, z, g, o;
    std::getline(in, index, ',');
    std::getline(in, arm, ',');
    std::getline(in, z, ',');
    std::getline(in, g, ',');
    std::getline(in, o, ',');
    const std::string key = index + "/" + arm;
    if (key != prev_key) prev_oracle = -1.0;
    prev_key = key;
    EXPECT_GE(std::stod(g), 0.0);
    EXPECT_LE(std::stod(g), 1.0);
    EXPECT_GE(std::stod(o), prev_oracle);
    prev_oracle = std::stod(o);
  }
  EXPECT_THROW(emit_cdf_sketch(os, *plain_, scenario_->data, std::vector<std::size_t>{100000}, 2), Error);
}

TEST_F(TrainedModel, SaveLoadRoundTrip) {
  for (const CdfModel* m : {plain_, monotone_}) {
    const fs::path dir = scratch("model");
    save_model(dir.string(), *m, tiny().fccn);
    const CdfModel back = load_model(dir.string());
    EXPECT_EQ(back.architecture_tag(), m->architecture_tag());
    EXPECT_EQ(back.use_ps, m->use_ps);
    EXPECT_EQ(back.representation.has_value(), m->representation.has_value());
    for (std::size_t i = 0; i < 10; ++i) {
      const auto x = covariate_row(scenario_->data.covariates, i);
      for (int arm = 0; arm < 2; ++arm) EXPECT_EQ(back.cdf(arm, x, 0.7), m->cdf(arm, x, 0.7));
    }
  }
}

TEST_F(TrainedModel, EvaluationReport) {
  std::vector<std::size_t> rows(scenario_->data.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  EvalConfig ev;
  ev.grid_size = 64;
  ev.utility_samples = 50;
  ev.utilities = {"cate", "linear"};
  const auto r = evaluate_model(*plain_, scenario_->data, rows, scenario_->oracle.get(), ev, 3);
  EXPECT_TRUE(std::isfinite(r.pehe));
  ASSERT_TRUE(r.oracle_ll.has_value());
  EXPECT_GE(*r.oracle_ll, r.ll);
  EXPECT_EQ(r.utility_auc.size(), 2u);
  EXPECT_EQ(r.per_point.size(), rows.size());
  const auto j = r.to_json();
  for (const char* k : {"pehe", "ll", "factual_ll", "oracle_ll", "auc", "utility_auc", "interval_width"})
    EXPECT_TRUE(j.contains(k)) << k;
}
