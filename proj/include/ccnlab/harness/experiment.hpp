#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccnlab/ccn/inference.hpp"
#include "ccnlab/fccn/train.hpp"
#include "ccnlab/harness/config.hpp"
#include "ccnlab/harness/pool.hpp"
#include "ccnlab/metrics/metrics.hpp"
#include "ccnlab/metrics/utility.hpp"
#include "ccnlab/scenarios/generators.hpp"

namespace ccnlab {

struct PointRecord {
  std::size_t index = 0;  // row of the generated dataset
  double tau_hat = 0.0;
  double tau = 0.0;
  double contrast_hat = 0.0;
  double contrast_true = 0.0;
  int label = 0;
};

struct MetricsReport {
  double pehe = 0.0;
  double ll = 0.0;
  double factual_ll = 0.0;
  std::optional<double> oracle_ll;
  std::optional<double> auc;  // first configured utility
  std::map<std::string, std::optional<double>> utility_auc;
  double interval_width[2] = {0.0, 0.0};  // mean over test rows, per arm
  std::vector<PointRecord> per_point;

  /// Flat name -> value view used for aggregation; undefined metrics are omitted.
  std::map<std::string, double> scalars() const {
    std::map<std::string, double> m{{"pehe", pehe},
                                    {"ll", ll},
                                    {"factual_ll", factual_ll},
                                    {"interval_width_0", interval_width[0]},
                                    {"interval_width_1", interval_width[1]}};
    if (oracle_ll) m["oracle_ll"] = *oracle_ll;
    if (auc) m["auc"] = *auc;
    for (const auto& [name, v] : utility_auc)
      if (v) m["auc_" + name] = *v;
    return m;
  }

  json to_json() const {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json u = json::object();
    for (const auto& [name, v] : utility_auc) u[name] = opt(v);
    return {{"pehe", pehe},
            {"ll", ll},
            {"factual_ll", factual_ll},
            {"oracle_ll", opt(oracle_ll)},
            {"auc", opt(auc)},
            {"utility_auc", u},
            {"interval_width", {interval_width[0], interval_width[1]}}};
  }
};

inline constexpr const char* kPerPointHeader = "index,tau_hat,tau,contrast_hat,contrast_true,label";

inline void write_per_point_csv(std::ostream& os, const MetricsReport& r) {
  os << kPerPointHeader << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : r.per_point)
    os << p.index << ',' << p.tau_hat << ',' << p.tau << ',' << p.contrast_hat << ',' << p.contrast_true << ','
       << p.label << '\n';
}

/// Scores a trained model on held-out rows. `rows` maps test rows back to the
/// generated dataset for the per-point table.
inline MetricsReport evaluate_model(const CdfModel& model, const Dataset& test, std::span<const std::size_t> rows,
                                    const ScenarioOracle* oracle, const EvalConfig& eval, std::uint64_t seed) {
  eval.validate();
  require(test.size() > 0, "evaluation needs a non-empty test set");
  require_dims(static_cast<long>(test.size()), static_cast<long>(rows.size()), "test row map");
  MetricsReport r;
  const auto n = test.size();
  const auto curves0 = estimate_cdfs(model, test.covariates, 0, eval.grid_size);
  const auto curves1 = estimate_cdfs(model, test.covariates, 1, eval.grid_size);

  std::vector<double> tau_hat(n), tau(n);
  std::size_t extrapolated = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tau_hat[i] = curve_mean(curves1[i]) - curve_mean(curves0[i]);
    for (int arm = 0; arm < 2; ++arm) {
      bool ex = false;
      r.interval_width[arm] += curve_interval_width(arm == 0 ? curves0[i] : curves1[i], eval.coverage, &ex) /
                               static_cast<double>(n);
      extrapolated += ex ? 1 : 0;
    }
  }
  if (extrapolated > 0) {
    log_warning("interval widths: " + std::to_string(extrapolated) + " of " + std::to_string(2 * n) +
                " intervals extrapolated beyond the CDF grid");
  }
  r.factual_ll = factual_ll(model, test, eval.eps);
  if (test.potential) r.ll = approx_ll(model, test, eval.eps);
  else r.ll = std::numeric_limits<double>::quiet_NaN();

  if (oracle) {
    for (std::size_t i = 0; i < n; ++i) tau[i] = oracle->true_cate(covariate_row(test.covariates, i));
    r.pehe = pehe(tau_hat, tau);
    if (test.potential) r.oracle_ll = approx_ll(OracleModel{oracle}, test, eval.eps);
  } else {
    r.pehe = std::numeric_limits<double>::quiet_NaN();
  }

  r.per_point.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.per_point[i] = {rows[i], tau_hat[i], oracle ? tau[i] : 0.0, 0.0, 0.0, 0};

  for (std::size_t u = 0; u < eval.utilities.size(); ++u) {
    const auto& name = eval.utilities[u];
    UtilityContext ctx{&test.covariates, oracle, derive_seed(seed, streams::kUtility, 0)};
    const UtilitySpec spec = make_utility(name, ctx);
    std::vector<double> hat(n), truth(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = covariate_row(test.covariates, i);
      hat[i] = curve_utility_contrast(curves0[i], curves1[i], x, spec, i, eval.utility_samples,
                                      derive_seed(seed, streams::kUtility, 1 + u));
      truth[i] = oracle ? oracle_utility_contrast(*oracle, x, spec, i) : 0.0;
    }
    std::optional<double> auc;
    if (oracle) {
      try {
        auc = decision_auc(hat, truth);
      } catch (const Error& e) {
        log_warning(std::string("utility '") + name + "': " + e.what());
      }
    }
    r.utility_auc[name] = auc;
    if (u == 0) {
      r.auc = auc;
      for (std::size_t i = 0; i < n; ++i) {
        r.per_point[i].contrast_hat = hat[i];
        r.per_point[i].contrast_true = truth[i];
        r.per_point[i].label = truth[i] > 0.0 ? 1 : 0;
      }
    }
  }
  return r;
}

/// Random train/test split of the generated rows.
inline void train_test_split(std::size_t n, double test_fraction, std::uint64_t seed, std::vector<std::size_t>& train,
                             std::vector<std::size_t>& test) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng = make_rng(seed, streams::kSplit, 1);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_test = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n))));
  require(n_test < n, "test split leaves no training rows");
  test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
}

struct ReplicationResult {
  int replication = 0;
  std::uint64_t seed = 0;
  std::uint64_t checksum = 0;
  bool ok = false;
  std::string error;
  MetricsReport metrics;
};

inline std::uint64_t replication_seed(std::uint64_t master, int replication) {
  return derive_seed(master, streams::kReplication, static_cast<std::uint64_t>(replication));
}

/// Generates replication r's data, trains with `fccn`, and scores the test rows.
inline ReplicationResult run_replication(const ExperimentConfig& cfg, int replication, const FccnConfig& fccn) {
  ReplicationResult res;
  res.replication = replication;
  res.seed = replication_seed(cfg.seed, replication);
  try {
    ScenarioConfig sc = cfg.data;
    sc.seed = res.seed;
    const Scenario s = generate_scenario(cfg.scenario, sc);
    res.checksum = s.data.checksum();
    std::vector<std::size_t> train_rows, test_rows;
    train_test_split(s.data.size(), cfg.test_fraction, res.seed, train_rows, test_rows);
    const Dataset train = s.data.subset(train_rows);
    const Dataset test = s.data.subset(test_rows);
    TrainConfig tc = cfg.train;
    tc.seed = res.seed;
    const CdfModel model = detail::train_engine(train, tc, fccn);
    res.metrics = evaluate_model(model, test, test_rows, s.oracle.get(), cfg.eval, res.seed);
    res.ok = true;
  } catch (const std::exception& e) {
    res.error = e.what();
    log_warning("replication " + std::to_string(replication) + " failed: " + res.error);
  }
  return res;
}

struct MetricSummary {
  double mean = 0.0;
  std::optional<double> se;  // absent for a single value
  int count = 0;
};

inline MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) {
    s.mean = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.se = std::sqrt(ss / static_cast<double>(values.size() - 1)) / std::sqrt(static_cast<double>(values.size()));
  }
  return s;
}

struct ExperimentResult {
  std::vector<ReplicationResult> replications;
  std::map<std::string, MetricSummary> aggregate;
  bool partial = false;

  int failures() const {
    int f = 0;
    for (const auto& r : replications) f += r.ok ? 0 : 1;
    return f;
  }

  json to_json() const {
    json agg = json::object();
    for (const auto& [name, s] : aggregate)
      agg[name] = {{"mean", s.mean}, {"se", s.se ? json(*s.se) : json(nullptr)}, {"n", s.count}};
    return {{"aggregate", agg}, {"partial", partial}, {"failed_replications", failures()},
            {"replications", static_cast<int>(replications.size())}};
  }
};

inline std::map<std::string, MetricSummary> aggregate_metrics(const std::vector<ReplicationResult>& reps) {
  std::map<std::string, std::vector<double>> values;
  for (const auto& r : reps) {
    if (!r.ok) continue;
    for (const auto& [name, v] : r.metrics.scalars())
      if (std::isfinite(v)) values[name].push_back(v);
  }
  std::map<std::string, MetricSummary> out;
  for (const auto& [name, vs] : values) out[name] = summarize(vs);
  return out;
}

inline constexpr const char* kReplicationHeader =
    "replication,seed,status,checksum,pehe,ll,factual_ll,oracle_ll,auc,interval_width_0,interval_width_1,error";

namespace detail {

inline std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

inline std::string csv_number(const std::optional<double>& v) { return v ? csv_number(*v) : ""; }

inline std::string csv_text(std::string s) {
  for (auto& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace detail

inline void write_replication_rows(std::ostream& os, const std::vector<ReplicationResult>& reps) {
  os << kReplicationHeader << '\n';
  for (const auto& r : reps) {
    const auto& m = r.metrics;
    os << r.replication << ',' << r.seed << ',' << (r.ok ? "ok" : "failed") << ',' << r.checksum << ',';
    if (r.ok) {
      os << detail::csv_number(m.pehe) << ',' << detail::csv_number(m.ll) << ',' << detail::csv_number(m.factual_ll)
         << ',' << detail::csv_number(m.oracle_ll) << ',' << detail::csv_number(m.auc) << ','
         << detail::csv_number(m.interval_width[0]) << ',' << detail::csv_number(m.interval_width[1]) << ',';
    } else {
      os << ",,,,,,,";
    }
    os << detail::csv_text(r.error) << '\n';
  }
}

/// Runs cfg.replications isolated replications on the worker pool. When
/// `write_outputs` is set, writes replications.csv, aggregate.json and
/// per_point_<r>.csv under cfg.output_dir.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_outputs = true) {
  cfg.validate();
  ExperimentResult result;
  result.replications.resize(static_cast<std::size_t>(cfg.replications));
  const FccnConfig fccn = cfg.effective_fccn();
  parallel_for(result.replications.size(), worker_count(),
               [&](std::size_t r) { result.replications[r] = run_replication(cfg, static_cast<int>(r), fccn); });
  result.aggregate = aggregate_metrics(result.replications);
  result.partial = result.failures() > 0;

  if (write_outputs) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    {
      auto out = detail::open_output(dir / "replications.csv");
      write_replication_rows(out, result.replications);
    }
    for (const auto& r : result.replications) {
      if (!r.ok) continue;
      auto out = detail::open_output(dir / ("per_point_" + std::to_string(r.replication) + ".csv"));
      write_per_point_csv(out, r.metrics);
    }
    json j = result.to_json();
    j["config"] = to_json(cfg);
    auto out = detail::open_output(dir / "aggregate.json");
    out << j.dump(2) << '\n';
  }
  return result;
}

struct AblationRow {
  Variant variant = Variant::ccn;
  std::vector<ReplicationResult> replications;
  std::map<std::string, MetricSummary> aggregate;
};

struct AblationTable {
  std::vector<AblationRow> rows;

  int failures() const {
    int f = 0;
    for (const auto& row : rows)
      for (const auto& r : row.replications) f += r.ok ? 0 : 1;
    return f;
  }
};

inline constexpr const char* kAblationHeader =
    "variant,pehe_mean,pehe_se,ll_mean,ll_se,auc_mean,auc_se,replications,failed";

/// All six adjustment subsets on paired data: replication r of every variant
/// sees the same generated dataset and the same training seed.
inline AblationTable run_ablation(const ExperimentConfig& cfg, bool write_outputs = true) {
  cfg.validate();
  const auto& variants = all_variants();
  const auto reps = static_cast<std::size_t>(cfg.replications);
  AblationTable table;
  table.rows.resize(variants.size());
  for (std::size_t v = 0; v < variants.size(); ++v) {
    table.rows[v].variant = variants[v];
    table.rows[v].replications.resize(reps);
  }
  parallel_for(variants.size() * reps, worker_count(), [&](std::size_t k) {
    const auto v = k / reps, r = k % reps;
    table.rows[v].replications[r] =
        run_replication(cfg, static_cast<int>(r), variant_config(variants[v], cfg.fccn));
  });
  for (auto& row : table.rows) row.aggregate = aggregate_metrics(row.replications);

  if (write_outputs) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    auto out = detail::open_output(dir / "ablation.csv");
    out << kAblationHeader << '\n';
    for (const auto& row : table.rows) {
      out << to_string(row.variant);
      for (const char* m : {"pehe", "ll", "auc"}) {
        const auto it = row.aggregate.find(m);
        if (it == row.aggregate.end()) out << ",,";
        else out << ',' << detail::csv_number(it->second.mean) << ',' << detail::csv_number(it->second.se);
      }
      int failed = 0;
      for (const auto& r : row.replications) failed += r.ok ? 0 : 1;
      out << ',' << row.replications.size() << ',' << failed << '\n';
    }
    auto pairs = detail::open_output(dir / "ablation_replications.csv");
    pairs << "variant," << kReplicationHeader << '\n';
    for (const auto& row : table.rows) {
      std::ostringstream body;
      write_replication_rows(body, row.replications);
      std::istringstream lines(body.str());
      std::string line;
      std::getline(lines, line);  // header
      while (std::getline(lines, line)) pairs << to_string(row.variant) << ',' << line << '\n';
    }
  }
  return table;
}

enum class SweepAxis { sample_size, alpha, beta, noise_dims, propensity_scale };

inline std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::sample_size: return "sample_size";
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::beta: return "beta";
    case SweepAxis::noise_dims: return "noise_dims";
    case SweepAxis::propensity_scale: return "propensity_scale";
  }
  return "?";
}

inline SweepAxis sweep_axis_from_string(const std::string& s) {
  for (auto a : {SweepAxis::sample_size, SweepAxis::alpha, SweepAxis::beta, SweepAxis::noise_dims,
                 SweepAxis::propensity_scale})
    if (to_string(a) == s) return a;
  throw Error("unknown sweep axis '" + s + "'");
}

struct SweepSpec {
  SweepAxis axis = SweepAxis::sample_size;
  std::vector<double> values;
  ExperimentConfig base;
  std::vector<Method> methods{Method::ccn, Method::fccn};

  void validate() const {
    require(!values.empty(), "sweep needs at least one axis value");
    require(!methods.empty(), "sweep needs at least one method");
    base.validate();
  }

  ExperimentConfig at(double value, Method method) const {
    ExperimentConfig c = base;
    c.method = method;
    switch (axis) {
      case SweepAxis::sample_size:
        require(value >= 2 && value == std::floor(value), "sample_size values must be integers >= 2");
        c.data.n = static_cast<std::size_t>(value);
        break;
      case SweepAxis::alpha: c.fccn.alpha = value; break;
      case SweepAxis::beta: c.fccn.beta = value; break;
      case SweepAxis::noise_dims:
        require(value >= 0 && value == std::floor(value), "noise_dims values must be non-negative integers");
        c.data.noise_dims = static_cast<int>(value);
        break;
      case SweepAxis::propensity_scale: c.data.propensity_scale = value; break;
    }
    return c;
  }
};

struct SweepPoint {
  double value = 0.0;
  std::string method;  // "ccn", "fccn" or "oracle"
  std::string metric;
  MetricSummary summary;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  int failures = 0;
};

inline constexpr const char* kSweepHeader = "axis,value,method,metric,mean,se,n";

/// Long-format curve table: one row per (value, method, metric), plus an
/// "oracle" LL row per value when the scenario has a reference.
inline SweepResult run_sweep(const SweepSpec& spec, bool write_outputs = true) {
  spec.validate();
  SweepResult out;
  for (double value : spec.values) {
    std::optional<MetricSummary> oracle;
    for (Method m : spec.methods) {
      const ExperimentResult r = run_experiment(spec.at(value, m), false);
      out.failures += r.failures();
      for (const char* metric : {"pehe", "ll", "auc"}) {
        const auto it = r.aggregate.find(metric);
        if (it != r.aggregate.end()) out.points.push_back({value, to_string(m), metric, it->second});
      }
      if (!oracle) {
        const auto it = r.aggregate.find("oracle_ll");
        if (it != r.aggregate.end()) oracle = it->second;
      }
    }
    if (oracle) out.points.push_back({value, "oracle", "ll", *oracle});
  }
  if (write_outputs) {
    namespace fs = std::filesystem;
    const fs::path dir(spec.base.output_dir);
    fs::create_directories(dir);
    auto csv = detail::open_output(dir / "sweep.csv");
    csv << kSweepHeader << '\n';
    for (const auto& p : out.points)
      csv << to_string(spec.axis) << ',' << detail::csv_number(p.value) << ',' << p.method << ',' << p.metric << ','
          << detail::csv_number(p.summary.mean) << ',' << detail::csv_number(p.summary.se) << ',' << p.summary.count
          << '\n';
  }
  return out;
}

inline constexpr const char* kSketchHeader = "index,arm,z,g_hat,oracle_cdf";

/// Isotonic CDF sketches of both arms at the given rows, next to the oracle
/// CDF when one is supplied (the column is left empty otherwise).
inline void emit_cdf_sketch(std::ostream& os, const CdfModel& model, const Dataset& data,
                            std::span<const std::size_t> indices, int grid_size, const ScenarioOracle* oracle = nullptr) {
  require(grid_size >= 2, "sketch grid needs at least two points");
  for (auto i : indices)
    require(i < data.size(), "sketch index " + std::to_string(i) + " is outside the dataset");
  os << kSketchHeader << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  const Matrix rows = data.subset(indices).covariates;
  for (int arm = 0; arm < 2; ++arm) {
    const auto curves = estimate_cdfs(model, rows, arm, grid_size);
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const auto x = covariate_row(rows, k);
      const auto& c = curves[k];
      for (std::size_t j = 0; j < c.z_grid.size(); ++j) {
        os << indices[k] << ',' << arm << ',' << c.z_grid[j] << ',' << c.probs[j] << ',';
        if (oracle) os << oracle->true_cdf(arm, x, c.z_grid[j]);
        os << '\n';
      }
    }
  }
}

}  // namespace ccnlab
