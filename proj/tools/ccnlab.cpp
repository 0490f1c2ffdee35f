// ccnlab command-line driver: generate, train, eval, ablate, sweep, sketch.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ccnlab/ccnlab.hpp"

namespace fs = std::filesystem;
using namespace ccnlab;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> overrides;
  bool verbose = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON experiment config");
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("overrides", c.overrides, "key.path=value overrides applied after the config file");
  cmd->add_flag("-v,--verbose", c.verbose, "log progress to stderr");
}

ExperimentConfig load_config(const Common& c) {
  json j = c.config_path.empty() ? json::object() : read_json_file(c.config_path);
  for (const auto& o : c.overrides) apply_override(j, o);
  ExperimentConfig cfg = experiment_from_json(j);
  if (c.seed) cfg.seed = *c.seed;
  if (c.out) cfg.output_dir = *c.out;
  log_level() = c.verbose ? LogLevel::info : LogLevel::warning;
  cfg.validate();
  return cfg;
}

std::ofstream open_file(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  return out;
}

void write_json(const fs::path& p, const json& j) { open_file(p) << j.dump(2) << '\n'; }

ScenarioConfig scenario_config(const ExperimentConfig& cfg) {
  ScenarioConfig sc = cfg.data;
  sc.seed = cfg.seed;
  return sc;
}

int cmd_generate(const Common& c) {
  const auto cfg = load_config(c);
  const auto sc = scenario_config(cfg);
  const auto s = generate_scenario(cfg.scenario, sc);
  fs::create_directories(cfg.output_dir);
  write_dataset_csv((fs::path(cfg.output_dir) / "data.csv").string(), s.data);
  write_json(fs::path(cfg.output_dir) / "data.json", scenario_sidecar(cfg.scenario, sc, *s.oracle));
  std::cout << "wrote " << s.data.size() << " rows to " << cfg.output_dir << "\n";
  return 0;
}

int cmd_train(const Common& c) {
  const auto cfg = load_config(c);
  const auto sc = scenario_config(cfg);
  const auto s = generate_scenario(cfg.scenario, sc);
  std::vector<std::size_t> train_rows, test_rows;
  train_test_split(s.data.size(), cfg.test_fraction, cfg.seed, train_rows, test_rows);
  TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;
  TrainReport rep;
  const auto fccn = cfg.effective_fccn();
  const CdfModel model = detail::train_engine(s.data.subset(train_rows), tc, fccn, &rep);
  const fs::path dir(cfg.output_dir);
  save_model((dir / "model").string(), model, fccn);
  write_dataset_csv((dir / "test.csv").string(), s.data.subset(test_rows));
  json side = scenario_sidecar(cfg.scenario, sc, *s.oracle);
  side["test_rows"] = test_rows;
  write_json(dir / "data.json", side);
  write_json(dir / "train_report.json", {{"epochs", rep.epochs},
                                         {"steps", rep.steps},
                                         {"best_epoch", rep.best_epoch},
                                         {"best_holdout_loss", rep.best_holdout_loss},
                                         {"early_stopped", rep.early_stopped}});
  std::cout << "trained " << to_string(cfg.method) << " for " << rep.steps << " steps; model in " << (dir / "model").string()
            << "\n";
  return 0;
}

struct ModelInputs {
  std::string model_dir;
  std::string data_csv;
  std::string sidecar;
};

void add_model_inputs(CLI::App* cmd, ModelInputs& m) {
  cmd->add_option("--model", m.model_dir, "model directory (default <out>/model)");
  cmd->add_option("--data", m.data_csv, "dataset CSV (default <out>/test.csv)");
  cmd->add_option("--sidecar", m.sidecar, "scenario sidecar JSON (default <out>/data.json)");
}

struct Loaded {
  CdfModel model;
  Dataset data;
  std::shared_ptr<const ScenarioOracle> oracle;
  std::vector<std::size_t> rows;
};

Loaded load_inputs(const ExperimentConfig& cfg, const ModelInputs& m) {
  const fs::path dir(cfg.output_dir);
  Loaded l;
  l.model = load_model(m.model_dir.empty() ? (dir / "model").string() : m.model_dir);
  l.data = read_dataset_csv(m.data_csv.empty() ? (dir / "test.csv").string() : m.data_csv);
  const fs::path side = m.sidecar.empty() ? dir / "data.json" : fs::path(m.sidecar);
  if (fs::exists(side)) {
    const json j = read_json_file(side.string());
    l.oracle = oracle_from_sidecar(j);
    if (j.contains("test_rows") && m.data_csv.empty()) l.rows = j.at("test_rows").get<std::vector<std::size_t>>();
  }
  if (l.rows.size() != l.data.size()) {
    l.rows.resize(l.data.size());
    for (std::size_t i = 0; i < l.rows.size(); ++i) l.rows[i] = i;
  }
  return l;
}

int cmd_eval(const Common& c, const ModelInputs& m) {
  const auto cfg = load_config(c);
  const auto l = load_inputs(cfg, m);
  const auto report = evaluate_model(l.model, l.data, l.rows, l.oracle.get(), cfg.eval, cfg.seed);
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  write_json(dir / "metrics.json", report.to_json());
  auto out = open_file(dir / "per_point.csv");
  write_per_point_csv(out, report);
  std::cout << report.to_json().dump(2) << "\n";
  return 0;
}

int cmd_sketch(const Common& c, const ModelInputs& m, std::vector<std::size_t> indices, int grid) {
  const auto cfg = load_config(c);
  const auto l = load_inputs(cfg, m);
  if (indices.empty())
    for (std::size_t i = 0; i < std::min<std::size_t>(5, l.data.size()); ++i) indices.push_back(i);
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  auto out = open_file(dir / "cdf_sketch.csv");
  emit_cdf_sketch(out, l.model, l.data, indices, grid, l.oracle.get());
  std::cout << "wrote " << (dir / "cdf_sketch.csv").string() << "\n";
  return 0;
}

int cmd_run(const Common& c) {
  const auto res = run_experiment(load_config(c));
  std::cout << res.to_json().dump(2) << "\n";
  return res.partial ? 1 : 0;
}

int cmd_ablate(const Common& c) {
  const auto cfg = load_config(c);
  const auto table = run_ablation(cfg);
  std::ifstream in(fs::path(cfg.output_dir) / "ablation.csv");
  std::cout << in.rdbuf();
  return table.failures() > 0 ? 1 : 0;
}

int cmd_sweep(const Common& c, const std::string& axis, const std::vector<double>& values,
              const std::vector<std::string>& methods) {
  SweepSpec spec;
  spec.base = load_config(c);
  spec.axis = sweep_axis_from_string(axis);
  spec.values = values;
  if (!methods.empty()) {
    spec.methods.clear();
    for (const auto& m : methods) spec.methods.push_back(method_from_string(m));
  }
  const auto res = run_sweep(spec);
  std::ifstream in(fs::path(spec.base.output_dir) / "sweep.csv");
  std::cout << in.rdbuf();
  return res.failures > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ccnlab: conditional CDF networks for potential-outcome distributions"};
  app.require_subcommand(1);

  Common gen_c, train_c, eval_c, run_c, ablate_c, sweep_c, sketch_c;
  ModelInputs eval_m, sketch_m;
  std::string axis;
  std::vector<double> values;
  std::vector<std::string> methods;
  std::vector<std::size_t> indices;
  int grid = 64;

  auto* gen = app.add_subcommand("generate", "write a scenario dataset (data.csv) and its oracle sidecar (data.json)");
  add_common(gen, gen_c);
  auto* train = app.add_subcommand("train", "generate, split, train one model, save it under <out>/model");
  add_common(train, train_c);
  auto* eval = app.add_subcommand("eval", "score a saved model on a dataset");
  add_common(eval, eval_c);
  add_model_inputs(eval, eval_m);
  auto* run = app.add_subcommand("run", "replicated experiment with mean and standard error");
  add_common(run, run_c);
  auto* ablate = app.add_subcommand("ablate", "all six adjustment variants on paired data");
  add_common(ablate, ablate_c);
  auto* sweep = app.add_subcommand("sweep", "metric curves along one axis");
  add_common(sweep, sweep_c);
  sweep->add_option("--axis", axis, "sample_size | alpha | beta | noise_dims | propensity_scale")->required();
  sweep->add_option("--values", values, "axis values")->required();
  sweep->add_option("--methods", methods, "ccn and/or fccn (default both)");
  auto* sketch = app.add_subcommand("sketch", "CDF sketch CSV of a saved model against the oracle");
  add_common(sketch, sketch_c);
  add_model_inputs(sketch, sketch_m);
  sketch->add_option("--indices", indices, "dataset rows to sketch (default first 5)");
  sketch->add_option("--grid", grid, "grid points per curve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen) return cmd_generate(gen_c);
    if (*train) return cmd_train(train_c);
    if (*eval) return cmd_eval(eval_c, eval_m);
    if (*run) return cmd_run(run_c);
    if (*ablate) return cmd_ablate(ablate_c);
    if (*sweep) return cmd_sweep(sweep_c, axis, values, methods);
    if (*sketch) return cmd_sketch(sketch_c, sketch_m, indices, grid);
  } catch (const std::exception& e) {
    std::cerr << "ccnlab: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
