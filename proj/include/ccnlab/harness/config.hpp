#pragma once

#include <nlohmann/json.hpp>

#include <fstream>
#include <string>
#include <vector>

#include "ccnlab/ccn/inference.hpp"
#include "ccnlab/ccn/train.hpp"
#include "ccnlab/core/error.hpp"
#include "ccnlab/fccn/heads.hpp"
#include "ccnlab/scenarios/generators.hpp"
#include "ccnlab/scenarios/io.hpp"

namespace ccnlab {


enum class Method { ccn, fccn };

inline std::string to_string(Method m) { return m == Method::ccn ? "ccn" : "fccn"; }

inline Method method_from_string(const std::string& s) {
  if (s == "ccn") return Method::ccn;
  if (s == "fccn") return Method::fccn;
  throw Error("unknown method '" + s + "' (expected ccn or fccn)");
}

struct EvalConfig {
  double eps = 0.2;
  std::vector<std::string> utilities{"cate"};
  double coverage = 0.9;
  int utility_samples = 3000;
  int grid_size = kDefaultGridSize;

  void validate() const {
    require(eps > 0.0, "eval.eps must be positive");
    require(coverage > 0.0 && coverage < 1.0, "eval.coverage must lie in (0, 1)");
    require(utility_samples >= 1, "eval.utility_samples must be at least 1");
    require(grid_size >= 2, "eval.grid_size must be at least 2");
  }
};

struct ExperimentConfig {
  std::string scenario = "logistic";
  ScenarioConfig data;
  Method method = Method::fccn;
  TrainConfig train;
  FccnConfig fccn;
  int replications = 1;
  std::uint64_t seed = 0;  // master seed
  double test_fraction = 0.2;
  EvalConfig eval;
  std::string output_dir = "ccnlab_out";

  /// The FCCN settings actually used: CCN runs ignore `fccn`.
  FccnConfig effective_fccn() const { return method == Method::ccn ? FccnConfig::disabled() : fccn; }

  void validate() const {
    require(replications >= 1, "replications must be at least 1");
    require(test_fraction > 0.0 && test_fraction < 1.0, "test_fraction must lie in (0, 1)");
    require(data.n >= 2, "scenario.n must be at least 2");
    bool known = false;
    for (const auto& s : scenario_names()) known = known || s == scenario;
    require(known, "unknown scenario '" + scenario + "'");
    data.validate();
    train.validate();
    effective_fccn().validate();
    eval.validate();
  }
};

// JSON conversion. Every key is optional on input; missing keys keep defaults.

inline json to_json(const TrainConfig& c) {
  return {{"max_epochs", c.max_epochs},
          {"max_steps", c.max_steps},
          {"batch_size", c.batch_size},
          {"z_draws", c.z_draws},
          {"holdout_fraction", c.holdout_fraction},
          {"patience", c.patience},
          {"padding_fraction", c.padding_fraction},
          {"architecture", to_string(c.architecture)},
          {"hidden_width", c.hidden_width},
          {"monotone_components", c.monotone_components},
          {"hidden_activation", nn::to_string(c.hidden_activation)},
          {"learning_rate", c.adam.learning_rate},
          {"weight_decay", c.adam.weight_decay},
          {"standardize_covariates", c.standardize_covariates}};
}

inline void from_json_into(const json& j, TrainConfig& c) {
  c.max_epochs = j.value("max_epochs", c.max_epochs);
  c.max_steps = j.value("max_steps", c.max_steps);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.z_draws = j.value("z_draws", c.z_draws);
  c.holdout_fraction = j.value("holdout_fraction", c.holdout_fraction);
  c.patience = j.value("patience", c.patience);
  c.padding_fraction = j.value("padding_fraction", c.padding_fraction);
  if (j.contains("architecture")) c.architecture = architecture_from_string(j.at("architecture").get<std::string>());
  c.hidden_width = j.value("hidden_width", c.hidden_width);
  c.monotone_components = j.value("monotone_components", c.monotone_components);
  if (j.contains("hidden_activation"))
    c.hidden_activation = nn::activation_from_string(j.at("hidden_activation").get<std::string>());
  c.adam.learning_rate = j.value("learning_rate", c.adam.learning_rate);
  c.adam.weight_decay = j.value("weight_decay", c.adam.weight_decay);
  c.standardize_covariates = j.value("standardize_covariates", c.standardize_covariates);
}

inline json to_json(const FccnConfig& c) {
  return {{"alpha", c.alpha},
          {"beta", c.beta},
          {"wass", c.wass},
          {"assign", c.assign},
          {"ps", c.ps},
          {"representation", c.representation == Representation::raw ? "raw" : "learned"},
          {"critic_steps", c.critic_steps},
          {"clip_bound", c.clip_bound},
          {"critic_learning_rate", c.critic_learning_rate},
          {"q_w", c.q_w},
          {"q_a", c.q_a},
          {"head_hidden", c.head_hidden},
          {"critic_hidden", c.critic_hidden}};
}

inline void from_json_into(const json& j, FccnConfig& c) {
  c.alpha = j.value("alpha", c.alpha);
  c.beta = j.value("beta", c.beta);
  c.wass = j.value("wass", c.wass);
  c.assign = j.value("assign", c.assign);
  c.ps = j.value("ps", c.ps);
  if (j.contains("representation")) {
    const auto s = j.at("representation").get<std::string>();
    require(s == "raw" || s == "learned", "representation must be 'raw' or 'learned'");
    c.representation = s == "raw" ? Representation::raw : Representation::learned;
  }
  c.critic_steps = j.value("critic_steps", c.critic_steps);
  c.clip_bound = j.value("clip_bound", c.clip_bound);
  c.critic_learning_rate = j.value("critic_learning_rate", c.critic_learning_rate);
  c.q_w = j.value("q_w", c.q_w);
  c.q_a = j.value("q_a", c.q_a);
  c.head_hidden = j.value("head_hidden", c.head_hidden);
  if (j.contains("critic_hidden")) c.critic_hidden = j.at("critic_hidden").get<std::vector<int>>();
}

inline json to_json(const EvalConfig& c) {
  return {{"eps", c.eps},
          {"utilities", c.utilities},
          {"coverage", c.coverage},
          {"utility_samples", c.utility_samples},
          {"grid_size", c.grid_size}};
}

inline void from_json_into(const json& j, EvalConfig& c) {
  c.eps = j.value("eps", c.eps);
  if (j.contains("utilities")) c.utilities = j.at("utilities").get<std::vector<std::string>>();
  c.coverage = j.value("coverage", c.coverage);
  c.utility_samples = j.value("utility_samples", c.utility_samples);
  c.grid_size = j.value("grid_size", c.grid_size);
}

inline json to_json(const ExperimentConfig& c) {
  json scenario = to_json(c.data);
  scenario["name"] = c.scenario;
  return {{"scenario", scenario},
          {"method", to_string(c.method)},
          {"train", to_json(c.train)},
          {"fccn", to_json(c.fccn)},
          {"replications", c.replications},
          {"seed", c.seed},
          {"test_fraction", c.test_fraction},
          {"eval", to_json(c.eval)},
          {"output_dir", c.output_dir}};
}

inline ExperimentConfig experiment_from_json(const json& j) {
  static const std::vector<std::string> known{"scenario", "method", "train", "fccn", "replications",
                                              "seed", "test_fraction", "eval", "output_dir"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw Error("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  if (j.contains("scenario")) {
    const auto& s = j.at("scenario");
    c.scenario = s.value("name", c.scenario);
    from_json_into(s, c.data);
  }
  if (j.contains("method")) c.method = method_from_string(j.at("method").get<std::string>());
  if (j.contains("train")) from_json_into(j.at("train"), c.train);
  if (j.contains("fccn")) from_json_into(j.at("fccn"), c.fccn);
  c.replications = j.value("replications", c.replications);
  c.seed = j.value("seed", c.seed);
  c.test_fraction = j.value("test_fraction", c.test_fraction);
  if (j.contains("eval")) from_json_into(j.at("eval"), c.eval);
  c.output_dir = j.value("output_dir", c.output_dir);
  return c;
}

/// Applies "a.b.c=value" to a JSON tree; value is parsed as JSON when it can
/// be, otherwise kept as a string.
inline void apply_override(json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string::npos && eq > 0, "override '" + assignment + "' is not of the form key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    require(!key.empty(), "override '" + assignment + "' has an empty key");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error("config file '" + path + "' is not valid JSON");
  return j;
}

}  // namespace ccnlab
