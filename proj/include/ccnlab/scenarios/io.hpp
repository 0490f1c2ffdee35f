#pragma once

#include <nlohmann/json.hpp>

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ccnlab/core/dataset.hpp"
#include "ccnlab/core/error.hpp"
#include "ccnlab/scenarios/generators.hpp"

namespace ccnlab {

using nlohmann::json;

inline json to_json(const ScenarioConfig& c) {
  json j{{"n", c.n},
         {"noise_dims", c.noise_dims},
         {"propensity_scale", c.propensity_scale},
         {"exp_param", c.exp_param == ExpParam::rate ? "rate" : "mean"}};
  j["truncation"] = c.truncation ? json::array({c.truncation->first, c.truncation->second}) : json(nullptr);
  return j;
}

inline void from_json_into(const json& j, ScenarioConfig& c) {
  c.n = j.value("n", c.n);
  c.noise_dims = j.value("noise_dims", c.noise_dims);
  c.propensity_scale = j.value("propensity_scale", c.propensity_scale);
  if (j.contains("exp_param")) {
    const auto s = j.at("exp_param").get<std::string>();
    require(s == "rate" || s == "mean", "exp_param must be 'rate' or 'mean'");
    c.exp_param = s == "rate" ? ExpParam::rate : ExpParam::mean;
  }
  if (j.contains("truncation")) {
    const auto& t = j.at("truncation");
    if (t.is_null()) c.truncation.reset();
    else {
      require(t.is_array() && t.size() == 2, "truncation must be [low, high] or null");
      c.truncation = std::pair{t[0].get<double>(), t[1].get<double>()};
    }
  }
}

/// Header x1..xp,t,y and, when both potential outcomes are known, y0,y1.
inline void write_dataset_csv(std::ostream& os, const Dataset& d) {
  const auto p = d.dim();
  for (std::size_t j = 0; j < p; ++j) os << 'x' << j + 1 << ',';
  os << "t,y";
  if (d.potential) os << ",y0,y1";
  os << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < p; ++j) os << d.covariates(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) << ',';
    os << d.treatment[i] << ',' << d.outcome[i];
    if (d.potential) os << ',' << d.potential->y0[i] << ',' << d.potential->y1[i];
    os << '\n';
  }
}

inline void write_dataset_csv(const std::string& path, const Dataset& d) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_dataset_csv(out, d);
}

inline Dataset read_dataset_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error("dataset CSV is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  std::size_t p = 0;
  while (p < header.size() && header[p] == "x" + std::to_string(p + 1)) ++p;
  require(header.size() >= p + 2 && header[p] == "t" && header[p + 1] == "y",
          "dataset CSV header must be x1..xp,t,y[,y0,y1]");
  const bool has_potential = header.size() == p + 4 && header[p + 2] == "y0" && header[p + 3] == "y1";
  require(header.size() == p + 2 || has_potential, "dataset CSV has unexpected trailing columns");

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> r;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        r.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error("dataset CSV line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
      }
    }
    require(r.size() == header.size(), "dataset CSV line " + std::to_string(line_no) + " has the wrong number of fields");
    rows.push_back(std::move(r));
  }
  Dataset d;
  const auto n = rows.size();
  d.covariates.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  if (has_potential) d.potential.emplace();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) d.covariates(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    d.treatment.push_back(static_cast<int>(rows[i][p]));
    d.outcome.push_back(rows[i][p + 1]);
    if (has_potential) {
      d.potential->y0.push_back(rows[i][p + 2]);
      d.potential->y1.push_back(rows[i][p + 3]);
    }
  }
  d.validate();
  return d;
}

inline Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_dataset_csv(in);
}

/// Everything needed to rebuild the oracle of a generated dataset.
inline json scenario_sidecar(const std::string& name, const ScenarioConfig& cfg, const ScenarioOracle& oracle) {
  return {{"scenario", name}, {"seed", cfg.seed}, {"config", to_json(cfg)}, {"oracle", oracle.params()}};
}

/// Regenerates the oracle described by a sidecar and checks its parameters.
inline std::shared_ptr<const ScenarioOracle> oracle_from_sidecar(const json& sidecar) {
  ScenarioConfig cfg;
  from_json_into(sidecar.at("config"), cfg);
  cfg.seed = sidecar.at("seed").get<std::uint64_t>();
  // the oracle does not depend on n or truncation; a small draw is enough
  cfg.n = 256;
  cfg.truncation.reset();
  auto s = generate_scenario(sidecar.at("scenario").get<std::string>(), cfg);
  require(s.oracle->params() == sidecar.at("oracle"), "sidecar oracle parameters do not match the regenerated oracle");
  return s.oracle;
}

}  // namespace ccnlab
