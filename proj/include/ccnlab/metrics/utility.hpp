#pragma once

#include <nlohmann/json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ccnlab/ccn/inference.hpp"
#include "ccnlab/core/dataset.hpp"
#include "ccnlab/core/error.hpp"
#include "ccnlab/core/rng.hpp"
#include "ccnlab/scenarios/oracle.hpp"

namespace ccnlab {

enum class UtilityScope { unified, treatment_specific, feature_dependent, personalized };

inline std::string to_string(UtilityScope s) {
  switch (s) {
    case UtilityScope::unified: return "unified";
    case UtilityScope::treatment_specific: return "treatment_specific";
    case UtilityScope::feature_dependent: return "feature_dependent";
    case UtilityScope::personalized: return "personalized";
  }
  return "?";
}

/// U(gamma) = slope * gamma + level          (linear)
/// U(gamma) = 1{gamma > level}                (threshold)
/// where level = constant + sum of weighted per-individual columns and covariates.
struct UtilityTerm {
  enum class Kind { linear, threshold };
  Kind kind = Kind::linear;
  double slope = 1.0;
  double constant = 0.0;
  std::vector<std::pair<std::string, double>> columns;
  std::vector<std::pair<int, double>> covariates;

  static UtilityTerm linear(double slope, double offset) { return {Kind::linear, slope, offset, {}, {}}; }
  static UtilityTerm threshold(double level) { return {Kind::threshold, 1.0, level, {}, {}}; }

  bool reads_covariates() const { return !covariates.empty(); }
  bool reads_individual() const { return !columns.empty(); }
  bool operator==(const UtilityTerm&) const = default;
};

/// Named per-individual parameters, one row per unit.
struct IndividualTable {
  std::vector<std::string> names;
  Matrix values;  // n x names.size()

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  double at(std::size_t i, const std::string& name) const {
    for (std::size_t c = 0; c < names.size(); ++c)
      if (names[c] == name) return values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    throw Error("per-individual table has no column '" + name + "'");
  }
};

struct UtilitySpec {
  std::string name;
  UtilityScope scope = UtilityScope::unified;
  UtilityTerm u0;
  UtilityTerm u1;
  std::optional<IndividualTable> per_individual;

  /// n is the number of individuals this utility will be applied to (0 to skip the row-count check).
  void validate(std::size_t n = 0) const {
    const bool reads_x = u0.reads_covariates() || u1.reads_covariates();
    const bool reads_i = u0.reads_individual() || u1.reads_individual();
    switch (scope) {
      case UtilityScope::unified:
        require(u0 == u1, "unified utility must use the same function for both arms");
        [[fallthrough]];
      case UtilityScope::treatment_specific:
        require(!reads_x && !reads_i, "utility scope " + to_string(scope) + " cannot read covariates or per-individual parameters");
        break;
      case UtilityScope::feature_dependent:
        require(!reads_i, "feature_dependent utility cannot read per-individual parameters");
        break;
      case UtilityScope::personalized:
        require(per_individual.has_value(), "personalized utility needs a per-individual table");
        if (n > 0) require_dims(static_cast<long>(n), static_cast<long>(per_individual->rows()), "per-individual table rows");
        break;
    }
  }

  double level(const UtilityTerm& term, std::span<const double> x, std::size_t i) const {
    double v = term.constant;
    for (const auto& [col, w] : term.columns) {
      require(per_individual.has_value() && i < per_individual->rows(),
              "personalized utility: no per-individual row for unit " + std::to_string(i));
      v += w * per_individual->at(i, col);
    }
    for (const auto& [j, w] : term.covariates) {
      require(j >= 0 && static_cast<std::size_t>(j) < x.size(), "utility reads a covariate out of range");
      v += w * x[static_cast<std::size_t>(j)];
    }
    return v;
  }

  double evaluate(int arm, double gamma, std::span<const double> x, std::size_t i) const {
    const auto& term = arm == 0 ? u0 : u1;
    const double lv = level(term, x, i);
    return term.kind == UtilityTerm::Kind::linear ? term.slope * gamma + lv : (gamma > lv ? 1.0 : 0.0);
  }
};

inline constexpr int kDefaultUtilitySamples = 3000;

/// Monte Carlo E[U1(Y(1))] - E[U0(Y(0))] with draws taken from the two curves.
inline double curve_utility_contrast(const CdfCurve& curve0, const CdfCurve& curve1, std::span<const double> x,
                                     const UtilitySpec& spec, std::size_t i, int n_samples, std::uint64_t seed) {
  require(n_samples >= 1, "utility_contrast needs n_samples >= 1");
  double contrast = 0.0;
  for (int arm = 0; arm < 2; ++arm) {
    Rng rng(derive_seed(seed, streams::kUtility, 2 * static_cast<std::uint64_t>(i) + static_cast<std::uint64_t>(arm)));
    double mean = 0.0;
    for (double g : sample_curve(arm == 0 ? curve0 : curve1, n_samples, rng)) mean += spec.evaluate(arm, g, x, i);
    mean /= n_samples;
    contrast += arm == 1 ? mean : -mean;
  }
  return contrast;
}

inline double utility_contrast(const CdfModel& model, std::span<const double> x, const UtilitySpec& spec,
                               std::size_t i, int n_samples = kDefaultUtilitySamples, std::uint64_t seed = 0,
                               int grid_size = kDefaultGridSize) {
  return curve_utility_contrast(estimate_cdf(model, x, 0, grid_size), estimate_cdf(model, x, 1, grid_size), x, spec, i,
                                n_samples, seed);
}

/// utility_contrast for every row of x_rows; row r is individual r of the utility.
inline std::vector<double> utility_contrasts(const CdfModel& model, const Matrix& x_rows, const UtilitySpec& spec,
                                             int n_samples = kDefaultUtilitySamples, std::uint64_t seed = 0,
                                             int grid_size = kDefaultGridSize) {
  spec.validate(static_cast<std::size_t>(x_rows.rows()));
  const auto c0 = estimate_cdfs(model, x_rows, 0, grid_size);
  const auto c1 = estimate_cdfs(model, x_rows, 1, grid_size);
  std::vector<double> out(c0.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = curve_utility_contrast(c0[i], c1[i], covariate_row(x_rows, i), spec, i, n_samples, seed);
  return out;
}

/// Exact contrast under the generating model.
inline double oracle_utility_contrast(const ScenarioOracle& oracle, std::span<const double> x, const UtilitySpec& spec,
                                      std::size_t i) {
  double contrast = 0.0;
  for (int arm = 0; arm < 2; ++arm) {
    const auto& term = arm == 0 ? spec.u0 : spec.u1;
    const double lv = spec.level(term, x, i);
    const double e = term.kind == UtilityTerm::Kind::linear ? term.slope * oracle.true_mean(arm, x) + lv
                                                            : 1.0 - oracle.true_cdf(arm, x, lv);
    contrast += arm == 1 ? e : -e;
  }
  return contrast;
}

/// What a builtin utility may need to instantiate itself on a test set.
struct UtilityContext {
  const Matrix* x_rows = nullptr;
  const ScenarioOracle* oracle = nullptr;
  std::uint64_t seed = 0;
  int indicator_column = 9;  // m_i in the EDU-style design
};

using UtilityFactory = std::function<UtilitySpec(const UtilityContext&)>;

/// cate: U = gamma for both arms; linear: U0 = gamma, U1 = gamma - 4;
/// threshold: U0 = 1{gamma > E[Y(0)|x]}, U1 = 1{gamma > E[Y(0)|x] + 4};
/// edu_personalized: v ~ U(0, 1.5), U0 = 1{gamma > v}, U1 = 1{gamma > v + 1 - m}.
inline const std::map<std::string, UtilityFactory>& builtin_utilities() {
  static const std::map<std::string, UtilityFactory> catalog{
      {"cate",
       [](const UtilityContext&) {
         return UtilitySpec{"cate", UtilityScope::unified, UtilityTerm::linear(1.0, 0.0), UtilityTerm::linear(1.0, 0.0), {}};
       }},
      {"linear",
       [](const UtilityContext&) {
         return UtilitySpec{"linear", UtilityScope::treatment_specific, UtilityTerm::linear(1.0, 0.0),
                            UtilityTerm::linear(1.0, -4.0), {}};
       }},
      {"threshold",
       [](const UtilityContext& ctx) {
         require(ctx.x_rows != nullptr && ctx.oracle != nullptr, "threshold utility needs test covariates and an oracle");
         IndividualTable table{{"mu0"}, Matrix(ctx.x_rows->rows(), 1)};
         for (Eigen::Index i = 0; i < ctx.x_rows->rows(); ++i)
           table.values(i, 0) = ctx.oracle->true_mean(0, covariate_row(*ctx.x_rows, static_cast<std::size_t>(i)));
         UtilityTerm u0 = UtilityTerm::threshold(0.0), u1 = UtilityTerm::threshold(4.0);
         u0.columns = {{"mu0", 1.0}};
         u1.columns = {{"mu0", 1.0}};
         return UtilitySpec{"threshold", UtilityScope::personalized, u0, u1, std::move(table)};
       }},
      {"edu_personalized",
       [](const UtilityContext& ctx) {
         require(ctx.x_rows != nullptr, "edu_personalized utility needs test covariates");
         require(ctx.indicator_column < ctx.x_rows->cols(), "edu_personalized utility: indicator column out of range");
         Rng rng = make_rng(ctx.seed, streams::kUtility);
         std::uniform_real_distribution<double> v(0.0, 1.5);
         IndividualTable table{{"v"}, Matrix(ctx.x_rows->rows(), 1)};
         for (Eigen::Index i = 0; i < ctx.x_rows->rows(); ++i) table.values(i, 0) = v(rng);
         UtilityTerm u0 = UtilityTerm::threshold(0.0), u1 = UtilityTerm::threshold(1.0);
         u0.columns = {{"v", 1.0}};
         u1.columns = {{"v", 1.0}};
         u1.covariates = {{ctx.indicator_column, -1.0}};
         return UtilitySpec{"edu_personalized", UtilityScope::personalized, u0, u1, std::move(table)};
       }},
  };
  return catalog;
}

inline UtilitySpec make_utility(const std::string& name, const UtilityContext& ctx) {
  const auto& catalog = builtin_utilities();
  const auto it = catalog.find(name);
  if (it == catalog.end()) throw Error("unknown utility '" + name + "'");
  UtilitySpec spec = it->second(ctx);
  spec.validate(ctx.x_rows ? static_cast<std::size_t>(ctx.x_rows->rows()) : 0);
  return spec;
}

}  // namespace ccnlab
