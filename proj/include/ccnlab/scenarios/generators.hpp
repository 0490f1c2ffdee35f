#pragma once

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ccnlab/core/dataset.hpp"
#include "ccnlab/core/error.hpp"
#include "ccnlab/core/rng.hpp"
#include "ccnlab/scenarios/oracle.hpp"

namespace ccnlab {

/// How "exp(k)" in the EDU-style outcome law is read.
enum class ExpParam { rate, mean };

enum class TailFamily { gumbel, gamma, weibull };

inline std::string to_string(TailFamily f) {
  switch (f) {
    case TailFamily::gumbel: return "gumbel";
    case TailFamily::gamma: return "gamma";
    case TailFamily::weibull: return "weibull";
  }
  return "?";
}

inline TailFamily tail_family_from_string(const std::string& s) {
  if (s == "gumbel") return TailFamily::gumbel;
  if (s == "gamma") return TailFamily::gamma;
  if (s == "weibull") return TailFamily::weibull;
  throw Error("unknown tail family '" + s + "'");
}

struct ScenarioConfig {
  std::size_t n = 2000;
  std::uint64_t seed = 0;
  int noise_dims = 0;
  double propensity_scale = 1.0;
  std::optional<std::pair<double, double>> truncation;  // propensity band to remove
  ExpParam exp_param = ExpParam::rate;

  void validate() const {
    require(n >= 1, "scenario needs n >= 1");
    require(noise_dims >= 0, "noise_dims must be non-negative");
    require(propensity_scale >= 0.0 && std::isfinite(propensity_scale), "propensity_scale must be finite and >= 0");
    if (truncation) {
      require(truncation->first > 0.0 && truncation->second < 1.0 && truncation->first < truncation->second,
              "truncation band must satisfy 0 < low < high < 1");
    }
  }
};

struct Scenario {
  Dataset data;
  std::shared_ptr<const ScenarioOracle> oracle;
};

namespace oracles {

inline double sum_range(std::span<const double> x, int from, int to) {
  double s = 0.0;
  for (int j = from; j < to; ++j) s += x[static_cast<std::size_t>(j)];
  return s;
}

inline double abs_sum_range(std::span<const double> x, int from, int to) {
  double s = 0.0;
  for (int j = from; j < to; ++j) s += std::abs(x[static_cast<std::size_t>(j)]);
  return s;
}

/// One covariate; Y(0) | x ~ N(x, 1), Y(1) | x ~ N(x + 1, 1); logistic assignment on x.
class Gaussian final : public ScenarioOracle {
 public:
  std::string name() const override { return "gaussian"; }
  int base_dim() const override { return 1; }
  double true_cdf(int arm, std::span<const double> x, double y) const override {
    check_dim(x);
    return normal_cdf(y - true_mean(arm, x));
  }
  double true_mean(int arm, std::span<const double> x) const override { return x[0] + (arm == 1 ? 1.0 : 0.0); }
  double sample(int arm, std::span<const double> x, Rng& rng) const override {
    return true_mean(arm, x) + std::normal_distribution<double>(0.0, 1.0)(rng);
  }
  double propensity_index(std::span<const double> x) const override { return x[0]; }
  double true_quantile(int arm, std::span<const double> x, double q) const override {
    return ScenarioOracle::true_quantile(arm, x, q);
  }
  nlohmann::json params() const override { return {{"propensity_scale", propensity_scale}}; }
  std::unique_ptr<ScenarioOracle> clone() const override { return std::make_unique<Gaussian>(*this); }
};

/// Y(0) = phi N(-2,1) + (1-phi) N(2,1) + x, Y(1) = phi N(6,1.5^2) + (1-phi) Exp(1) + x,
/// phi ~ Bernoulli(0.5); T = 1{x > 0}.
class Multimodal final : public ScenarioOracle {
 public:
  std::string name() const override { return "multimodal"; }
  int base_dim() const override { return 1; }
  double true_cdf(int arm, std::span<const double> x, double y) const override {
    check_dim(x);
    const double r = y - x[0];
    if (arm == 0) return 0.5 * normal_cdf(r + 2.0) + 0.5 * normal_cdf(r - 2.0);
    return 0.5 * normal_cdf((r - 6.0) / 1.5) + 0.5 * (r > 0.0 ? 1.0 - std::exp(-r) : 0.0);
  }
  double true_mean(int arm, std::span<const double> x) const override { return x[0] + (arm == 0 ? 0.0 : 3.5); }
  double sample(int arm, std::span<const double> x, Rng& rng) const override {
    const bool first = uniform01(rng) < 0.5;
    double v;
    if (arm == 0) v = std::normal_distribution<double>(first ? -2.0 : 2.0, 1.0)(rng);
    else v = first ? std::normal_distribution<double>(6.0, 1.5)(rng) : std::exponential_distribution<double>(1.0)(rng);
    return v + x[0];
  }
  double propensity_index(std::span<const double> x) const override { return x[0]; }
  // deterministic assignment by the sign of x; a zero scale randomizes it
  double true_propensity(std::span<const double> x) const override {
    if (propensity_scale == 0.0) return 0.5;
    return x[0] > 0.0 ? 1.0 : 0.0;
  }
  nlohmann::json params() const override { return {{"propensity_scale", propensity_scale}}; }
  std::unique_ptr<ScenarioOracle> clone() const override { return std::make_unique<Multimodal>(*this); }
};

/// x in R^3; Y(t) | x ~ Logistic(mu_t(x), |x1 + x2 + x3| + 0.5); beta = (2, 2, 2).
class LogisticScenario final : public ScenarioOracle {
 public:
  std::string name() const override { return "logistic"; }
  int base_dim() const override { return 3; }
  static double location(int arm, std::span<const double> x) {
    const double pi = std::numbers::pi;
    if (arm == 0) return std::sin(x[0] * pi + x[1] * pi) + std::sin(x[2] * pi);
    return std::cos(x[0] * pi + x[1] * pi) + std::cos(x[2] * pi);
  }
  static double scale(std::span<const double> x) { return std::abs(x[0] + x[1] + x[2]) + 0.5; }
  double true_cdf(int arm, std::span<const double> x, double y) const override {
    check_dim(x);
    return logistic_fn((y - location(arm, x)) / scale(x));
  }
  double true_mean(int arm, std::span<const double> x) const override { return location(arm, x); }
  double true_quantile(int arm, std::span<const double> x, double q) const override {
    return location(arm, x) + scale(x) * std::log(q / (1.0 - q));
  }
  double sample(int arm, std::span<const double> x, Rng& rng) const override {
    double u = uniform01(rng);
    while (u <= 0.0) u = uniform01(rng);
    return true_quantile(arm, x, u);
  }
  double propensity_index(std::span<const double> x) const override { return 2.0 * (x[0] + x[1] + x[2]); }
  nlohmann::json params() const override {
    return {{"beta", {2.0, 2.0, 2.0}}, {"propensity_scale", propensity_scale}};
  }
  std::unique_ptr<ScenarioOracle> clone() const override { return std::make_unique<LogisticScenario>(*this); }
};

/// Ten covariates with logistic assignment beta = (0.8, ..., 0.8); outcome
/// law from one of three families.
class TailScenario final : public ScenarioOracle {
 public:
  static constexpr double kScaleFloor = 1e-6;
  static constexpr double kShapeFloor = 1e-3;

  explicit TailScenario(TailFamily f) : family_(f) {}

  std::string name() const override { return "tail_" + to_string(family_); }
  int base_dim() const override { return 10; }
  TailFamily family() const { return family_; }

  /// (location or shape, scale) for Gumbel and Gamma, (scale, shape) for Weibull.
  std::pair<double, double> parameters(int arm, std::span<const double> x) const {
    check_dim(x);
    switch (family_) {
      case TailFamily::gumbel: {
        const double s = sum_range(x, 0, 10);
        const double s2 = std::pow(std::sin(s), 2), c2 = std::pow(std::cos(s), 2);
        return arm == 0 ? std::pair{5.0 * s2, std::max(5.0 * c2, kScaleFloor)}
                        : std::pair{5.0 * c2, std::max(5.0 * s2, kScaleFloor)};
      }
      case TailFamily::gamma: {
        const double a = std::sqrt(std::abs(std::sin(sum_range(x, 0, 5)) + std::cos(sum_range(x, 5, 10))));
        const double b = std::sqrt(std::abs(std::cos(sum_range(x, 0, 5)) + std::sin(sum_range(x, 5, 10))));
        return arm == 0 ? std::pair{std::max(4.0 * a + 0.5, kShapeFloor), std::max(2.0 * b, kScaleFloor)}
                        : std::pair{std::max(4.0 * b + 0.5, kShapeFloor), std::max(2.0 * a, kScaleFloor)};
      }
      case TailFamily::weibull: {
        const double a = std::sqrt(std::abs(std::sin(sum_range(x, 0, 5)) + std::cos(sum_range(x, 5, 10))));
        const double b = std::sqrt(std::abs(std::cos(sum_range(x, 0, 5)) + std::sin(sum_range(x, 5, 10))));
        return arm == 0 ? std::pair{std::max(5.0 * a, kScaleFloor), std::max(2.0 * b + 0.2, kShapeFloor)}
                        : std::pair{std::max(5.0 * b, kScaleFloor), std::max(2.0 * a + 0.2, kShapeFloor)};
      }
    }
    return {0.0, 1.0};
  }

  double true_cdf(int arm, std::span<const double> x, double y) const override {
    const auto [p1, p2] = parameters(arm, x);
    switch (family_) {
      case TailFamily::gumbel: return std::exp(-std::exp(-(y - p1) / p2));
      case TailFamily::gamma: return y <= 0.0 ? 0.0 : boost::math::gamma_p(p1, y / p2);
      case TailFamily::weibull: return y <= 0.0 ? 0.0 : 1.0 - std::exp(-std::pow(y / p1, p2));
    }
    return 0.0;
  }

  double true_mean(int arm, std::span<const double> x) const override {
    const auto [p1, p2] = parameters(arm, x);
    switch (family_) {
      case TailFamily::gumbel: return p1 + std::numbers::egamma * p2;
      case TailFamily::gamma: return p1 * p2;
      case TailFamily::weibull: return p1 * std::tgamma(1.0 + 1.0 / p2);
    }
    return 0.0;
  }

  double true_quantile(int arm, std::span<const double> x, double q) const override {
    require(q > 0.0 && q < 1.0, "quantile level must lie in (0, 1)");
    const auto [p1, p2] = parameters(arm, x);
    switch (family_) {
      case TailFamily::gumbel: return p1 - p2 * std::log(-std::log(q));
      case TailFamily::gamma: return p2 * boost::math::gamma_p_inv(p1, q);
      case TailFamily::weibull: return p1 * std::pow(-std::log(1.0 - q), 1.0 / p2);
    }
    return 0.0;
  }

  double sample(int arm, std::span<const double> x, Rng& rng) const override {
    const auto [p1, p2] = parameters(arm, x);
    switch (family_) {
      case TailFamily::gumbel: return std::extreme_value_distribution<double>(p1, p2)(rng);
      case TailFamily::gamma: return std::gamma_distribution<double>(p1, p2)(rng);
      case TailFamily::weibull: return std::weibull_distribution<double>(p2, p1)(rng);
    }
    return 0.0;
  }

  double propensity_index(std::span<const double> x) const override { return 0.8 * sum_range(x, 0, 10); }
  nlohmann::json params() const override {
    return {{"family", to_string(family_)}, {"beta", std::vector<double>(10, 0.8)},
            {"propensity_scale", propensity_scale}};
  }
  std::unique_ptr<ScenarioOracle> clone() const override { return std::make_unique<TailScenario>(*this); }

 private:
  TailFamily family_;
};

/// Y(0) | x ~ Beta(a, b) + sin(sum x), Y(1) | x ~ Beta(b, a) + cos(sum x) with
/// a = mean |x_1..5|, b = mean |x_6..10|.
class BetaHetero final : public ScenarioOracle {
 public:
  static constexpr double kShapeFloor = 1e-3;

  std::string name() const override { return "beta_hetero"; }
  int base_dim() const override { return 10; }

  struct Params {
    double a, b, shift;
  };
  Params parameters(int arm, std::span<const double> x) const {
    check_dim(x);
    const double first = std::max(abs_sum_range(x, 0, 5) / 5.0, kShapeFloor);
    const double second = std::max(abs_sum_range(x, 5, 10) / 5.0, kShapeFloor);
    const double s = sum_range(x, 0, 10);
    return arm == 0 ? Params{first, second, std::sin(s)} : Params{second, first, std::cos(s)};
  }

  double true_cdf(int arm, std::span<const double> x, double y) const override {
    const auto p = parameters(arm, x);
    const double u = y - p.shift;
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return boost::math::ibeta(p.a, p.b, u);
  }
  double true_mean(int arm, std::span<const double> x) const override {
    const auto p = parameters(arm, x);
    return p.shift + p.a / (p.a + p.b);
  }
  double true_quantile(int arm, std::span<const double> x, double q) const override {
    require(q > 0.0 && q < 1.0, "quantile level must lie in (0, 1)");
    const auto p = parameters(arm, x);
    return p.shift + boost::math::ibeta_inv(p.a, p.b, q);
  }
  double sample(int arm, std::span<const double> x, Rng& rng) const override {
    const auto p = parameters(arm, x);
    const double g1 = std::gamma_distribution<double>(p.a, 1.0)(rng);
    const double g2 = std::gamma_distribution<double>(p.b, 1.0)(rng);
    double u;
    if (g1 + g2 > 0.0) u = g1 / (g1 + g2);
    else u = uniform01(rng) < p.a / (p.a + p.b) ? 1.0 : 0.0;  // both draws underflowed
    return p.shift + u;
  }
  double propensity_index(std::span<const double> x) const override { return 0.8 * sum_range(x, 0, 10); }
  nlohmann::json params() const override {
    return {{"beta", std::vector<double>(10, 0.8)}, {"propensity_scale", propensity_scale}};
  }
  std::unique_ptr<ScenarioOracle> clone() const override { return std::make_unique<BetaHetero>(*this); }
};

/// Frozen single-hidden-layer sigmoid network used as a known mean function.
struct FrozenNet {
  Matrix hidden_weights;  // units x p
  Vector hidden_bias;
  Vector output_weights;
  double output_bias = 0.0;

  double operator()(std::span<const double> x) const {
    double out = output_bias;
    for (Eigen::Index u = 0; u < hidden_weights.rows(); ++u) {
      double pre = hidden_bias(u);
      for (Eigen::Index j = 0; j < hidden_weights.cols(); ++j) pre += hidden_weights(u, j) * x[static_cast<std::size_t>(j)];
      out += output_weights(u) * logistic_fn(pre);
    }
    return out;
  }

  static FrozenNet random(int inputs, int units, Rng& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    FrozenNet f;
    f.hidden_weights.resize(units, inputs);
    f.hidden_bias.resize(units);
    f.output_weights.resize(units);
    const double w_sd = 2.0 / std::sqrt(static_cast<double>(inputs));
    const double v_sd = 2.0 / std::sqrt(static_cast<double>(units));
    for (int u = 0; u < units; ++u) {
      for (int j = 0; j < inputs; ++j) f.hidden_weights(u, j) = w_sd * n01(rng);
      f.hidden_bias(u) = n01(rng);
      f.output_weights(u) = v_sd * n01(rng);
    }
    f.output_bias = 0.0;
    return f;
  }

  nlohmann::json to_json() const {
    std::vector<std::vector<double>> w(static_cast<std::size_t>(hidden_weights.rows()));
    for (Eigen::Index u = 0; u < hidden_weights.rows(); ++u)
      for (Eigen::Index j = 0; j < hidden_weights.cols(); ++j) w[static_cast<std::size_t>(u)].push_back(hidden_weights(u, j));
    return {{"hidden_weights", w},
            {"hidden_bias", std::vector<double>(hidden_bias.data(), hidden_bias.data() + hidden_bias.size())},
            {"output_weights", std::vector<double>(output_weights.data(), output_weights.data() + output_weights.size())},
            {"output_bias", output_bias}};
  }
};

/// EDU-style outcomes: nine N(0,1) covariates plus a binary m in the last
/// slot; Y(0) = f0(x) + (2 - m) N(0, 0.5^2), Y(1) = f1(x) + (2 - m) Exp(2).
class EduLike final : public ScenarioOracle {
 public:
  static constexpr int kDim = 10;
  static constexpr int kIndicator = 9;
  static constexpr double kNoiseSd = 0.5;
  static constexpr double kExpParameter = 2.0;

  EduLike(FrozenNet f0, FrozenNet f1, std::vector<double> beta, ExpParam exp_param)
      : f0_(std::move(f0)), f1_(std::move(f1)), beta_(std::move(beta)), exp_param_(exp_param) {}

  std::string name() const override { return "edu_like"; }
  int base_dim() const override { return kDim; }

  double exp_rate() const { return exp_param_ == ExpParam::rate ? kExpParameter : 1.0 / kExpParameter; }
  static double spread(std::span<const double> x) { return 2.0 - x[kIndicator]; }
  double location(int arm, std::span<const double> x) const { return arm == 0 ? f0_(x) : f1_(x); }

  double true_cdf(int arm, std::span<const double> x, double y) const override {
    check_dim(x);
    const double r = (y - location(arm, x)) / spread(x);
    if (arm == 0) return normal_cdf(r / kNoiseSd);
    return r > 0.0 ? 1.0 - std::exp(-exp_rate() * r) : 0.0;
  }
  double true_mean(int arm, std::span<const double> x) const override {
    check_dim(x);
    return location(arm, x) + (arm == 1 ? spread(x) / exp_rate() : 0.0);
  }
  double true_quantile(int arm, std::span<const double> x, double q) const override {
    if (arm == 1) return location(1, x) - spread(x) * std::log(1.0 - q) / exp_rate();
    return ScenarioOracle::true_quantile(arm, x, q);
  }
  double sample(int arm, std::span<const double> x, Rng& rng) const override {
    check_dim(x);
    const double e = arm == 0 ? std::normal_distribution<double>(0.0, kNoiseSd)(rng)
                              : std::exponential_distribution<double>(exp_rate())(rng);
    return location(arm, x) + spread(x) * e;
  }
  double propensity_index(std::span<const double> x) const override {
    double s = 0.0;
    for (int j = 0; j < kDim; ++j) s += beta_[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    return s;
  }
  nlohmann::json params() const override {
    return {{"f0", f0_.to_json()},
            {"f1", f1_.to_json()},
            {"beta", beta_},
            {"exp_param", exp_param_ == ExpParam::rate ? "rate" : "mean"},
            {"propensity_scale", propensity_scale}};
  }
  std::unique_ptr<ScenarioOracle> clone() const override { return std::make_unique<EduLike>(*this); }

 private:
  FrozenNet f0_, f1_;
  std::vector<double> beta_;
  ExpParam exp_param_;
};

}  // namespace oracles

/// Appends cfg.noise_dims N(0,1) covariates, redraws T under the oracle's
/// assignment law scaled by cfg.propensity_scale, drops rows whose true
/// propensity lies inside cfg.truncation, and sets the observed outcome.
inline Scenario apply_imbalance_knobs(const Dataset& data, const ScenarioOracle& oracle, const ScenarioConfig& cfg) {
  cfg.validate();
  require(data.potential.has_value(), "imbalance knobs need both potential outcomes");
  const auto n = data.size();
  auto scaled = oracle.clone();
  scaled->propensity_scale = cfg.propensity_scale;

  Dataset out = data;
  if (cfg.noise_dims > 0) {
    Rng noise_rng = make_rng(cfg.seed, streams::kNoise);
    std::normal_distribution<double> n01(0.0, 1.0);
    const auto p = data.covariates.cols();
    out.covariates.conservativeResize(Eigen::NoChange, p + cfg.noise_dims);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i)
      for (int j = 0; j < cfg.noise_dims; ++j) out.covariates(i, p + j) = n01(noise_rng);
  }

  Rng assign_rng = make_rng(cfg.seed, streams::kAssignment);
  out.treatment.assign(n, 0);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = covariate_row(out.covariates, i);
    const double e = scaled->true_propensity(x);
    out.treatment[i] = uniform01(assign_rng) < e ? 1 : 0;
    if (!(cfg.truncation && e > cfg.truncation->first && e < cfg.truncation->second)) keep.push_back(i);
  }
  for (std::size_t i = 0; i < n; ++i) out.outcome[i] = out.potential_outcome(out.treatment[i], i);
  if (keep.size() != n) out = out.subset(keep);

  std::size_t treated = 0;
  for (int t : out.treatment) treated += static_cast<std::size_t>(t);
  if (treated == 0 || treated == out.size()) {
    throw Error(cfg.truncation ? "propensity truncation left an empty treatment arm"
                               : "generated data has an empty treatment arm");
  }
  return {std::move(out), std::shared_ptr<const ScenarioOracle>(std::move(scaled))};
}

namespace detail {

inline Scenario draw_scenario(std::unique_ptr<ScenarioOracle> oracle, Matrix x, const ScenarioConfig& cfg) {
  const auto n = static_cast<std::size_t>(x.rows());
  Rng rng = make_rng(cfg.seed, streams::kOutcomes);
  Dataset d;
  d.covariates = std::move(x);
  d.potential.emplace();
  d.potential->y0.resize(n);
  d.potential->y1.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = covariate_row(d.covariates, i);
    d.potential->y0[i] = oracle->sample(0, row, rng);
    d.potential->y1[i] = oracle->sample(1, row, rng);
  }
  d.treatment.assign(n, 0);
  d.outcome = d.potential->y0;
  return apply_imbalance_knobs(d, *oracle, cfg);
}

inline Matrix normal_covariates(std::size_t n, int p, std::uint64_t seed) {
  Rng rng = make_rng(seed, streams::kCovariates);
  std::normal_distribution<double> n01(0.0, 1.0);
  Matrix x(static_cast<Eigen::Index>(n), p);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (int j = 0; j < p; ++j) x(i, j) = n01(rng);
  return x;
}

}  // namespace detail

inline Scenario gen_gaussian(const ScenarioConfig& cfg) {
  cfg.validate();
  return detail::draw_scenario(std::make_unique<oracles::Gaussian>(), detail::normal_covariates(cfg.n, 1, cfg.seed), cfg);
}

inline Scenario gen_multimodal(const ScenarioConfig& cfg) {
  cfg.validate();
  return detail::draw_scenario(std::make_unique<oracles::Multimodal>(), detail::normal_covariates(cfg.n, 1, cfg.seed),
                               cfg);
}

inline Scenario gen_logistic(const ScenarioConfig& cfg) {
  cfg.validate();
  return detail::draw_scenario(std::make_unique<oracles::LogisticScenario>(),
                               detail::normal_covariates(cfg.n, 3, cfg.seed), cfg);
}

inline Scenario gen_tail_family(const ScenarioConfig& cfg, TailFamily family) {
  cfg.validate();
  return detail::draw_scenario(std::make_unique<oracles::TailScenario>(family),
                               detail::normal_covariates(cfg.n, 10, cfg.seed), cfg);
}

inline Scenario gen_beta_hetero(const ScenarioConfig& cfg) {
  cfg.validate();
  return detail::draw_scenario(std::make_unique<oracles::BetaHetero>(), detail::normal_covariates(cfg.n, 10, cfg.seed),
                               cfg);
}

inline Scenario gen_edu_like(const ScenarioConfig& cfg) {
  cfg.validate();
  Rng param_rng = make_rng(cfg.seed, streams::kScenarioParams);
  auto f0 = oracles::FrozenNet::random(oracles::EduLike::kDim, 32, param_rng);
  auto f1 = oracles::FrozenNet::random(oracles::EduLike::kDim, 32, param_rng);
  std::vector<double> beta(oracles::EduLike::kDim);
  std::uniform_real_distribution<double> coef(-0.8, 0.8);
  for (auto& b : beta) b = coef(param_rng);

  Matrix x = detail::normal_covariates(cfg.n, oracles::EduLike::kDim, cfg.seed);
  Rng m_rng = make_rng(cfg.seed, streams::kCovariates, 1);
  for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, oracles::EduLike::kIndicator) = uniform01(m_rng) < 0.5 ? 1.0 : 0.0;
  return detail::draw_scenario(std::make_unique<oracles::EduLike>(std::move(f0), std::move(f1), std::move(beta), cfg.exp_param),
                               std::move(x), cfg);
}

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"gaussian",     "multimodal",   "logistic",    "tail_gumbel",
                                              "tail_gamma",   "tail_weibull", "beta_hetero", "edu_like"};
  return names;
}

/// Generator lookup by scenario name.
inline Scenario generate_scenario(const std::string& name, const ScenarioConfig& cfg) {
  if (name == "gaussian") return gen_gaussian(cfg);
  if (name == "multimodal") return gen_multimodal(cfg);
  if (name == "logistic") return gen_logistic(cfg);
  if (name == "tail_gumbel") return gen_tail_family(cfg, TailFamily::gumbel);
  if (name == "tail_gamma") return gen_tail_family(cfg, TailFamily::gamma);
  if (name == "tail_weibull") return gen_tail_family(cfg, TailFamily::weibull);
  if (name == "beta_hetero") return gen_beta_hetero(cfg);
  if (name == "edu_like") return gen_edu_like(cfg);
  throw Error("unknown scenario '" + name + "'");
}

}  // namespace ccnlab
