#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ccnlab/ccn/g_loss.hpp"
#include "ccnlab/ccn/model.hpp"
#include "ccnlab/core/dataset.hpp"
#include "ccnlab/core/log.hpp"
#include "ccnlab/core/rng.hpp"
#include "ccnlab/fccn/heads.hpp"
#include "ccnlab/fccn/losses.hpp"
#include "ccnlab/nn/adam.hpp"

namespace ccnlab {

struct TrainConfig {
  int max_epochs = 3000;
  long max_steps = 0;  // 0: no step budget
  int batch_size = 128;
  int z_draws = 10;
  double holdout_fraction = 0.2;
  int patience = 50;  // epochs without holdout improvement
  double padding_fraction = 0.1;
  Architecture architecture = Architecture::plain;
  int hidden_width = 100;
  int monotone_components = 10;
  nn::Activation hidden_activation = nn::Activation::relu;
  nn::AdamHyper adam{};
  bool standardize_covariates = true;
  std::uint64_t seed = 0;

  void validate() const {
    require(max_epochs >= 1, "max_epochs must be at least 1");
    require(max_steps >= 0, "max_steps must be non-negative");
    require(batch_size >= 1, "batch_size must be at least 1");
    require(z_draws >= 1, "z_draws must be at least 1");
    require(holdout_fraction >= 0.0 && holdout_fraction < 1.0, "holdout_fraction must lie in [0, 1)");
    require(patience >= 1, "patience must be at least 1");
    require(padding_fraction >= 0.0, "padding_fraction must be non-negative");
    require(hidden_width >= 1 && monotone_components >= 1, "network widths must be positive");
    require(adam.learning_rate > 0.0, "learning rate must be positive");
  }
};

struct TrainReport {
  int epochs = 0;
  long steps = 0;
  int best_epoch = 0;
  double best_holdout_loss = std::numeric_limits<double>::quiet_NaN();
  bool early_stopped = false;
};

namespace detail {

// Per-arm stratified holdout split; each arm keeps at least one training row.
inline void split_rows(const Dataset& data, double holdout_fraction, Rng& rng,
                       std::vector<std::size_t>& train, std::vector<std::size_t>& holdout) {
  for (int arm = 0; arm < 2; ++arm) {
    auto idx = data.arm_indices(arm);
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_hold = static_cast<std::size_t>(std::floor(holdout_fraction * static_cast<double>(idx.size())));
    n_hold = std::min(n_hold, idx.size() - 1);
    holdout.insert(holdout.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_hold));
    train.insert(train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_hold), idx.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(holdout.begin(), holdout.end());
}

inline std::vector<nn::DenseNet*> all_parts(CdfModel& m) {
  std::vector<nn::DenseNet*> parts;
  m.g0.for_each_part([&](nn::DenseNet& n) { parts.push_back(&n); });
  m.g1.for_each_part([&](nn::DenseNet& n) { parts.push_back(&n); });
  if (m.representation) {
    parts.push_back(&m.representation->phi_w);
    parts.push_back(&m.representation->phi_a);
    parts.push_back(&m.representation->e_head);
    parts.push_back(&m.representation->critic);
  }
  return parts;
}

inline std::vector<nn::Vector> snapshot(CdfModel& m) {
  std::vector<nn::Vector> out;
  for (auto* p : all_parts(m)) out.push_back(p->params());
  return out;
}

inline void restore(CdfModel& m, const std::vector<nn::Vector>& snap) {
  auto parts = all_parts(m);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    parts[i]->params() = snap[i];
    parts[i]->invalidate();
  }
}

/// Holdout g-loss* with fixed z draws (sum of per-arm means).
inline double holdout_loss(const CdfModel& model, const Dataset& data, std::span<const std::size_t> rows,
                           const nn::Matrix& z_raw, int draws) {
  double total = 0.0;
  for (int arm = 0; arm < 2; ++arm) {
    std::vector<std::size_t> arm_rows;
    std::vector<Eigen::Index> arm_pos;
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (data.treatment[rows[r]] == arm) {
        arm_rows.push_back(rows[r]);
        arm_pos.push_back(static_cast<Eigen::Index>(r));
      }
    if (arm_rows.empty()) continue;
    const nn::Matrix feats = model.features(gather_columns(data.covariates, arm_rows));
    nn::Matrix zn(1, static_cast<Eigen::Index>(arm_rows.size()) * draws);
    nn::Matrix targets(1, zn.cols());
    for (std::size_t b = 0; b < arm_rows.size(); ++b)
      for (int j = 0; j < draws; ++j) {
        const double z = z_raw(0, arm_pos[b] * draws + j);
        const auto c = static_cast<Eigen::Index>(b) * draws + j;
        zn(0, c) = model.sampler.normalize(z);
        targets(0, c) = data.outcome[arm_rows[b]] < z ? 1.0 : 0.0;
      }
    total += binary_cross_entropy(model.net(arm).evaluate(feats, zn, draws), targets).loss;
  }
  return total;
}

/// Shared CCN / FCCN optimizer. With FccnConfig::disabled() this is exactly
/// CCN: raw standardized covariates feed g0 and g1 and no head is built.
inline CdfModel train_engine(const Dataset& data, const TrainConfig& tc, const FccnConfig& fc,
                             TrainReport* report = nullptr) {
  data.validate();
  tc.validate();
  fc.validate();
  Rng rng(derive_seed(tc.seed, streams::kTraining, 0));

  std::vector<std::size_t> train, hold;
  split_rows(data, tc.holdout_fraction, rng, train, hold);

  CdfModel model;
  const int p = static_cast<int>(data.dim());
  model.x_norm = tc.standardize_covariates ? Standardizer::fit(data.covariates, train) : Standardizer::identity(p);
  std::vector<double> train_y;
  for (auto r : train) train_y.push_back(data.outcome[r]);
  model.sampler = ZSampler::from_outcomes(train_y, tc.padding_fraction);

  const bool learned = fc.representation == Representation::learned;
  const int feature_dim = learned ? fc.q_w + fc.q_a + (fc.ps_active() ? 1 : 0) : p;
  auto make_g = [&] {
    return tc.architecture == Architecture::plain
               ? CdfNet::plain(feature_dim, tc.hidden_width, tc.hidden_activation)
               : CdfNet::monotone(feature_dim, tc.monotone_components, tc.hidden_width, tc.hidden_activation);
  };
  model.g0 = make_g();
  model.g1 = make_g();
  model.g0.init_glorot(rng);
  model.g1.init_glorot(rng);
  if (learned) {
    model.representation.emplace(p, fc);
    model.representation->init_glorot(rng);
    nn::clip_weights(model.representation->critic, fc.clip_bound);
    model.use_ps = fc.ps_active();
  }

  const int draws = tc.z_draws;
  nn::Matrix hold_z(1, static_cast<Eigen::Index>(hold.size()) * draws);
  for (Eigen::Index c = 0; c < hold_z.cols(); ++c) hold_z(0, c) = model.sampler.draw(rng);

  nn::AdamGroup opt(tc.adam);
  model.g0.for_each_part([&](nn::DenseNet& n) { opt.attach(n); });
  model.g1.for_each_part([&](nn::DenseNet& n) { opt.attach(n); });
  nn::AdamState critic_state;
  if (learned) {
    auto& h = *model.representation;
    opt.attach(h.phi_w);
    opt.attach(h.phi_a);
    opt.attach(h.e_head);
    nn::AdamHyper ch = tc.adam;
    ch.learning_rate = fc.critic_learning_rate;
    critic_state = nn::AdamState(h.critic.params().size(), ch);
  }

  TrainReport rep;
  double best = std::numeric_limits<double>::infinity();
  auto best_params = snapshot(model);
  int since_best = 0;
  std::vector<std::size_t> order = train;
  const auto n_train = order.size();
  bool budget_exhausted = false;

  for (int epoch = 1; epoch <= tc.max_epochs && !budget_exhausted; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n_train; start += static_cast<std::size_t>(tc.batch_size)) {
      const std::size_t len = std::min<std::size_t>(static_cast<std::size_t>(tc.batch_size), n_train - start);
      std::span<const std::size_t> rows(order.data() + start, len);
      const nn::Matrix xb = model.x_norm.apply(gather_columns(data.covariates, rows));
      const auto batch = static_cast<Eigen::Index>(len);

      nn::Matrix feats;
      nn::Matrix rep_w, rep_a, prop;
      if (learned) {
        auto& h = *model.representation;
        rep_w = h.phi_w.forward(xb);
        rep_a = h.phi_a.forward(xb);
        if (fc.propensity_trained()) prop = h.e_head.forward(rep_a);
        if (fc.wass_active()) {
          std::vector<Eigen::Index> c0, c1;
          for (Eigen::Index b = 0; b < batch; ++b) (data.treatment[rows[b]] == 0 ? c0 : c1).push_back(b);
          if (!c0.empty() && !c1.empty()) {
            train_critic(h.critic, critic_state, rep_w(Eigen::all, c0), rep_w(Eigen::all, c1), fc.critic_steps,
                         fc.clip_bound);
          }
        }
        feats.resize(feature_dim, batch);
        feats.topRows(fc.q_w) = rep_w;
        feats.middleRows(fc.q_w, fc.q_a) = rep_a;
        if (fc.ps_active()) feats.bottomRows(1) = prop;
      } else {
        feats = xb;
      }

      nn::Matrix feat_grad = nn::Matrix::Zero(feature_dim, batch);
      double step_loss = 0.0;
      for (int arm = 0; arm < 2; ++arm) {
        std::vector<Eigen::Index> cols;
        std::vector<double> ys;
        for (Eigen::Index b = 0; b < batch; ++b)
          if (data.treatment[rows[b]] == arm) {
            cols.push_back(b);
            ys.push_back(data.outcome[rows[b]]);
          }
        if (cols.empty()) continue;
        nn::Matrix z(1, static_cast<Eigen::Index>(cols.size()) * draws);
        for (Eigen::Index c = 0; c < z.cols(); ++c) z(0, c) = model.sampler.draw(rng);
        CdfNet& g = arm == 0 ? model.g0 : model.g1;
        GLossResult gl = g_loss_batch(g, model.sampler, feats(Eigen::all, cols), ys, z, draws);
        step_loss += gl.loss;
        if (learned) feat_grad(Eigen::all, cols) = gl.feature_grad;
      }
      if (!std::isfinite(step_loss)) {
        throw Error("training diverged: non-finite g-loss at step " + std::to_string(rep.steps + 1));
      }

      if (learned) {
        auto& h = *model.representation;
        nn::Matrix d_w = feat_grad.topRows(fc.q_w);
        nn::Matrix d_a = feat_grad.middleRows(fc.q_w, fc.q_a);
        // the propensity coordinate is a stop-gradient input of g
        if (fc.wass_active()) {
          std::vector<Eigen::Index> c0, c1;
          for (Eigen::Index b = 0; b < batch; ++b) (data.treatment[rows[b]] == 0 ? c0 : c1).push_back(b);
          if (!c0.empty() && !c1.empty()) {
            // d(scale * gap / slope)/d rep with the frame and slope held fixed
            const CriticFrame frame = CriticFrame::of(rep_w(Eigen::all, c0), rep_w(Eigen::all, c1));
            if (frame.scale > 0.0) {
              const nn::Matrix framed = frame.apply(rep_w);
              const double lip = critic_slope(h.critic, framed);
              nn::Matrix up(1, batch);
              for (auto c : c0) up(0, c) = -1.0 / static_cast<double>(c0.size());
              for (auto c : c1) up(0, c) = 1.0 / static_cast<double>(c1.size());
              h.critic.forward(framed);
              if (lip > 0.0) d_w += (fc.alpha / lip) * h.critic.backward(up);
            }
            h.critic.zero_grad();
          }
        }
        if (fc.propensity_trained()) {
          nn::Matrix labels(1, batch);
          for (Eigen::Index b = 0; b < batch; ++b) labels(0, b) = data.treatment[rows[b]];
          BceResult bce = binary_cross_entropy(prop, labels);
          nn::Matrix d_a_assign = h.e_head.backward(bce.upstream);
          if (fc.assign_active()) d_a += fc.beta * d_a_assign;
        }
        h.phi_w.backward(d_w);
        h.phi_a.backward(d_a);
      }
      opt.step();
      ++rep.steps;
      if (tc.max_steps > 0 && rep.steps >= tc.max_steps) {
        budget_exhausted = true;
        break;
      }
    }
    rep.epochs = epoch;

    // no holdout: run to the epoch/step budget and keep the last iterate
    if (hold.empty()) {
      rep.best_epoch = epoch;
      continue;
    }
    const double hl = holdout_loss(model, data, hold, hold_z, draws);
    if (!std::isfinite(hl)) {
      throw Error("training diverged: non-finite holdout loss after step " + std::to_string(rep.steps));
    }
    if (hl < best) {
      best = hl;
      best_params = snapshot(model);
      rep.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= tc.patience) {
      rep.early_stopped = true;
      break;
    }
  }
  if (!hold.empty()) restore(model, best_params);
  rep.best_holdout_loss = hold.empty() ? std::numeric_limits<double>::quiet_NaN() : best;
  if (report) *report = rep;
  return model;
}

}  // namespace detail

/// CCN: g0 fitted on control rows, g1 on treated rows, z uniform over the
/// padded outcome range.
inline CdfModel train_ccn(const Dataset& data, const TrainConfig& config, TrainReport* report = nullptr) {
  return detail::train_engine(data, config, FccnConfig::disabled(), report);
}

}  // namespace ccnlab
