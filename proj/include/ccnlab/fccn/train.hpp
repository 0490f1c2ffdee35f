#pragma once

#include "ccnlab/ccn/train.hpp"

namespace ccnlab {

/// FCCN: per outer step, `critic_steps` clipped critic ascent steps, then one
/// joint descent step on g-loss*_pro + alpha * Wass-loss + beta * Assign-loss.
inline CdfModel train_fccn(const Dataset& data, const TrainConfig& train_config, const FccnConfig& fccn_config,
                           TrainReport* report = nullptr) {
  return detail::train_engine(data, train_config, fccn_config, report);
}

/// Named adjustment subsets used by the ablation table.
enum class Variant { ccn, wass, assign, ps, assign_ps, fccn };

inline const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> v{Variant::ccn, Variant::wass, Variant::assign,
                                      Variant::ps, Variant::assign_ps, Variant::fccn};
  return v;
}

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::ccn: return "CCN";
    case Variant::wass: return "Wass";
    case Variant::assign: return "Assign";
    case Variant::ps: return "PS";
    case Variant::assign_ps: return "Assign+PS";
    case Variant::fccn: return "FCCN";
  }
  return "?";
}

/// Adjusts `base` (weights, widths) to the flag subset of `v`.
inline FccnConfig variant_config(Variant v, FccnConfig base) {
  if (v == Variant::ccn) {
    FccnConfig off = FccnConfig::disabled();
    return off;
  }
  base.representation = Representation::learned;
  base.wass = v == Variant::wass || v == Variant::fccn;
  base.assign = v == Variant::assign || v == Variant::assign_ps || v == Variant::fccn;
  base.ps = v == Variant::ps || v == Variant::assign_ps || v == Variant::fccn;
  return base;
}

}  // namespace ccnlab
