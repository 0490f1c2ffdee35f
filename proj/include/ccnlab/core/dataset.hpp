#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccnlab/core/error.hpp"

namespace ccnlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Both potential outcomes, only available for synthetic data.
struct PotentialOutcomes {
  std::vector<double> y0;
  std::vector<double> y1;
};

/// n observations of (x, t, y(t)); rows of `covariates` are units.
struct Dataset {
  Matrix covariates;  // n x p
  std::vector<int> treatment;
  std::vector<double> outcome;
  std::optional<PotentialOutcomes> potential;

  std::size_t size() const { return treatment.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(covariates.cols()); }

  double potential_outcome(int arm, std::size_t i) const {
    require(potential.has_value(), "dataset carries no potential outcomes");
    return arm == 0 ? potential->y0[i] : potential->y1[i];
  }

  std::vector<std::size_t> arm_indices(int arm) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < size(); ++i)
      if (treatment[i] == arm) idx.push_back(i);
    return idx;
  }

  /// Checks shapes, NaNs, binary treatment and that both arms are populated.
  void validate() const {
    const auto n = size();
    require(n > 0, "dataset is empty");
    require(static_cast<std::size_t>(covariates.rows()) == n && outcome.size() == n,
            "dataset columns have inconsistent lengths");
    require(covariates.allFinite(), "covariates contain NaN or inf");
    std::size_t treated = 0;
    for (std::size_t i = 0; i < n; ++i) {
      require(treatment[i] == 0 || treatment[i] == 1, "treatment must be 0 or 1");
      require(std::isfinite(outcome[i]), "outcome contains NaN or inf");
      treated += static_cast<std::size_t>(treatment[i]);
    }
    if (potential) {
      require(potential->y0.size() == n && potential->y1.size() == n,
              "potential outcome columns have inconsistent lengths");
    }
    require(treated > 0 && treated < n,
            "positivity violated: both treatment arms must be non-empty");
  }

  Dataset subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.covariates.resize(static_cast<Eigen::Index>(rows.size()), covariates.cols());
    out.treatment.reserve(rows.size());
    out.outcome.reserve(rows.size());
    if (potential) out.potential.emplace();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto i = rows[r];
      out.covariates.row(static_cast<Eigen::Index>(r)) = covariates.row(static_cast<Eigen::Index>(i));
      out.treatment.push_back(treatment[i]);
      out.outcome.push_back(outcome[i]);
      if (potential) {
        out.potential->y0.push_back(potential->y0[i]);
        out.potential->y1.push_back(potential->y1[i]);
      }
    }
    return out;
  }

  /// FNV-1a over the raw bytes of every column; used to prove pairing of
  /// datasets across ablation variants.
  std::uint64_t checksum() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&h](const void* data, std::size_t bytes) {
      const auto* p = static_cast<const unsigned char*>(data);
      for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
      }
    };
    feed(covariates.data(), sizeof(double) * static_cast<std::size_t>(covariates.size()));
    feed(treatment.data(), sizeof(int) * treatment.size());
    feed(outcome.data(), sizeof(double) * outcome.size());
    if (potential) {
      feed(potential->y0.data(), sizeof(double) * potential->y0.size());
      feed(potential->y1.data(), sizeof(double) * potential->y1.size());
    }
    return h;
  }
};

/// Gathers the given rows of X (n x p) as columns of a p x |rows| matrix.
inline Matrix gather_columns(const Matrix& x, std::span<const std::size_t> rows) {
  Matrix out(x.cols(), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    out.col(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(rows[r])).transpose();
  return out;
}

}  // namespace ccnlab
