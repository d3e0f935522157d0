#pragma once

#include <optional>
#include <vector>

#include "slim/dataset.hpp"
#include "slim/model.hpp"

namespace slim {

/// Sorted, distinct indices of the nonzero coefficients of a model.
struct ActiveSet {
  std::vector<std::size_t> indices;

  static ActiveSet of(const ScoringSystem& model);
  std::size_t size() const { return indices.size(); }
};

/// Restricts every pattern to the columns in `active` and re-aggregates.
/// Loss of any model supported on `active` is unchanged.
AggregatedDataset project_active(const AggregatedDataset& data, const ActiveSet& active);

struct PolishConfig {
  std::size_t max_active = 12;
  std::optional<double> time_limit_seconds;
};

struct PolishResult {
  ScoringSystem model;
  ObjectiveValue value;
  /// False only when the time limit interrupted the search.
  bool optimal = true;
};

/// Re-optimizes the coefficients and intercept of `model` with its support
/// frozen. The result minimizes weighted 0-1 loss over the restricted
/// lattice; ties go to the smaller sum of |points|, then tie_break_less.
/// Throws ConfigError if the model is infeasible on the lattice or its
/// active set exceeds max_active.
PolishResult polish(const ScoringSystem& model, const AggregatedDataset& data, const PenaltyConfig& cfg,
                    const LatticeSpec& lattice, const PolishConfig& pcfg = {});

}  // namespace slim
