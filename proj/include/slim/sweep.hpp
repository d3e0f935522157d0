#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slim/dataset.hpp"
#include "slim/evaluation.hpp"
#include "slim/folds.hpp"
#include "slim/model.hpp"
#include "slim/polish.hpp"
#include "slim/solver.hpp"

namespace slim {

struct SweepProtocol {
  std::vector<Rational> w_plus_grid;
  int cv_folds = 5;
  std::size_t pool_size = 500;
  int max_terms = 8;

  /// "balanced" = 0.1..1.9 step 0.1, "imbalanced" = 1.815..1.995 step 0.005,
  /// "extreme" = 1.975..1.995 step 0.001. Throws ConfigError otherwise.
  static SweepProtocol preset(std::string_view name);
  /// Evenly spaced grid of `count` values strictly inside (0, 2).
  static SweepProtocol uniform(int count);

  /// Throws ConfigError for an empty grid, W+ outside [0, 2], duplicate
  /// grid values, fewer than two folds or max_terms < 1.
  void validate() const;
};

struct SweepOptions {
  SolveConfig solve;
  PolishConfig polish;
  unsigned threads = 1;
};

enum class PointStatus { kOk, kFailed };

struct SweepPoint {
  Rational w_plus;
  PointStatus status = PointStatus::kOk;
  std::string error;

  int chosen_terms = 0;
  std::vector<Rational> mean_validation_error;  ///< index k-1 for k terms
  ScoringSystem model;
  ConfusionCounts test;
  ConfusionCounts validation;  ///< pooled over folds at the chosen k
  Rational validation_weighted_error;
  SolveStatus full_status = SolveStatus::kOptimal;
  Rational full_gap;
  std::uint64_t nodes = 0;

  std::string model_id() const;
};

struct SweepResult {
  std::vector<SweepPoint> points;  ///< grid order
  RocCurve test_curve;             ///< successful points only
  RocCurve validation_curve;

  std::vector<OperatingPoint> validation_points() const;
};

/// Cost-sensitive sweep with nested cross-validation: for every W+, solve
/// on each fold's training rows and on all training rows, polish every pool
/// entry, choose the term count minimizing mean weighted validation error
/// (ties to fewer terms) and report the full-training model on the test
/// rows. Points run concurrently on `threads` workers; results do not depend
/// on the worker count.
SweepResult sweep(const BinaryDataset& data, const FoldAssignment& folds, const SweepProtocol& protocol,
                  const LatticeSpec& lattice, const SweepOptions& options);

}  // namespace slim
