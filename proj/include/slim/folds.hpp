#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slim/dataset.hpp"

namespace slim {

/// Held-out test rows plus a cross-validation fold for every training row.
struct FoldAssignment {
  std::vector<bool> test_mask;
  std::vector<int> cv_fold;  ///< -1 for test rows, else 0..num_folds-1
  std::uint64_t seed = 0;
  double test_ratio = 1.0 / 3.0;
  int num_folds = 5;

  std::vector<std::size_t> test_rows() const;
  std::vector<std::size_t> training_rows() const;
  /// Training rows outside `fold` (the fit set when `fold` validates).
  std::vector<std::size_t> fold_training_rows(int fold) const;
  std::vector<std::size_t> fold_validation_rows(int fold) const;

  /// {seed, test_ratio, num_folds, test_indices, fold_of_row}
  std::string to_json() const;
  static FoldAssignment from_json(const std::string& text);
};

/// Stratified split: the test share of each class is allotted by largest
/// remainder so the total is round(N * test_ratio); training rows of each
/// class are dealt round-robin into folds after a seeded shuffle.
/// Throws ConfigError if test_ratio is outside (0,1) or a class has fewer
/// rows than folds.
FoldAssignment make_folds(const BinaryDataset& dataset, std::uint64_t seed, double test_ratio = 1.0 / 3.0,
                          int num_folds = 5);

}  // namespace slim
