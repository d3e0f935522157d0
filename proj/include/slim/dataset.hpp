#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace slim {

enum class FeatureKind { kBinary, kThresholdedContinuous };

enum class Comparator { kLessEqual, kLess, kGreaterEqual, kGreater, kBetween };

/// How a thresholded-continuous feature was derived from its source column.
/// kBetween is the closed band [lower, upper]; the one-sided comparators use
/// `lower` as the cut value.
struct ThresholdRule {
  std::string source_column;
  Comparator comparator = Comparator::kGreaterEqual;
  double lower = 0.0;
  double upper = 0.0;

  bool holds(double value) const;
};

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kBinary;
  std::optional<ThresholdRule> threshold_rule;
};

/// N x P matrix of 0/1 features with +1/-1 labels. Immutable after
/// construction; the constructor enforces every invariant.
class BinaryDataset {
 public:
  BinaryDataset(std::vector<FeatureSpec> features, std::vector<std::uint8_t> x_row_major,
                std::vector<int> labels);

  /// Convenience for small fixtures: each row is a 0/1 vector.
  static BinaryDataset from_rows(std::vector<std::string> names,
                                 const std::vector<std::vector<int>>& rows,
                                 const std::vector<int>& labels);

  std::size_t num_rows() const { return labels_.size(); }
  std::size_t num_features() const { return features_.size(); }
  const std::vector<FeatureSpec>& features() const { return features_; }
  std::vector<std::string> feature_names() const;

  std::span<const std::uint8_t> row(std::size_t i) const {
    return {x_.data() + i * num_features(), num_features()};
  }
  std::uint8_t at(std::size_t i, std::size_t j) const { return x_[i * num_features() + j]; }
  int label(std::size_t i) const { return labels_[i]; }
  const std::vector<int>& labels() const { return labels_; }

  std::size_t num_positive() const;
  std::size_t num_negative() const { return num_rows() - num_positive(); }

  /// Rows in the given order (duplicates allowed).
  BinaryDataset subset(std::span<const std::size_t> rows) const;

  /// Same rows, features restricted/reordered to `columns`.
  BinaryDataset select_features(std::span<const std::size_t> columns) const;

 private:
  std::vector<FeatureSpec> features_;
  std::vector<std::uint8_t> x_;
  std::vector<int> labels_;
};

/// One distinct feature pattern and how many rows carry it.
struct PatternCount {
  std::vector<std::uint8_t> pattern;
  std::int64_t count = 0;
};

struct ConflictPair {
  std::size_t positive_index = 0;
  std::size_t negative_index = 0;
};

/// Distinct positive/negative patterns with multiplicities. Pattern order is
/// first appearance in the source rows, which keeps everything downstream
/// deterministic.
struct AggregatedDataset {
  std::vector<std::string> feature_names;
  std::vector<PatternCount> positive_patterns;
  std::vector<PatternCount> negative_patterns;
  std::vector<ConflictPair> conflict_pairs;
  std::int64_t source_n = 0;

  std::size_t num_features() const { return feature_names.size(); }
  std::int64_t num_positive() const;
  std::int64_t num_negative() const;
};

AggregatedDataset aggregate(const BinaryDataset& dataset);

/// Expands counts back to rows: positives first, then negatives.
BinaryDataset expand(const AggregatedDataset& data);

/// Reads a 0/1 CSV with a header row. The label column is mapped to +1 when
/// it equals `positive_token`, -1 for the single other token. Throws
/// DataError naming the offending row/column.
BinaryDataset load_csv(const std::string& path, const std::string& label_column,
                       const std::string& positive_token);

/// Writes the dataset with labels rendered as "+1"/"-1" in `label_column`.
void write_csv(const BinaryDataset& dataset, const std::string& path,
               const std::string& label_column = "y");

struct ConditionalProbability {
  std::string feature;
  std::int64_t active = 0;           ///< rows with x_j = 1
  std::int64_t active_positive = 0;  ///< rows with x_j = 1 and y = +1
  /// Empty when the feature is never active.
  std::optional<double> probability;
};

std::vector<ConditionalProbability> conditional_probabilities(const BinaryDataset& dataset);

}  // namespace slim
