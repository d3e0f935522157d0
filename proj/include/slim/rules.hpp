#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slim/dataset.hpp"
#include "slim/rational.hpp"

namespace slim {

/// Counts behind "IF antecedent THEN y = +1".
struct RuleMetrics {
  std::int64_t rows = 0;
  std::int64_t antecedent_rows = 0;  ///< rows where every antecedent feature is 1
  std::int64_t joint_rows = 0;       ///< ... and y = +1
  std::int64_t positive_rows = 0;    ///< rows with y = +1

  Rational support() const;
  /// Empty when the antecedent never holds.
  std::optional<Rational> confidence() const;
  /// confidence / P(y=+1); empty when undefined.
  std::optional<Rational> lift() const;
};

/// Throws ConfigError for an empty antecedent or an out-of-range index.
RuleMetrics rule_metrics(const BinaryDataset& data, std::span<const std::size_t> antecedent);

struct AssociationRule {
  std::vector<std::size_t> antecedent;  ///< ascending feature indices
  RuleMetrics metrics;
  Rational support;
  Rational confidence;
  Rational lift;
};

struct MiningOptions {
  Rational min_support = make_rational(1, 20);
  Rational min_confidence = make_rational(1, 100);
  int max_antecedent = 2;
  /// When nonempty, keep only rules using at least one of these features.
  std::vector<std::size_t> require_any;

  /// Throws ConfigError unless both thresholds lie in (0, 1] and
  /// max_antecedent is 1 or 2.
  void validate(std::size_t num_features) const;
};

/// All rules with support >= min_support and confidence >= min_confidence,
/// by lift, confidence and support (descending), then antecedent indices.
/// A pair is only examined when both singletons meet min_support.
std::vector<AssociationRule> mine_rules(const BinaryDataset& data, const MiningOptions& options);

/// "rule,lift,support,confidence" with the rule written as
/// "a AND b" over feature names.
std::string rules_to_csv(const std::vector<AssociationRule>& rules, const std::vector<std::string>& feature_names,
                         int digits = 4);

}  // namespace slim
