#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slim/dataset.hpp"

namespace slim {

/// A band is a closed interval [lower, upper] (either side may be infinite)
/// and takes part in overlap checking against the other bands of the same
/// source column. A threshold is a one-sided cut and may overlap freely
/// (e.g. prior_arrests>=1, >=2, >=5).
enum class CutKind { kBand, kThreshold };

struct CutRule {
  std::string name;
  CutKind kind = CutKind::kThreshold;
  ThresholdRule rule;

  static CutRule band(std::string name, std::string source, double lower, double upper);
  static CutRule threshold(std::string name, std::string source, Comparator comparator, double cut);
};

struct BinarizedColumn {
  FeatureSpec spec;
  std::vector<std::uint8_t> values;
};

/// One output column per rule. Throws DataError on NaN input and
/// ConfigError on non-finite cuts or overlapping bands.
std::vector<BinarizedColumn> binarize_continuous(std::span<const double> raw_column,
                                                 std::span<const CutRule> cuts);

/// Rules file for the encoder, one directive per line ('#' comments):
///   band       <source> <name> <lower|-inf> <upper|inf>
///   threshold  <source> <name> <le|lt|ge|gt> <value>
///   passthrough <source> [name]
struct EncodingPlan {
  struct Passthrough {
    std::string source;
    std::string name;
  };
  std::vector<CutRule> cuts;  ///< in file order
  std::vector<Passthrough> passthrough;
  /// Output order: index into `cuts` (>= 0) or ~index into `passthrough`.
  std::vector<long> order;
};

/// Throws ConfigError with "line N:" prefix on malformed directives.
EncodingPlan parse_encoding_rules(const std::string& text);

/// Applies the plan to a raw numeric CSV (header row, label column kept
/// verbatim) and returns the encoded dataset.
BinaryDataset encode_csv(const std::string& raw_path, const EncodingPlan& plan,
                         const std::string& label_column, const std::string& positive_token);

}  // namespace slim
